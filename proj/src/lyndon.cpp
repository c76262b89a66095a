#include "nct/lyndon.hpp"

#include <algorithm>
#include <stdexcept>

namespace nct {

bool is_lyndon(const Word& w) {
  int n = w.size();
  if (n == 0) return false;
  for (int i = 1; i < n; ++i) {
    Word rotation = w.suffix(i).concat(w.prefix(i));
    if (!(w.letters() < rotation.letters())) return false;
  }
  return true;
}

std::pair<Word, Word> standard_factorization(const Word& w) {
  if (w.size() < 2 || !is_lyndon(w)) throw std::invalid_argument("standard factorization needs a Lyndon word of length >= 2");
  for (int i = 1; i < w.size(); ++i) {
    Word v = w.suffix(i);
    if (is_lyndon(v)) return {w.prefix(i), v};
  }
  throw std::logic_error("Lyndon word without Lyndon suffix");
}

std::vector<LyndonWord> enumerate_lyndon(int n, int max_length) {
  if (n < 1 || n > Word::kMaxLetter) throw std::invalid_argument("letter count out of range");
  if (max_length < 0 || max_length > Word::kMaxLength) throw std::invalid_argument("length bound out of range");
  std::vector<Word> words;
  if (max_length > 0) {
    // Duval's generation in lexicographic order.
    std::vector<int> w{1};
    while (!w.empty()) {
      words.emplace_back(w);
      std::size_t m = w.size();
      while (static_cast<int>(w.size()) < max_length) w.push_back(w[w.size() - m]);
      while (!w.empty() && w.back() == n) w.pop_back();
      if (!w.empty()) ++w.back();
    }
  }
  std::sort(words.begin(), words.end());
  std::vector<LyndonWord> out;
  out.reserve(words.size());
  for (const Word& w : words) {
    LyndonWord lw{w, std::nullopt};
    if (w.size() >= 2) lw.factorization = standard_factorization(w);
    out.push_back(lw);
  }
  return out;
}

LinearWords bracketing(const Word& lyndon) {
  if (lyndon.size() == 1) return {{lyndon, Rational(1)}};
  auto [u, v] = standard_factorization(lyndon);
  LinearWords pu = bracketing(u);
  LinearWords pv = bracketing(v);
  LinearWords out = multiply(pu, pv);
  add_to(out, multiply(pv, pu), Rational(-1));
  return out;
}

int PbwMonomial::degree() const {
  int d = 0;
  for (int a : letter_exponents) d += a;
  for (const Word& w : brackets) d += w.size();
  return d;
}

std::string PbwMonomial::str() const {
  std::string out;
  auto append = [&out](const std::string& f) {
    if (!out.empty()) out += "*";
    out += f;
  };
  for (std::size_t i = 0; i < letter_exponents.size(); ++i) {
    int a = letter_exponents[i];
    if (a == 0) continue;
    std::string f = "e" + std::to_string(i + 1);
    if (a > 1) f += "^" + std::to_string(a);
    append(f);
  }
  for (const Word& w : brackets) append("[" + w.str() + "]");
  return out.empty() ? "1" : out;
}

LinearWords PbwMonomial::expand() const {
  LinearWords out{{Word(), Rational(1)}};
  for (std::size_t i = 0; i < letter_exponents.size(); ++i)
    for (int r = 0; r < letter_exponents[i]; ++r) out = multiply(out, {{Word::letter(static_cast<int>(i) + 1), Rational(1)}});
  for (const Word& w : brackets) out = multiply(out, bracketing(w));
  return out;
}

PbwBasis::PbwBasis(int n, int max_length) : n_(n), max_length_(max_length) {
  for (const auto& lw : enumerate_lyndon(n, std::max(max_length, 1))) {
    index_[lw.word] = static_cast<int>(basis_.size());
    basis_.push_back(lw.word);
    expansion_.push_back(bracketing(lw.word));
  }
}

int PbwBasis::index_of(const Word& lyndon) const {
  auto it = index_.find(lyndon);
  if (it == index_.end()) throw std::invalid_argument("'" + lyndon.str() + "' is not a Lyndon basis word");
  return it->second;
}

std::vector<std::pair<int, Rational>> PbwBasis::lie_coordinates(LinearWords lie_element) const {
  // P_w = w + (lexicographically larger words), so peel off the smallest word each round.
  std::vector<std::pair<int, Rational>> coords;
  while (!lie_element.empty()) {
    auto [w, c] = *lie_element.begin();
    auto it = index_.find(w);
    if (it == index_.end()) throw std::invalid_argument("element is not in the free Lie algebra");
    Rational coeff = c;
    coords.emplace_back(it->second, coeff);
    add_to(lie_element, expansion_[static_cast<std::size_t>(it->second)], -coeff);
  }
  std::sort(coords.begin(), coords.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return coords;
}

const std::vector<std::pair<int, Rational>>& PbwBasis::bracket(int a, int b) {
  auto key = std::make_pair(a, b);
  auto it = bracket_cache_.find(key);
  if (it != bracket_cache_.end()) return it->second;
  const LinearWords& pa = expansion_[static_cast<std::size_t>(a)];
  const LinearWords& pb = expansion_[static_cast<std::size_t>(b)];
  LinearWords commutator = multiply(pa, pb);
  add_to(commutator, multiply(pb, pa), Rational(-1));
  return bracket_cache_.emplace(key, lie_coordinates(std::move(commutator))).first->second;
}

const PbwBasis::SequenceCombination& PbwBasis::straighten(const Sequence& seq) {
  auto it = normal_cache_.find(seq);
  if (it != normal_cache_.end()) return it->second;
  SequenceCombination result;
  std::size_t i = 0;
  while (i + 1 < seq.size() && seq[i] <= seq[i + 1]) ++i;
  if (i + 1 >= seq.size()) {
    result.emplace(seq, Rational(1));
  } else {
    // b_a b_b = b_b b_a + [b_a, b_b] for a > b.
    Sequence swapped = seq;
    std::swap(swapped[i], swapped[i + 1]);
    auto accumulate = [&result](const SequenceCombination& part, const Rational& scale) {
      for (const auto& [s, c] : part) {
        auto [slot, inserted] = result.try_emplace(s, c * scale);
        if (!inserted) {
          slot->second += c * scale;
          if (sgn(slot->second) == 0) result.erase(slot);
        }
      }
    };
    accumulate(straighten(swapped), Rational(1));
    std::vector<std::pair<int, Rational>> br = bracket(seq[i], seq[i + 1]);
    for (const auto& [idx, c] : br) {
      Sequence shorter(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(i));
      shorter.push_back(idx);
      shorter.insert(shorter.end(), seq.begin() + static_cast<std::ptrdiff_t>(i) + 2, seq.end());
      accumulate(straighten(shorter), c);
    }
  }
  return normal_cache_.emplace(seq, std::move(result)).first->second;
}

PbwMonomial PbwBasis::to_monomial(const Sequence& sorted) const {
  PbwMonomial m;
  m.letter_exponents.assign(static_cast<std::size_t>(n_), 0);
  for (int idx : sorted) {
    if (idx < n_)
      ++m.letter_exponents[static_cast<std::size_t>(idx)];
    else
      m.brackets.push_back(basis_[static_cast<std::size_t>(idx)]);
  }
  return m;
}

PbwCombination PbwBasis::normal_form(const Word& w) {
  if (w.size() > max_length_) throw std::length_error("word exceeds the PBW length bound");
  Sequence seq;
  for (int k : w.letters()) {
    if (k > n_) throw std::out_of_range("letter outside the alphabet");
    seq.push_back(k - 1);
  }
  PbwCombination out;
  for (const auto& [s, c] : straighten(seq)) out.emplace(to_monomial(s), c);
  return out;
}

PbwCombination PbwBasis::normal_form(const LinearWords& x) {
  PbwCombination out;
  for (const auto& [w, c] : x)
    for (const auto& [m, mc] : normal_form(w)) {
      auto [slot, inserted] = out.try_emplace(m, mc * c);
      if (!inserted) {
        slot->second += mc * c;
        if (sgn(slot->second) == 0) out.erase(slot);
      }
    }
  return out;
}

PbwCombination pbw_normal_form(const LinearWords& x, int n, int max_length) {
  PbwBasis basis(n, max_length);
  return basis.normal_form(x);
}

}  // namespace nct
