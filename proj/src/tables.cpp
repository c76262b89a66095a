#include "nct/tables.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "nct/linalg.hpp"

namespace nct {

namespace {

void all_words(int n, int max_length, std::vector<Word>& out) {
  std::vector<Word> layer{Word()};
  out.push_back(Word());
  for (int len = 1; len <= max_length; ++len) {
    std::vector<Word> next;
    for (const Word& w : layer)
      for (int k = 1; k <= n; ++k) next.push_back(w.concat(Word::letter(k)));
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
}

Monomial content(const Word& w) {
  Monomial c;
  for (int i = 0; i < w.size(); ++i) c = c * Monomial::variable(w[i] - 1);
  return c;
}

}  // namespace

ChartTables::ChartTables(int n, int d) : n_(n), d_(d) {
  if (n < 1 || n > kMaxVariables) throw std::invalid_argument("letter count out of range");
  if (d < 0 || d >= Word::kMaxLength) throw std::invalid_argument("truncation out of range");
  intern_bracket({});
  PbwBasis basis(n, d);
  std::vector<Word> words;
  all_words(n, d, words);
  for (const Word& w : words) {
    std::vector<PbwTerm> terms;
    if (w.empty()) {
      terms.push_back({Monomial(), 0, Rational(1)});
    } else {
      for (const auto& [m, c] : basis.normal_form(w)) {
        Monomial a;
        for (int k = 0; k < n; ++k) a.set_exponent(k, m.letter_exponents[static_cast<std::size_t>(k)]);
        terms.push_back({a, intern_bracket(m.brackets), c});
      }
    }
    pbw_.emplace(w, std::move(terms));
  }
  symmetric_.emplace(Word(), std::vector<PbwTerm>{{Monomial(), 0, Rational(1)}});
  for (int m = 1; m < d; ++m) build_symmetric(m, basis.lie_basis());
  for (WedgeMask s = 1; s < (WedgeMask{1} << n); ++s)
    for (const Word& w : words)
      if (w.size() < d) homotopy_.emplace(std::make_pair(s, w), compute_homotopy(s, w));
}

int ChartTables::intern_bracket(const std::vector<Word>& factors) {
  auto it = bracket_index_.find(factors);
  if (it != bracket_index_.end()) return it->second;
  int id = static_cast<int>(brackets_.size());
  brackets_.push_back(factors);
  LinearWords expansion{{Word(), Rational(1)}};
  for (const Word& f : factors) expansion = multiply(expansion, bracketing(f));
  bracket_expansions_.push_back(std::move(expansion));
  bracket_index_.emplace(factors, id);
  return id;
}

int ChartTables::bracket_id(const std::vector<Word>& factors) const {
  auto it = bracket_index_.find(factors);
  if (it == bracket_index_.end()) throw std::invalid_argument("unknown bracket monomial");
  return it->second;
}

Word ChartTables::ordered_word(const Monomial& a, int n) {
  Word w;
  for (int k = 0; k < n; ++k)
    for (int r = 0; r < a.exponent(k); ++r) w.push_back(k + 1);
  return w;
}

const std::vector<ChartTables::PbwTerm>& ChartTables::decomposition(const Word& w) const {
  auto it = pbw_.find(w);
  if (it == pbw_.end()) throw std::length_error("word '" + w.str() + "' outside the table range");
  return it->second;
}

LinearWords ChartTables::symmetrize(const Monomial& letters, const std::vector<Word>& brackets, int n) {
  std::vector<Word> factors;
  for (int k = 0; k < n; ++k)
    for (int r = 0; r < letters.exponent(k); ++r) factors.push_back(Word::letter(k + 1));
  factors.insert(factors.end(), brackets.begin(), brackets.end());
  std::sort(factors.begin(), factors.end());
  // (1/k!) sum over S_k equals a sum over distinct arrangements weighted by prod(mult!)/k!.
  Rational weight(1);
  for (std::size_t i = 0, run = 0; i < factors.size(); ++i) {
    run = (i > 0 && factors[i] == factors[i - 1]) ? run + 1 : 1;
    weight *= Rational(static_cast<long>(run));
    weight /= Rational(static_cast<long>(i + 1));
  }
  std::map<Word, LinearWords> expansions;
  for (const Word& f : factors)
    if (!expansions.count(f)) expansions.emplace(f, bracketing(f));
  LinearWords out;
  do {
    LinearWords product{{Word(), Rational(1)}};
    for (const Word& f : factors) product = multiply(product, expansions.at(f));
    for (const auto& [w, c] : product) add_to(out, w, weight * c);
  } while (std::next_permutation(factors.begin(), factors.end()));
  return out;
}

void ChartTables::build_symmetric(int degree, const std::vector<Word>& lie_basis) {
  struct Element {
    Monomial letters;
    std::vector<Word> brackets;
  };
  std::map<Monomial, std::vector<Element>> columns;
  Element current;
  std::function<void(std::size_t, int, Monomial)> enumerate = [&](std::size_t from, int left, Monomial c) {
    if (left == 0) {
      columns[c].push_back(current);
      return;
    }
    for (std::size_t i = from; i < lie_basis.size(); ++i) {
      const Word& u = lie_basis[i];
      if (u.size() > left) break;
      Monomial saved = current.letters;
      if (u.size() == 1)
        current.letters = current.letters * Monomial::variable(u[0] - 1);
      else
        current.brackets.push_back(u);
      enumerate(i, left - u.size(), c * content(u));
      if (u.size() == 1)
        current.letters = saved;
      else
        current.brackets.pop_back();
    }
  };
  enumerate(0, degree, Monomial());

  std::map<Monomial, std::vector<Word>> rows;
  std::vector<Word> words;
  all_words(n_, degree, words);
  for (const Word& w : words)
    if (w.size() == degree) rows[content(w)].push_back(w);

  for (const auto& [c, cols] : columns) {
    const std::vector<Word>& ws = rows.at(c);
    if (ws.size() != cols.size()) throw std::logic_error("symmetric PBW block is not square");
    std::map<Word, std::size_t> row_of;
    for (std::size_t r = 0; r < ws.size(); ++r) row_of.emplace(ws[r], r);
    Matrix eta(ws.size(), cols.size());
    std::vector<int> ids;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      int id = intern_bracket(cols[j].brackets);
      ids.push_back(id);
      auto key = std::make_pair(cols[j].letters, id);
      auto it = symmetrized_.find(key);
      if (it == symmetrized_.end())
        it = symmetrized_.emplace(key, symmetrize(cols[j].letters, cols[j].brackets, n_)).first;
      for (const auto& [w, coeff] : it->second) eta(row_of.at(w), j) = coeff;
    }
    Matrix inv = inverse(eta);
    for (std::size_t r = 0; r < ws.size(); ++r) {
      std::vector<PbwTerm> terms;
      for (std::size_t j = 0; j < cols.size(); ++j)
        if (sgn(inv(j, r)) != 0) terms.push_back({cols[j].letters, ids[j], inv(j, r)});
      symmetric_.emplace(ws[r], std::move(terms));
    }
  }
}

const std::vector<ChartTables::PbwTerm>& ChartTables::symmetric_decomposition(const Word& w) const {
  auto it = symmetric_.find(w);
  if (it == symmetric_.end()) throw std::length_error("word '" + w.str() + "' outside the table range");
  return it->second;
}

const std::vector<ChartTables::FormTerm>& ChartTables::homotopy(WedgeMask s, const Word& w) const {
  static const std::vector<FormTerm> kEmpty;
  if (s == 0 || w.size() >= d_) return kEmpty;
  auto it = homotopy_.find({s, w});
  if (it == homotopy_.end()) throw std::out_of_range("homotopy table lookup outside range");
  return it->second;
}

std::vector<ChartTables::FormTerm> ChartTables::compute_homotopy(WedgeMask s, const Word& w) {
  // Contract y^a dy_S with the Euler field and divide by the total degree.
  std::map<std::pair<WedgeMask, Word>, Rational> acc;
  std::vector<int> indices = wedge_indices(s);
  int q = static_cast<int>(indices.size());
  for (const PbwTerm& t : symmetric_decomposition(w)) {
    int p = t.letters.degree();
    Rational weight = t.coeff / Rational(p + q);
    for (int j = 0; j < q; ++j) {
      int letter = indices[static_cast<std::size_t>(j)];
      WedgeMask rest = s & ~(WedgeMask{1} << (letter - 1));
      Monomial a = t.letters * Monomial::variable(letter - 1);
      auto key = std::make_pair(a, t.bracket_id);
      auto it = symmetrized_.find(key);
      if (it == symmetrized_.end())
        it = symmetrized_.emplace(key, symmetrize(a, bracket_factors(t.bracket_id), n_)).first;
      Rational c = (j % 2 == 0) ? weight : Rational(-weight);
      for (const auto& [ow, oc] : it->second) acc[{rest, ow}] += c * oc;
    }
  }
  std::vector<FormTerm> out;
  for (const auto& [key, c] : acc)
    if (sgn(c) != 0) out.push_back({key.first, key.second, c});
  return out;
}

const ChartTables& chart_tables(int n, int d) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<const ChartTables>> registry;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = registry[{n, d}];
  if (!slot) slot = std::make_unique<const ChartTables>(n, d);
  return *slot;
}

}  // namespace nct
