#include <doctest.h>

#include <algorithm>
#include <functional>

#include "nct/linalg.hpp"
#include "nct/lyndon.hpp"
#include "unit/generators.hpp"

using namespace nct;

namespace {

// Witt's formula: (1/m) sum_{k | m} mu(k) n^{m/k}.
long witt_count(int n, int m) {
  auto mobius = [](int k) {
    int result = 1;
    for (int p = 2; p * p <= k; ++p) {
      if (k % p) continue;
      k /= p;
      if (k % p == 0) return 0;
      result = -result;
    }
    return k > 1 ? -result : result;
  };
  long total = 0;
  for (int k = 1; k <= m; ++k) {
    if (m % k) continue;
    long power = 1;
    for (int j = 0; j < m / k; ++j) power *= n;
    total += mobius(k) * power;
  }
  return total / m;
}

bool lyndon_by_rotation(const std::vector<int>& w) {
  for (std::size_t i = 1; i < w.size(); ++i) {
    std::vector<int> r(w.begin() + static_cast<std::ptrdiff_t>(i), w.end());
    r.insert(r.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
    if (!(w < r)) return false;
  }
  return !w.empty();
}

std::vector<std::vector<int>> all_words(int n, int m) {
  std::vector<std::vector<int>> out{{}};
  for (int i = 0; i < m; ++i) {
    std::vector<std::vector<int>> next;
    for (const auto& w : out)
      for (int k = 1; k <= n; ++k) {
        auto v = w;
        v.push_back(k);
        next.push_back(v);
      }
    out = next;
  }
  return out;
}

LinearWords left_normed_dynkin(const Word& w) {
  LinearWords acc{{Word::letter(w[0]), Rational(1)}};
  for (int i = 1; i < w.size(); ++i) {
    LinearWords x{{Word::letter(w[i]), Rational(1)}};
    LinearWords next = multiply(acc, x);
    add_to(next, multiply(x, acc), Rational(-1));
    acc = next;
  }
  return acc;
}

LinearWords dynkin(const LinearWords& p) {
  LinearWords out;
  for (const auto& [w, c] : p) add_to(out, left_normed_dynkin(w), c);
  return out;
}

// All PBW monomials of total degree m built from the given Lyndon words.
void pbw_monomials(const std::vector<Word>& lie, int n, int m, std::size_t start, PbwMonomial& cur,
                   std::vector<PbwMonomial>& out) {
  if (m == 0) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < lie.size(); ++i) {
    const Word& w = lie[i];
    if (w.size() > m) continue;
    if (w.size() == 1)
      ++cur.letter_exponents[static_cast<std::size_t>(w[0] - 1)];
    else
      cur.brackets.push_back(w);
    pbw_monomials(lie, n, m - w.size(), i, cur, out);
    if (w.size() == 1)
      --cur.letter_exponents[static_cast<std::size_t>(w[0] - 1)];
    else
      cur.brackets.pop_back();
  }
}

}  // namespace

TEST_CASE("Lyndon enumeration matches Witt's formula and the rotation test") {
  for (int n = 1; n <= 3; ++n)
    for (int maxlen = 1; maxlen <= 6; ++maxlen) {
      auto words = enumerate_lyndon(n, maxlen);
      std::vector<long> counts(static_cast<std::size_t>(maxlen) + 1, 0);
      for (const auto& lw : words) ++counts[static_cast<std::size_t>(lw.word.size())];
      for (int m = 1; m <= maxlen; ++m) CHECK(counts[static_cast<std::size_t>(m)] == witt_count(n, m));
      CHECK(std::is_sorted(words.begin(), words.end(), [](const auto& a, const auto& b) { return a.word < b.word; }));
      std::size_t brute = 0;
      for (int m = 1; m <= maxlen; ++m)
        for (const auto& w : all_words(n, m))
          if (lyndon_by_rotation(w)) ++brute;
      CHECK(brute == words.size());
      for (const auto& lw : words) CHECK(lyndon_by_rotation(lw.word.letters()));
    }
}

TEST_CASE("standard factorization uses the longest proper Lyndon suffix") {
  for (const auto& lw : enumerate_lyndon(3, 6)) {
    if (lw.word.size() < 2) {
      CHECK_FALSE(lw.factorization.has_value());
      continue;
    }
    REQUIRE(lw.factorization.has_value());
    auto [u, v] = *lw.factorization;
    CHECK(u.concat(v) == lw.word);
    CHECK(lyndon_by_rotation(u.letters()));
    CHECK(lyndon_by_rotation(v.letters()));
    CHECK(u.letters() < v.letters());
    for (int i = 1; i < u.size(); ++i) CHECK_FALSE(lyndon_by_rotation(lw.word.suffix(i).letters()));
  }
  auto f = standard_factorization(Word{1, 1, 2});
  CHECK(f.first == Word{1});
  CHECK(f.second == Word{1, 2});
}

TEST_CASE("bracketings are triangular Lie elements") {
  for (const auto& lw : enumerate_lyndon(3, 6)) {
    LinearWords p = bracketing(lw.word);
    REQUIRE_FALSE(p.empty());
    CHECK(p.begin()->first == lw.word);
    CHECK(p.begin()->second == 1);
    // Dynkin-Specht-Wever: a homogeneous Lie element of degree m satisfies theta(P) = m P.
    LinearWords scaled;
    add_to(scaled, p, Rational(lw.word.size()));
    CHECK(dynkin(p) == scaled);
  }
  LinearWords p12 = bracketing(Word{1, 2});
  CHECK(p12 == LinearWords{{Word{1, 2}, Rational(1)}, {Word{2, 1}, Rational(-1)}});
}

TEST_CASE("PBW straightening agrees with a linear-solve oracle") {
  for (int n = 2; n <= 3; ++n) {
    int maxlen = n == 2 ? 5 : 4;
    PbwBasis basis(n, maxlen);
    for (int m = 1; m <= maxlen; ++m) {
      std::vector<PbwMonomial> monos;
      PbwMonomial cur;
      cur.letter_exponents.assign(static_cast<std::size_t>(n), 0);
      pbw_monomials(basis.lie_basis(), n, m, 0, cur, monos);
      auto words = all_words(n, m);
      REQUIRE(monos.size() == words.size());
      std::map<Word, std::size_t> row;
      for (std::size_t i = 0; i < words.size(); ++i) row[Word(words[i])] = i;
      Matrix expansion(words.size(), monos.size());
      for (std::size_t j = 0; j < monos.size(); ++j)
        for (const auto& [w, c] : monos[j].expand()) expansion(row.at(w), j) = c;
      Matrix inv = inverse(expansion);
      for (const auto& wv : words) {
        Word w(wv);
        PbwCombination nf = basis.normal_form(w);
        for (std::size_t j = 0; j < monos.size(); ++j) {
          auto it = nf.find(monos[j]);
          Rational got = it == nf.end() ? Rational(0) : it->second;
          CHECK(got == inv(j, row.at(w)));
        }
      }
    }
  }
}

TEST_CASE("PBW normal form of small words") {
  PbwCombination nf = pbw_normal_form({{Word{2, 1}, Rational(1)}}, 2, 2);
  REQUIRE(nf.size() == 2);
  PbwMonomial e1e2{{1, 1}, {}};
  PbwMonomial br{{0, 0}, {Word{1, 2}}};
  CHECK(nf.at(e1e2) == 1);
  CHECK(nf.at(br) == -1);
  CHECK(e1e2.str() == "e1*e2");
  CHECK(br.str() == "[12]");
  CHECK(PbwMonomial{{2, 0}, {Word{1, 2}, Word{1, 1, 2}}}.str() == "e1^2*[12]*[112]");
}

TEST_CASE("word packing") {
  Word w{1, 2, 3};
  CHECK(w.size() == 3);
  CHECK(w.str() == "123");
  CHECK(w.without(1) == Word{1, 3});
  CHECK(w.splice(1, Word{3, 3}) == Word{1, 3, 3, 3});
  CHECK(w.prefix(2) == Word{1, 2});
  CHECK(w.suffix(1) == Word{2, 3});
  CHECK(Word{2} < Word{1, 1});
  CHECK(Word{1, 2} < Word{2, 1});
  CHECK(wedge_sign(0b10, 0b01) == -1);
  CHECK(wedge_sign(0b01, 0b10) == 1);
  CHECK(wedge_sign(0b01, 0b01) == 0);
}
