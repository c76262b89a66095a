#include <doctest.h>

#include <set>

#include "nct/koszul.hpp"
#include "unit/fixtures.hpp"

using namespace nct;
using testing::Gen;

namespace {

long binomial(int n, int r) {
  long b = 1;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

TensorPoly words(int n, int d, std::initializer_list<std::pair<Word, int>> terms) {
  TensorPoly t(n, d);
  for (const auto& [w, c] : terms) t.add_term(w, Poly(n, Rational(c)));
  return t;
}

// Words of length m in {1, 2} with no factor 12.
long avoiding_12(int m) {
  long count = 0;
  for (long bits = 0; bits < (1L << m); ++bits) {
    bool ok = true;
    for (int p = 0; p + 1 < m; ++p)
      if (((bits >> p) & 1) == 0 && ((bits >> (p + 1)) & 1) == 1) ok = false;
    if (ok) ++count;
  }
  return count;
}

// Wedge of a 2-subset of {1,2,3} (E^2 index r) with e_k, as a sign on e123.
int wedge_two_one(int r, int k) {
  static const int pairs[3][2] = {{1, 2}, {1, 3}, {2, 3}};
  int a = pairs[r][0], b = pairs[r][1];
  if (k == a || k == b) return 0;
  return (k < a ? 1 : 0) + (k < b ? 1 : 0) == 1 ? -1 : 1;
}

int wedge_one_two(int k, int r) {
  static const int pairs[3][2] = {{1, 2}, {1, 3}, {2, 3}};
  int a = pairs[r][0], b = pairs[r][1];
  if (k == a || k == b) return 0;
  return (k > a ? 1 : 0) + (k > b ? 1 : 0) == 1 ? -1 : 1;
}

// Unknown index of m3(e_a, e_b, e_c) -> E^2 basis r.
std::size_t unknown(int a, int b, int c, int r) { return static_cast<std::size_t>((((a - 1) * 3 + (b - 1)) * 3 + (c - 1)) * 3 + r); }

// Linear constraints on m3 from the four-input identity e_a m3(b,c,d) - m3(a,b,c) e_d = 0.
Matrix m3_constraints() {
  Matrix m(81, 81);
  std::size_t row = 0;
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b)
      for (int c = 1; c <= 3; ++c)
        for (int d = 1; d <= 3; ++d, ++row)
          for (int r = 0; r < 3; ++r) {
            m(row, unknown(b, c, d, r)) += Rational(wedge_one_two(a, r));
            m(row, unknown(a, b, c, r)) -= Rational(wedge_two_one(r, d));
          }
  return m;
}

MinimalAInfinity with_m3(const std::vector<Rational>& x) {
  MinimalAInfinity alg = MinimalAInfinity::exterior(3);
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b)
      for (int c = 1; c <= 3; ++c)
        for (int r = 0; r < 3; ++r) {
          const Rational& v = x[unknown(a, b, c, r)];
          if (sgn(v) != 0) alg.add_product({{1, a - 1}, {1, b - 1}, {1, c - 1}}, {2, r}, v);
        }
  return alg;
}

bool satisfies(const Matrix& m, const std::vector<Rational>& x) {
  for (const Rational& v : m.apply(x))
    if (sgn(v) != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("exterior algebra satisfies the identities and dualizes to commutators") {
  for (int n = 2; n <= 3; ++n) {
    MinimalAInfinity alg = MinimalAInfinity::exterior(n);
    for (int r = 0; r <= n; ++r) CHECK(alg.dims()[static_cast<std::size_t>(r)] == binomial(n, r));
    AInfinityReport report = validate_ainfinity(alg);
    REQUIRE(report.entries.size() == 1);
    CHECK(report.entries[0].tuples == static_cast<std::size_t>((1 << n) * (1 << n) * (1 << n)));
    CHECK(report.ok());
    CHECK(bar_dual_square_defects(bar_dual(alg), 6).empty());

    KoszulDualPresentation pres = relation_ideal(alg, 4);
    CHECK(pres.relations.size() == static_cast<std::size_t>(binomial(n, 2)));
    CHECK(pres.relations_independent);
    std::set<std::pair<int, int>> seen;
    for (const TensorPoly& rel : pres.relations) {
      REQUIRE(rel.terms().size() == 2);
      auto it = rel.terms().begin();
      Word w1 = it->first;
      Rational c1 = it->second.constant_term();
      ++it;
      CHECK(w1.size() == 2);
      CHECK(it->first == Word{w1[1], w1[0]});
      CHECK(it->second.constant_term() == -c1);
      CHECK(abs(c1) == 1);
      seen.insert({w1[0], w1[1]});
    }
    CHECK(seen.size() == pres.relations.size());
    for (int m = 0; m <= 4; ++m) CHECK(pres.quotient_dims[static_cast<std::size_t>(m)] == binomial(n + m - 1, m));
  }
}

TEST_CASE("curve-type algebra has no relations") {
  for (int n = 1; n <= 3; ++n) {
    MinimalAInfinity alg = MinimalAInfinity::curve(n);
    CHECK(validate_ainfinity(alg).ok());
    CHECK(bar_dual_differential(alg, 4).empty());
    KoszulDualPresentation pres = relation_ideal(alg, 4);
    CHECK(pres.relations.empty());
    long power = 1;
    for (int m = 0; m <= 4; ++m, power *= n) CHECK(pres.quotient_dims[static_cast<std::size_t>(m)] == power);
  }
}

TEST_CASE("quotient dimensions against brute-force word counts") {
  std::vector<long> dims = quotient_dimensions(2, {words(2, 6, {{Word{1, 2}, 1}})}, 6);
  for (int m = 0; m <= 6; ++m) CHECK(dims[static_cast<std::size_t>(m)] == avoiding_12(m));

  // A relation with a cubic tail has the same associated graded as its leading part.
  std::vector<long> tail = quotient_dimensions(2, {words(2, 6, {{Word{1, 2}, 1}, {Word{2, 2, 2}, 3}})}, 6);
  CHECK(tail[2] == avoiding_12(2));
  CHECK(tail[3] == avoiding_12(3));

  CHECK_THROWS_AS(quotient_dimensions(3, {words(2, 4, {{Word{1, 2}, 1}})}, 4), DimensionError);
}

TEST_CASE("unit products are implicit") {
  MinimalAInfinity alg = MinimalAInfinity::exterior(2);
  CHECK(alg.apply({{0, 0}, {1, 1}}) == Vector{{{1, 1}, Rational(1)}});
  CHECK(alg.apply({{2, 0}, {0, 0}}) == Vector{{{2, 0}, Rational(1)}});
  CHECK(alg.apply({{0, 0}, {1, 0}, {1, 1}}).empty());
  CHECK_THROWS_AS(alg.add_product({{0, 0}, {1, 0}}, {1, 0}, Rational(1)), std::invalid_argument);
  CHECK_THROWS_AS(alg.add_product({{1, 0}, {1, 1}}, {1, 0}, Rational(1)), std::invalid_argument);
  CHECK_THROWS_AS(alg.add_product({{1, 0}, {1, 2}}, {2, 0}, Rational(1)), std::out_of_range);
  CHECK_THROWS_AS(MinimalAInfinity({2, 1}), std::invalid_argument);
}

TEST_CASE("a corrupted product breaks associativity and the square of the bar dual") {
  MinimalAInfinity alg = MinimalAInfinity::exterior(3);
  alg.add_product({{1, 0}, {1, 0}}, {2, 0}, Rational(1));
  AInfinityReport report = validate_ainfinity(alg);
  REQUIRE(report.entries.size() == 1);
  CHECK(report.entries[0].n == 3);
  CHECK(report.entries[0].failures > 0);
  CHECK_FALSE(report.ok());
  CHECK_FALSE(bar_dual_square_defects(bar_dual(alg), 6).empty());
  CHECK_THROWS_AS(bar_dual_differential(alg, 4), AInfinityError);
  CHECK_THROWS_AS(relation_ideal(alg, 4), AInfinityError);
}

TEST_CASE("random m3 extensions: identities hold exactly when the bar dual squares to zero") {
  Matrix constraints = m3_constraints();
  auto kernel = nullspace(constraints);
  REQUIRE(!kernel.empty());
  Gen gen(71);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<Rational> x(81);
    for (const auto& v : kernel) {
      if (gen.uniform(0, 2) != 0) continue;
      Rational c = gen.rational();
      for (std::size_t j = 0; j < 81; ++j) x[j] += c * v[j];
    }
    MinimalAInfinity alg = with_m3(x);
    CHECK(default_identity_bound(alg) == (alg.max_arity() == 3 ? 5 : 3));
    CHECK(validate_ainfinity(alg).ok());
    CHECK(bar_dual_square_defects(bar_dual(alg), 7).empty());
    KoszulDualPresentation pres = relation_ideal(alg, 4);
    for (int m = 0; m <= 4; ++m) CHECK(pres.quotient_dims[static_cast<std::size_t>(m)] <= binomial(m + 2, m));

    std::vector<Rational> bad = x;
    std::size_t slot = static_cast<std::size_t>(gen.uniform(0, 80));
    bad[slot] += 1;
    if (satisfies(constraints, bad)) continue;
    MinimalAInfinity broken = with_m3(bad);
    CHECK_FALSE(validate_ainfinity(broken).ok());
    CHECK_FALSE(bar_dual_square_defects(bar_dual(broken), 7).empty());
  }
}

TEST_CASE("zero perturbation returns the unperturbed retraction") {
  Gen gen(5);
  testing::RetractionSample s = testing::random_retraction(gen, false);
  validate_retraction(s.r);
  PerturbedRetraction out = perturbation_series(s.r, 10);
  CHECK(out.terms == 0);
  CHECK(out.differential == s.r.small.d);
  CHECK(out.inclusion == s.r.i);
  CHECK(out.projection == s.r.p);
  CHECK(out.homotopy == s.r.h);
}

TEST_CASE("perturbed retractions satisfy the retraction identities") {
  Gen gen(19);
  int nontrivial = 0;
  for (int trial = 0; trial < 20; ++trial) {
    testing::RetractionSample s = testing::random_retraction(gen, true);
    const Retraction& r = s.r;
    PerturbedRetraction out = perturbation_series(r, 16);
    Matrix big = r.big.d + r.delta;
    std::size_t nb = r.big.size(), ns = r.small.size();
    CHECK((out.differential * out.differential).is_zero());
    CHECK(big * out.inclusion == out.inclusion * out.differential);
    CHECK(out.differential * out.projection == out.projection * big);
    CHECK(out.projection * out.inclusion == Matrix::identity(ns));
    CHECK(out.inclusion * out.projection == Matrix::identity(nb) + big * out.homotopy + out.homotopy * big);

    Matrix a = r.delta * inverse(Matrix::identity(nb) - r.h * r.delta);
    CHECK(out.differential == r.small.d + r.p * a * r.i);
    CHECK(out.homotopy == r.h + r.h * a * r.h);
    if (out.terms > 0) {
      ++nontrivial;
      CHECK_THROWS_AS(perturbation_series(r, out.terms - 1), DivergenceError);
    }
  }
  CHECK(nontrivial > 0);
}

TEST_CASE("nilpotent perturbation terminates after two terms") {
  // Basis a (deg 0), b (deg 1) with d a = b; classes c (deg 1) and e (deg 0).
  Retraction r;
  r.big.degree = {0, 1, 1, 0};
  r.big.filtration = {1, 1, 2, 0};
  r.big.d = Matrix(4, 4);
  r.big.d(1, 0) = 1;
  r.small.degree = {1, 0};
  r.small.filtration = {2, 0};
  r.small.d = Matrix(2, 2);
  r.i = Matrix(4, 2);
  r.i(2, 0) = 1;
  r.i(3, 1) = 1;
  r.p = Matrix(2, 4);
  r.p(0, 2) = 1;
  r.p(1, 3) = 1;
  r.h = Matrix(4, 4);
  r.h(0, 1) = -1;
  r.delta = Matrix(4, 4);
  r.delta(1, 3) = 1;
  r.delta(2, 0) = 1;
  PerturbedRetraction out = perturbation_series(r, 8);
  CHECK(out.terms == 2);
  CHECK(out.differential(0, 1) == -1);
  CHECK((out.differential * out.differential).is_zero());
}

TEST_CASE("perturbation series rejects non-convergent data") {
  Gen gen(3);
  testing::RetractionSample s = testing::random_retraction(gen, false);
  Retraction r = s.r;
  r.big.filtration.assign(r.big.size(), 0);
  Matrix g = Matrix::identity(r.big.size());
  // Any nonzero perturbation is non-raising for a constant filtration.
  for (std::size_t x = 0; x < r.big.size(); ++x)
    for (std::size_t y = 0; y < r.big.size(); ++y)
      if (x < y && r.big.degree[x] == r.big.degree[y]) g(x, y) = 1;
  r.delta = g * r.big.d * inverse(g) - r.big.d;
  if (!r.delta.is_zero()) CHECK_THROWS_AS(perturbation_series(r, 10), DivergenceError);

  Retraction bad = s.r;
  bad.h = Matrix(bad.big.size(), bad.big.size());
  CHECK_THROWS_AS(validate_retraction(bad), std::invalid_argument);
}
