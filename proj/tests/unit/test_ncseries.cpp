#include <doctest.h>

#include "nct/ncseries.hpp"
#include "unit/generators.hpp"

using namespace nct;

TEST_CASE("noncommutative product is associative and truncates") {
  testing::Gen gen(1);
  for (int trial = 0; trial < 100; ++trial) {
    int n = gen.uniform(1, 3);
    int d = gen.uniform(1, 5);
    TensorPoly a = gen.tensor(n, d), b = gen.tensor(n, d), c = gen.tensor(n, d);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    TensorPoly ab = a * b;
    for (const auto& [w, coeff] : ab.terms()) CHECK(w.size() <= d);
  }
  TensorPoly e1 = TensorPoly::letter(2, 1, 1);
  CHECK((e1 * e1).is_zero());
  CHECK_THROWS_AS(TensorPoly::letter(2, 3, 1) * TensorPoly::letter(2, 2, 1), DimensionError);
  CHECK_THROWS_AS(TensorPoly::letter(2, 3, 1) * TensorPoly::letter(3, 3, 1), DimensionError);
}

TEST_CASE("PBW decomposition round trips") {
  testing::Gen gen(2);
  for (int trial = 0; trial < 100; ++trial) {
    int n = gen.uniform(1, 3);
    int d = gen.uniform(1, n == 3 ? 4 : 5);
    TensorPoly x = gen.tensor(n, d, 6, 2);
    CHECK(recompose(pbw_decompose(x)) == x);
  }
}

TEST_CASE("ordered words have no bracket part") {
  TensorPoly ordered = TensorPoly::from_words(2, 3, {{Word{1, 1, 2}, Rational(1)}});
  CHECK_FALSE(pbw_decompose(ordered).has_bracket_part());
  TensorPoly reversed = TensorPoly::from_words(2, 3, {{Word{2, 1}, Rational(1)}});
  CHECK(pbw_decompose(reversed).str() == "(1)*e1*e2 + (-1)*[12]");
  YPoly y;
  y.n = 2;
  Monomial y1y2 = Monomial::variable(0) * Monomial::variable(1);
  y.add(y1y2, Poly(2, 1));
  CHECK(ordered_substitution(y, 3) == TensorPoly::from_words(2, 3, {{Word{1, 2}, Rational(1)}}));

  TensorPoly br = commutator(TensorPoly::letter(2, 3, 1), TensorPoly::letter(2, 3, 2));
  PbwSeries b = pbw_decompose(br);
  CHECK(b.has_bracket_part());
  CHECK(b.str() == "(1)*[12]");
}

TEST_CASE("ordered substitution rejects degrees beyond truncation") {
  YPoly y;
  y.n = 1;
  Monomial m;
  m.set_exponent(0, 4);
  y.add(m, Poly(1, 1));
  CHECK_THROWS_AS(ordered_substitution(y, 3), std::length_error);
}
