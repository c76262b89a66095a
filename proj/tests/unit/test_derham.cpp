#include <doctest.h>

#include "nct/derham.hpp"
#include "unit/generators.hpp"

using namespace nct;

namespace {

int total_form_degree(const DgElement& x) {
  int q = -1;
  for (const auto& [k, c] : x.terms()) {
    int kq = wedge_degree(k.wedge);
    if (q >= 0 && q != kq) return -1;
    q = kq;
  }
  return q;
}

DgElement graded_sign(const DgElement& x) {
  DgElement out(x.letters(), x.truncation());
  for (const auto& [k, c] : x.terms()) out.add_term(k.wedge, k.word, wedge_degree(k.wedge) % 2 ? -c : c);
  return out;
}

}  // namespace

TEST_CASE("tau and h square to zero and h contracts tau") {
  testing::Gen gen(3);
  for (int n = 2; n <= 3; ++n)
    for (int d = 1; d <= 5; ++d)
      for (int trial = 0; trial < 20; ++trial) {
        DgElement x = gen.form(n, d, 5, 2).truncated(d - 1);
        CHECK(tau(tau(x)).is_zero());
        CHECK(homotopy(homotopy(x)).is_zero());
        DgElement positive = x - x.form_degree(0);
        CHECK(tau(homotopy(positive)) + homotopy(tau(positive)) == positive);
      }
}

TEST_CASE("on functions id - h tau projects onto bracket products") {
  testing::Gen gen(4);
  for (int trial = 0; trial < 40; ++trial) {
    int n = gen.uniform(2, 3);
    int d = 4;
    TensorPoly t = gen.tensor(n, d, 5, 2);
    DgElement x = DgElement::from_tensor(t);
    DgElement rest = x - homotopy(tau(x));
    CHECK(tau(rest).is_zero());
    for (const auto& [factors, f] : pbw_decompose(rest.to_tensor()).entries)
      for (const auto& [y, c] : f.terms) CHECK(y.is_one());
  }
}

TEST_CASE("homotopy on a one-form") {
  DgElement x(2, 3);
  x.add_term(0b01, Word{2}, Poly(2, 1));
  DgElement expect(2, 3);
  expect.add_term(0, Word{1, 2}, Poly(2, Rational(1, 4)));
  expect.add_term(0, Word{2, 1}, Poly(2, Rational(1, 4)));
  CHECK(homotopy(x) == expect);
  CHECK(homotopy(DgElement::letter(2, 3, 1)).is_zero());
  CHECK(homotopy(DgElement::one_form(2, 3, 1)) == DgElement::letter(2, 3, 1));
}

namespace {

// Constant linear substitution e_i -> sum g[i][j] e_j, dx_i -> sum g[i][j] dx_j.
DgElement substitute(const DgElement& x, const std::vector<std::vector<Rational>>& g) {
  int n = x.letters(), d = x.truncation();
  std::vector<DgElement> letters, forms;
  for (int i = 1; i <= n; ++i) {
    DgElement e(n, d), f(n, d);
    for (int j = 1; j <= n; ++j) {
      e += DgElement::letter(n, d, j) * g[i - 1][j - 1];
      f += DgElement::one_form(n, d, j) * g[i - 1][j - 1];
    }
    letters.push_back(e);
    forms.push_back(f);
  }
  DgElement out(n, d);
  for (const auto& [k, c] : x.terms()) {
    REQUIRE(c.is_constant());
    DgElement term = DgElement::scalar(n, d, c);
    for (int i : wedge_indices(k.wedge)) term = term * forms[static_cast<std::size_t>(i - 1)];
    for (int p = 0; p < k.word.size(); ++p) term = term * letters[static_cast<std::size_t>(k.word[p] - 1)];
    out += term;
  }
  return out;
}

}  // namespace

TEST_CASE("homotopy commutes with linear changes of frame") {
  testing::Gen gen(17);
  for (int trial = 0; trial < 20; ++trial) {
    int n = gen.uniform(2, 3);
    int d = 5;
    std::vector<std::vector<Rational>> g(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
    for (auto& row : g)
      for (auto& v : row) v = Rational(gen.uniform(-2, 2));
    DgElement x(n, d);
    for (int t = 0; t < 4; ++t) {
      WedgeMask s = static_cast<WedgeMask>(gen.uniform(1, (1 << n) - 1));
      x.add_term(s, gen.word(n, gen.uniform(0, d - 1)), Poly(n, Rational(gen.uniform(-3, 3))));
    }
    CHECK(substitute(homotopy(x), g) == homotopy(substitute(x, g)));
  }
}

TEST_CASE("tau is a graded derivation and h is coefficient-linear") {
  testing::Gen gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    int n = gen.uniform(2, 3);
    int d = 4;
    DgElement x = gen.form(n, d, 3);
    DgElement y = gen.form(n, d, 3);
    CHECK(tau(x * y).truncated(d - 1) == (tau(x) * y + graded_sign(x) * tau(y)).truncated(d - 1));
    Poly f = gen.poly(n, 2, 3);
    DgElement fx = DgElement::scalar(n, d, f) * x;
    CHECK(homotopy(fx) == DgElement::scalar(n, d, f) * homotopy(x));
  }
}

TEST_CASE("de Rham differential squares to zero and obeys Leibniz") {
  testing::Gen gen(8);
  for (int trial = 0; trial < 50; ++trial) {
    int n = gen.uniform(2, 3);
    DgElement x = gen.form(n, 3, 3, 3);
    DgElement y = gen.form(n, 3, 3, 3);
    CHECK(de_rham(de_rham(x)).is_zero());
    CHECK(de_rham(x * y) == de_rham(x) * y + graded_sign(x) * de_rham(y));
  }
}

TEST_CASE("extend_derivation reproduces tau from letter images") {
  testing::Gen gen(13);
  for (int n = 2; n <= 3; ++n) {
    GeneratorRule rule{1, false, {}};
    for (int k = 1; k <= n; ++k) rule.letter_images.push_back(DgElement::one_form(n, 4, k));
    for (int trial = 0; trial < 20; ++trial) {
      DgElement x = gen.form(n, 4, 4, 2);
      CHECK(extend_derivation(rule, x) == tau(x));
    }
  }
}

TEST_CASE("extended derivations satisfy the graded Leibniz rule") {
  testing::Gen gen(21);
  for (int trial = 0; trial < 30; ++trial) {
    int n = gen.uniform(2, 3);
    int d = 4;
    GeneratorRule rule{1, true, {}};
    for (int k = 1; k <= n; ++k) {
      DgElement img(n, d);
      for (int i = 1; i <= n; ++i)
        img.add_term(WedgeMask{1} << (i - 1), gen.word(n, gen.uniform(0, 2)), gen.poly(n, 1, 2));
      rule.letter_images.push_back(img);
    }
    DgElement x = gen.form(n, d, 3);
    DgElement y = gen.form(n, d, 3);
    // Truncation drops words of length d + 1 whose images land back in degree d.
    CHECK(extend_derivation(rule, x * y).truncated(d - 1) ==
          (extend_derivation(rule, x) * y + graded_sign(x) * extend_derivation(rule, y)).truncated(d - 1));
  }
}

TEST_CASE("derivation rules are validated") {
  GeneratorRule bad{1, false, {DgElement::letter(2, 3, 1), DgElement::letter(2, 3, 2)}};
  CHECK_THROWS_AS(extend_derivation(bad, DgElement::letter(2, 3, 1)), std::invalid_argument);
  GeneratorRule wrong_count{1, false, {DgElement::one_form(2, 3, 1)}};
  CHECK_THROWS_AS(extend_derivation(wrong_count, DgElement::letter(2, 3, 1)), std::invalid_argument);
  GeneratorRule two_form{2, true, {}};
  CHECK_THROWS_AS(extend_derivation(two_form, DgElement::letter(2, 3, 1)), std::invalid_argument);
  CHECK(total_form_degree(tau(DgElement::letter(2, 3, 1))) == 1);
}
