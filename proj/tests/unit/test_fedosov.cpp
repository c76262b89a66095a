#include <doctest.h>

#include "nct/fedosov.hpp"
#include "nct/parallel.hpp"
#include "unit/fixtures.hpp"

using namespace nct;
using testing::Gen;

namespace {

TensorPoly letter(int n, int d, int k) { return TensorPoly::letter(n, d, k); }
TensorPoly scalar(int n, int d, const char* p) { return TensorPoly::scalar(n, d, Poly::parse(p, n)); }

DgElement random_positive_form(Gen& gen, int n, int d) {
  DgElement x = gen.form(n, d, 4, 2);
  return x - x.form_degree(0);
}

int first_failure(const SquareZeroReport& r) {
  int first = 0;
  for (const auto& e : r.entries)
    if (!e.zero && (first == 0 || e.degree < first)) first = e.degree;
  return first;
}

}  // namespace

TEST_CASE("torsion vanishes exactly for symmetric Christoffel symbols") {
  Gen gen(1);
  for (int trial = 0; trial < 10; ++trial) {
    ConnectionSpec spec = testing::random_torsion_free(gen, 3);
    for (int k = 1; k <= 3; ++k) CHECK(torsion_component(spec, k).is_zero());
  }
  ConnectionSpec bad(2);
  bad.set_gamma(1, 1, 2, Poly(2, 1));
  CHECK_FALSE(torsion_component(bad, 1).is_zero());
  CHECK(torsion_component(bad, 2).is_zero());
  CHECK_THROWS_AS(build_nc_connection(bad, 3), TorsionError);
}

TEST_CASE("flat charts have no higher corrections") {
  NCConnection nc = build_nc_connection(ConnectionSpec::flat(2), 4);
  for (int i = 2; i <= 4; ++i)
    for (int k = 1; k <= 2; ++k) CHECK(nc.nabla(i, k).is_zero());
  CHECK(verify_square_zero(nc).ok());
}

TEST_CASE("second correction is minus h of the curvature") {
  NCConnection nc = build_nc_connection(testing::sample_spec(), 3);
  GeneratorRule d1 = nc.rule(1);
  for (int k = 1; k <= 2; ++k) {
    DgElement curvature = extend_derivation(d1, extend_derivation(d1, DgElement::letter(2, 3, k)));
    CHECK(curvature.form_degree(2) == curvature);
    CHECK(curvature.component(1) == curvature);
    CHECK(tau(curvature).is_zero());
    CHECK(nc.nabla(2, k) == -homotopy(curvature));
  }
  CHECK_FALSE(nc.nabla(2, 1).is_zero());
  CHECK(verify_square_zero(nc).ok());
}

TEST_CASE("random torsion-free connections square to zero") {
  Gen gen(7);
  set_thread_count(2);
  for (int trial = 0; trial < 6; ++trial) {
    int n = gen.uniform(2, 3);
    int d = n == 2 ? 4 : 3;
    NCConnection nc = build_nc_connection(testing::random_torsion_free(gen, n), d);
    SquareZeroReport report = verify_square_zero(nc);
    CHECK(report.ok());
    CHECK(report.untracked_from == d);
    CHECK(report.entries.size() == static_cast<std::size_t>(n * d));
  }
  set_thread_count(1);
}

TEST_CASE("corrupted corrections are flagged") {
  NCConnection nc = build_nc_connection(testing::sample_spec(), 4);
  DgElement noise(2, 4);
  noise.add_term(0b01, Word{1, 1, 2}, Poly(2, 1));
  SquareZeroReport broken = verify_square_zero(nc.with_nabla(3, 1, nc.nabla(3, 1) + noise));
  CHECK_FALSE(broken.ok());
  CHECK(first_failure(broken) == 3);

  // A tau-exact change passes degree 3 and first shows up at degree 4.
  DgElement closed = tau(DgElement::from_tensor(TensorPoly::from_words(2, 4, {{Word{1, 2, 1, 2}, Rational(1)}})));
  SquareZeroReport late = verify_square_zero(nc.with_nabla(3, 1, nc.nabla(3, 1) + closed));
  CHECK_FALSE(late.ok());
  CHECK(first_failure(late) == 4);
}

TEST_CASE("conjugation identities hold through degree d-1") {
  Gen gen(17);
  for (int trial = 0; trial < 4; ++trial) {
    int n = gen.uniform(2, 3);
    int d = n == 2 ? 4 : 3;
    NCConnection nc = build_nc_connection(testing::random_torsion_free(gen, n), d);
    auto ops = conjugator(nc);
    for (int s = 0; s < 10; ++s) {
      DgElement x = gen.form(n, d, 4, 2);
      CHECK((ops.phi(nc.apply(x)) - tau(ops.phi(x))).vanishes_through(d - 1));
      CHECK((ops.phi_inverse(ops.phi(x)) - x).is_zero());
      DgElement y = random_positive_form(gen, n, d);
      CHECK((ops.h_D(nc.apply(y)) + nc.apply(ops.h_D(y)) - y).vanishes_through(d - 1));
    }
  }
}

TEST_CASE("flat local model") {
  NCConnection nc = build_nc_connection(ConnectionSpec::flat(2), 4);
  auto ops = conjugator(nc);
  CHECK(ops.phi(DgElement::one_form(2, 4, 1)) == DgElement::one_form(2, 4, 1));
  CHECK(ops.h_D(DgElement::one_form(2, 4, 1)) == DgElement::letter(2, 4, 1));
  FlatSection s1 = sigma_lift(nc, Poly::parse("x1", 2));
  CHECK(s1.value == scalar(2, 4, "x1") - letter(2, 4, 1));
  CHECK(sigma_lift(nc, Poly(2, 1)).value == scalar(2, 4, "1"));
  FlatSection s = sigma_lift(nc, Poly::parse("x1^2*x2", 2));
  CHECK(tau(ops.phi(DgElement::from_tensor(s.value))).vanishes_through(3));
}

TEST_CASE("sigma lifts are sections and flat products close") {
  Gen gen(23);
  NCConnection nc = build_nc_connection(testing::sample_spec(), 4);
  Poly f = Poly::parse("x1*x2", 2);
  FlatSection s = sigma_lift(nc, f);
  CHECK(s.value.component(0) == TensorPoly::scalar(2, 4, f));
  CHECK(s.witness.vanishes_through(3));

  FlatSection a = sigma_lift(nc, Poly::variable(2, 1));
  FlatSection b = sigma_lift(nc, Poly::variable(2, 2));
  FlatSection one = sigma_lift(nc, Poly(2, 1));
  CHECK(mul_flat(nc, a, one).value == a.value);
  FlatSection ab = mul_flat(nc, a, b);
  CHECK(ab.witness.vanishes_through(3));

  NCConnection other = build_nc_connection(ConnectionSpec::flat(2), 4);
  CHECK_THROWS_AS(mul_flat(other, a, b), std::invalid_argument);
}

TEST_CASE("degree-two commutator law") {
  NCConnection flat = build_nc_connection(ConnectionSpec::flat(2), 3);
  FlatSection a = sigma_lift(flat, Poly::variable(2, 1));
  FlatSection b = sigma_lift(flat, Poly::variable(2, 2));
  TensorPoly comm = mul_flat(flat, a, b).value - mul_flat(flat, b, a).value;
  CHECK(comm == letter(2, 3, 1) * letter(2, 3, 2) - letter(2, 3, 2) * letter(2, 3, 1));

  Gen gen(29);
  for (int trial = 0; trial < 5; ++trial) {
    int n = gen.uniform(2, 3);
    NCConnection nc = build_nc_connection(testing::random_torsion_free(gen, n), 3);
    Poly f = gen.poly(n, 2, 3), g = gen.poly(n, 2, 3);
    TensorPoly lhs = sigma_lift(nc, f).value * sigma_lift(nc, g).value - sigma_lift(nc, f * g).value;
    TensorPoly df(n, 3), dg(n, 3);
    for (int i = 1; i <= n; ++i) {
      df.add_term(Word::letter(i), f.partial(i));
      dg.add_term(Word::letter(i), g.partial(i));
    }
    TensorPoly half = (df * dg - dg * df) * Rational(1, 2);
    CHECK((lhs - half).truncated(2).is_zero());
  }
}

TEST_CASE("leading terms of flat sections") {
  NCConnection nc = build_nc_connection(ConnectionSpec::flat(2), 3);
  FlatSection a = sigma_lift(nc, Poly::variable(2, 1));
  FlatSection b = sigma_lift(nc, Poly::variable(2, 2));
  FlatSection c{mul_flat(nc, a, b).value - mul_flat(nc, b, a).value, DgElement(2, 3), nc.fingerprint()};
  LeadingTerm lt = leading_term(c);
  CHECK(lt.degree == 2);
  CHECK(lt.pbw.str() == "(1)*[12]");
  LeadingTerm la = leading_term(a);
  CHECK(la.degree == 0);
  CHECK(la.component == scalar(2, 3, "x1"));
}

TEST_CASE("leading-term dimensions of commutator products") {
  NCConnection flat = build_nc_connection(ConnectionSpec::flat(2), 5);
  CHECK(commutator_leading_dimensions(flat, 5) == std::vector<long>{1, 0, 1, 2, 4, 8});
  NCConnection curved = build_nc_connection(testing::sample_spec(), 4);
  CHECK(commutator_leading_dimensions(curved, 4) == std::vector<long>{1, 0, 1, 2, 4});
}

TEST_CASE("gauge transforms invert and compose") {
  Gen gen(31);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<TensorPoly> images;
    for (int k = 1; k <= 2; ++k) {
      TensorPoly img = letter(2, 4, k);
      for (int m = 2; m <= 4; ++m) img += gen.tensor(2, 4, 2, 1).component(m);
      images.push_back(img);
    }
    GaugeTransform phi(images);
    GaugeTransform inv = phi.inverse();
    CHECK(phi.compose(inv).is_identity());
    CHECK(inv.compose(phi).is_identity());
    TensorPoly x = gen.tensor(2, 4);
    TensorPoly y = gen.tensor(2, 4);
    CHECK(phi.apply(x * y) == phi.apply(x) * phi.apply(y));
  }
  CHECK_THROWS_AS(GaugeTransform({letter(2, 3, 2), letter(2, 3, 2)}), std::invalid_argument);
}

TEST_CASE("find_gauge on equal connections is the identity") {
  NCConnection nc = build_nc_connection(testing::sample_spec(), 3);
  CHECK(find_gauge(nc, nc).is_identity());
}

TEST_CASE("find_gauge recovers an explicit conjugation") {
  NCConnection nc = build_nc_connection(testing::sample_spec(), 3);
  std::vector<TensorPoly> images{letter(2, 3, 1) + scalar(2, 3, "x2") * (letter(2, 3, 1) * letter(2, 3, 2)),
                                 letter(2, 3, 2) + letter(2, 3, 2) * letter(2, 3, 2) * letter(2, 3, 1)};
  GaugeTransform phi(images);
  NCConnection target = conjugate(nc, phi);
  CHECK(verify_square_zero(target).ok());
  CHECK_FALSE(disagreement(nc, target, 2).empty());
  GaugeTransform found = find_gauge(nc, target);
  CHECK(disagreement(conjugate(nc, found), target, 2).empty());
}

TEST_CASE("find_gauge between different torsion-free connections") {
  Gen gen(37);
  for (int trial = 0; trial < 3; ++trial) {
    int n = gen.uniform(2, 3);
    NCConnection a = build_nc_connection(testing::random_torsion_free(gen, n), 3);
    NCConnection b = build_nc_connection(testing::random_torsion_free(gen, n), 3);
    GaugeTransform phi = find_gauge(a, b);
    CHECK(disagreement(conjugate(a, phi), b, 2).empty());
  }
}

TEST_CASE("tau-closed gauge pieces fix lower indices") {
  NCConnection nc = build_nc_connection(testing::sample_spec(), 4);
  TensorPoly br = letter(2, 4, 1) * letter(2, 4, 2) - letter(2, 4, 2) * letter(2, 4, 1);
  for (int m = 2; m <= 3; ++m) {
    TensorPoly piece = m == 2 ? br : br * letter(2, 4, 1) - letter(2, 4, 1) * br;
    CHECK(tau(DgElement::from_tensor(piece)).is_zero());
    GaugeTransform phi({letter(2, 4, 1) + piece, letter(2, 4, 2)});
    NCConnection moved = conjugate(nc, phi);
    CHECK(disagreement(nc, moved, m - 1).empty());
    CHECK(verify_square_zero(moved).ok());
  }
}
