#pragma once

#include "nct/fedosov.hpp"
#include "nct/koszul.hpp"
#include "nct/ncmodule.hpp"
#include "unit/generators.hpp"

namespace nct::testing {

/// Symmetric Christoffel symbols with random polynomial entries of degree <= max_degree.
inline ConnectionSpec random_torsion_free(Gen& gen, int n, int max_degree = 2, int density = 2) {
  ConnectionSpec spec(n);
  for (int k = 1; k <= n; ++k)
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j) {
        if (gen.uniform(0, density) != 0) continue;
        Poly g = gen.poly(n, max_degree, 2);
        spec.set_gamma(k, i, j, g);
        spec.set_gamma(k, j, i, g);
      }
  return spec;
}

inline ConnectionSpec sample_spec() {
  ConnectionSpec spec(2);
  spec.set_gamma(1, 2, 2, Poly::parse("x1", 2));
  return spec;
}

/// Rank-r connection matrix with random polynomial 1-form entries.
inline ModuleConnectionSpec random_module_spec(Gen& gen, int rank, int n, int max_degree = 1) {
  ModuleConnectionSpec spec(rank, n);
  for (int b = 1; b <= rank; ++b)
    for (int a = 1; a <= rank; ++a) {
      DgElement w(n, 0);
      for (int i = 1; i <= n; ++i)
        if (gen.uniform(0, 1) == 0) w.add_term(WedgeMask{1} << (i - 1), Word(), gen.poly(n, max_degree, 2));
      spec.set_omega(b, a, w);
    }
  return spec;
}

struct RetractionSample {
  Retraction r;
  Matrix g;
};

// Contractible pairs plus a complex with zero differential, conjugated by a filtration-unipotent change of basis.
inline RetractionSample random_retraction(Gen& gen, bool perturb) {
  int hdim = gen.uniform(1, 3), pairs = gen.uniform(1, 3);
  std::size_t nb = static_cast<std::size_t>(hdim + 2 * pairs), ns = static_cast<std::size_t>(hdim);
  Retraction r;
  r.small.degree.resize(ns);
  r.small.filtration.assign(ns, 0);
  r.small.d = Matrix(ns, ns);
  r.big.degree.resize(nb);
  r.big.filtration.resize(nb);
  Matrix d(nb, nb), h(nb, nb), i(nb, ns), p(ns, nb);
  for (int t = 0; t < hdim; ++t) {
    auto s = static_cast<std::size_t>(t);
    r.small.degree[s] = r.big.degree[s] = gen.uniform(0, 2);
    r.big.filtration[s] = gen.uniform(0, 3);
    i(s, s) = 1;
    p(s, s) = 1;
  }
  for (int t = 0; t < pairs; ++t) {
    auto a = static_cast<std::size_t>(hdim + 2 * t), b = a + 1;
    r.big.degree[a] = gen.uniform(0, 1);
    r.big.degree[b] = r.big.degree[a] + 1;
    r.big.filtration[a] = r.big.filtration[b] = gen.uniform(0, 3);
    d(b, a) = 1;
    h(a, b) = -1;
  }
  auto unipotent = [&]() {
    Matrix u = Matrix::identity(nb);
    for (std::size_t x = 0; x < nb; ++x)
      for (std::size_t y = 0; y < nb; ++y)
        if (r.big.degree[x] == r.big.degree[y] && r.big.filtration[x] > r.big.filtration[y] && gen.uniform(0, 1) == 0)
          u(x, y) = gen.rational();
    return u;
  };
  Matrix g = unipotent(), gi = inverse(g);
  r.big.d = g * d * gi;
  r.i = g * i;
  r.p = p * gi;
  r.h = g * h * gi;
  r.delta = Matrix(nb, nb);
  if (perturb) {
    Matrix g2 = g * unipotent();
    r.delta = g2 * d * inverse(g2) - r.big.d;
  }
  return {r, g};
}

}  // namespace nct::testing
