#pragma once

#include <functional>

namespace nct {

/// Differential D = D0 + D_pos with contracting homotopy h for D0, where h D_pos raises a
/// bounded grading. Provides Phi = id + h D_pos, its inverse and the transferred homotopy.
template <class T>
struct FilteredOperators {
  std::function<T(const T&)> d0;
  std::function<T(const T&)> d_positive;
  std::function<T(const T&)> h;
  int depth = 0;  // number of Neumann terms needed for termination

  T d(const T& x) const { return d0(x) + d_positive(x); }
  T phi(const T& x) const { return x + h(d_positive(x)); }
  T phi_inverse(const T& y) const {
    T acc = y;
    T term = y;
    for (int j = 0; j < depth; ++j) {
      term = -h(d_positive(term));
      if (term.is_zero()) break;
      acc = acc + term;
    }
    return acc;
  }
  T h_D(const T& x) const { return phi_inverse(h(phi(x))); }
};

}  // namespace nct
