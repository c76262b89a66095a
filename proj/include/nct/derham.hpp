#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "nct/ncseries.hpp"
#include "nct/ring.hpp"
#include "nct/word.hpp"

namespace nct {

struct DgKey {
  WedgeMask wedge = 0;
  Word word;
  auto operator<=>(const DgKey&) const = default;
  bool operator==(const DgKey&) const = default;
};

/// Element of Omega(U) (x) T(V) truncated at tensor degree d: sums of c(x) dx_S (x) w.
class DgElement {
 public:
  using TermMap = std::map<DgKey, Poly>;

  DgElement() = default;
  DgElement(int n, int d);
  static DgElement from_tensor(const TensorPoly& t);
  static DgElement scalar(int n, int d, const Poly& p);
  static DgElement letter(int n, int d, int k);
  /// dx_i (x) 1
  static DgElement one_form(int n, int d, int i);
  /// df (x) 1
  static DgElement differential(int d, const Poly& f);

  int letters() const { return n_; }
  int truncation() const { return d_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(WedgeMask wedge, const Word& w, const Poly& c);

  /// Part with the given exterior degree.
  DgElement form_degree(int q) const;
  /// Part with the given tensor degree.
  DgElement component(int tensor_degree) const;
  DgElement truncated(int max_tensor_degree) const;
  DgElement with_truncation(int d) const;
  /// Lowest tensor degree present; -1 for zero.
  int lowest_tensor_degree() const;
  /// True when every component of tensor degree <= t vanishes.
  bool vanishes_through(int t) const;
  /// Exterior-degree-0 part as a series; throws if higher forms are present.
  TensorPoly to_tensor() const;

  DgElement& operator+=(const DgElement& other);
  DgElement& operator-=(const DgElement& other);
  DgElement& operator*=(const Rational& c);
  friend DgElement operator+(DgElement a, const DgElement& b) { return a += b; }
  friend DgElement operator-(DgElement a, const DgElement& b) { return a -= b; }
  friend DgElement operator*(DgElement a, const Rational& c) { return a *= c; }
  DgElement operator-() const;
  /// Product in Omega (x) T(V); letters have degree 0.
  friend DgElement operator*(const DgElement& a, const DgElement& b);

  bool operator==(const DgElement& other) const = default;
  std::string str() const;

 private:
  void check_compatible(const DgElement& other) const;

  int n_ = 0;
  int d_ = 0;
  TermMap terms_;
};

/// Koszul differential: removes one letter and appends the matching one-form.
DgElement tau(const DgElement& x);
/// Contracting homotopy for tau; zero on exterior degree 0.
DgElement homotopy(const DgElement& x);
/// de Rham differential acting on coefficients only.
DgElement de_rham(const DgElement& x);

/// Derivation of exterior degree `degree` determined by letter images.
struct GeneratorRule {
  int degree = 1;
  bool de_rham_on_coefficients = false;
  std::vector<DgElement> letter_images;  // index k-1 holds the image of e_k
};

DgElement extend_derivation(const GeneratorRule& rule, const DgElement& x);

}  // namespace nct
