#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nct/derham.hpp"
#include "nct/fedosov.hpp"
#include "nct/perturbation.hpp"

namespace nct {

/// Element sum_a s_a (x) x_a of F (x) Omega (x) T(V) for a trivialized bundle F of rank r.
class ModuleElement {
 public:
  ModuleElement() = default;
  ModuleElement(int rank, int n, int d);
  /// s_a (x) 1, a = 1..rank.
  static ModuleElement basis(int rank, int n, int d, int a);
  static ModuleElement from_tensors(const std::vector<TensorPoly>& parts);

  int rank() const { return static_cast<int>(parts_.size()); }
  int letters() const { return n_; }
  int truncation() const { return d_; }
  const DgElement& operator[](int a) const { return parts_[static_cast<std::size_t>(a - 1)]; }
  DgElement& operator[](int a) { return parts_[static_cast<std::size_t>(a - 1)]; }
  const std::vector<DgElement>& parts() const { return parts_; }

  bool is_zero() const;
  ModuleElement component(int tensor_degree) const;
  ModuleElement form_degree(int q) const;
  ModuleElement truncated(int max_tensor_degree) const;
  ModuleElement with_truncation(int d) const;
  bool vanishes_through(int t) const;
  std::vector<TensorPoly> to_tensors() const;
  std::size_t term_count() const;

  ModuleElement& operator+=(const ModuleElement& other);
  ModuleElement& operator-=(const ModuleElement& other);
  ModuleElement& operator*=(const Rational& c);
  friend ModuleElement operator+(ModuleElement a, const ModuleElement& b) { return a += b; }
  friend ModuleElement operator-(ModuleElement a, const ModuleElement& b) { return a -= b; }
  friend ModuleElement operator*(ModuleElement a, const Rational& c) { return a *= c; }
  ModuleElement operator-() const;
  /// Right action of the algebra: (s_a (x) x) y = s_a (x) xy.
  friend ModuleElement operator*(const ModuleElement& m, const DgElement& y);

  bool operator==(const ModuleElement&) const = default;
  std::string str() const;

 private:
  void check_compatible(const ModuleElement& other) const;

  int n_ = 0;
  int d_ = 0;
  std::vector<DgElement> parts_;
};

/// id (x) h applied to each section coefficient.
ModuleElement homotopy(const ModuleElement& x);
ModuleElement tau(const ModuleElement& x);

/// Classical connection nabla(s_a) = sum_b s_b (x) omega(b, a) with omega a matrix of 1-forms.
class ModuleConnectionSpec {
 public:
  ModuleConnectionSpec() = default;
  ModuleConnectionSpec(int rank, int n);

  int rank() const { return rank_; }
  int n() const { return n_; }
  /// Entry omega_{ba}; a 1-form with no letters.
  const DgElement& omega(int b, int a) const;
  void set_omega(int b, int a, const DgElement& value);
  /// d omega + omega ^ omega, entry (b, a).
  std::vector<std::vector<DgElement>> curvature() const;
  bool is_flat() const;

  bool operator==(const ModuleConnectionSpec&) const = default;

 private:
  int rank_ = 0;
  int n_ = 0;
  std::vector<DgElement> omega_;  // row-major (b, a)
};

/// D^F = id (x) tau + D^F_1 + D^F_2 + ... with D^F(s_a (x) 1) = sum_i nablaF_i(s_a).
/// nablaF_i lands in F (x) Omega^1 (x) T^{i-1}; indices run 1..d+1 so every tensor degree
/// up to the truncation is populated.
class ModuleNCConnection {
 public:
  ModuleNCConnection() = default;
  /// nabla[i-1][a-1] is nablaF_i(s_a) for i = 1..d+1.
  ModuleNCConnection(NCConnection base, ModuleConnectionSpec spec, std::vector<std::vector<ModuleElement>> nabla);

  int rank() const { return spec_.rank(); }
  int n() const { return base_.n(); }
  int truncation() const { return base_.truncation(); }
  int max_index() const { return truncation() + 1; }
  const NCConnection& base() const { return base_; }
  const ModuleConnectionSpec& spec() const { return spec_; }
  const ModuleElement& nabla(int i, int a) const;
  std::uint64_t fingerprint() const { return fingerprint_; }

  ModuleElement apply(const ModuleElement& x) const;
  ModuleElement apply_positive(const ModuleElement& x) const;
  /// D^F_i; i = 0 is id (x) tau.
  ModuleElement apply_index(int i, const ModuleElement& x) const;

  ModuleNCConnection with_nabla(int i, int a, const ModuleElement& value) const;

 private:
  ModuleElement apply_images(const std::vector<ModuleElement>& images, const ModuleElement& x) const;
  void rebuild();

  NCConnection base_;
  ModuleConnectionSpec spec_;
  std::vector<std::vector<ModuleElement>> nabla_;
  std::vector<ModuleElement> positive_;
  std::uint64_t fingerprint_ = 0;
};

ModuleNCConnection build_module_connection(const NCConnection& base, const ModuleConnectionSpec& spec);

struct ModuleSquareZeroEntry {
  int section;
  int degree;  // tensor degree of the checked component of (D^F)^2(s_a)
  bool zero;
  std::size_t nonzero_terms;
};

struct ModuleSquareZeroReport {
  std::vector<ModuleSquareZeroEntry> entries;
  int untracked_from = 0;
  bool ok() const;
};

ModuleSquareZeroReport verify_module_square_zero(const ModuleNCConnection& mc);

FilteredOperators<ModuleElement> module_conjugator(const ModuleNCConnection& mc);

struct ModuleFlatSection {
  std::vector<TensorPoly> value;  // coefficient of each s_b
  ModuleElement witness;          // D^F(value)
  std::uint64_t context = 0;
};

/// Lifts s_a (x) 1 to D^F-closed elements.
std::vector<ModuleFlatSection> module_flat_basis(const ModuleNCConnection& mc);
ModuleFlatSection module_flat_section(const ModuleNCConnection& mc, const std::vector<TensorPoly>& value);
/// s * f for a flat module section and a flat function.
ModuleFlatSection act_flat(const ModuleNCConnection& mc, const ModuleFlatSection& s, const FlatSection& f);

/// A_X-linear map F(s_a (x) 1) = sum_b t_b (x) entry(b, a).
class HomMap {
 public:
  HomMap() = default;
  HomMap(int target_rank, int source_rank, int n, int d);

  int target_rank() const { return target_rank_; }
  int source_rank() const { return source_rank_; }
  int letters() const { return n_; }
  int truncation() const { return d_; }
  const TensorPoly& entry(int b, int a) const;
  TensorPoly& entry(int b, int a);

  ModuleElement apply(const ModuleElement& x) const;
  HomMap compose(const HomMap& other) const;
  HomMap operator+(const HomMap& other) const;
  HomMap operator-(const HomMap& other) const;
  bool is_zero() const;
  /// Lowest tensor degree among entries; -1 for zero.
  int lowest_degree() const;
  HomMap component(int degree) const;
  HomMap with_truncation(int d) const;
  bool operator==(const HomMap&) const = default;

 private:
  int target_rank_ = 0;
  int source_rank_ = 0;
  int n_ = 0;
  int d_ = 0;
  std::vector<TensorPoly> entries_;
};

/// Constant-coefficient basis of Hom(F, G (x) U(Lie_+)_degree).
std::vector<HomMap> hom_leading(const ModuleNCConnection& source, const ModuleNCConnection& target, int degree);
/// Completes a leading term to a map commuting with the differentials through the truncation.
HomMap hom_lift(const ModuleNCConnection& source, const ModuleNCConnection& target, const HomMap& leading);
/// [D, F](s_a (x) 1) for every a.
std::vector<ModuleElement> hom_defect(const ModuleNCConnection& source, const ModuleNCConnection& target, const HomMap& f);

/// A_X-linear automorphism of F (x) A, identity modulo tensor degree 1.
class ModuleGauge {
 public:
  ModuleGauge() = default;
  explicit ModuleGauge(HomMap map);
  static ModuleGauge identity(int rank, int n, int d);

  const HomMap& map() const { return map_; }
  int rank() const { return map_.source_rank(); }
  bool is_identity() const;
  ModuleGauge inverse() const;
  ModuleGauge compose(const ModuleGauge& other) const;
  ModuleGauge with_truncation(int d) const;

 private:
  HomMap map_;
};

/// Phi D^F Phi^{-1}, exact in every tensor degree <= d.
ModuleNCConnection conjugate(const ModuleNCConnection& mc, const ModuleGauge& phi);
std::vector<int> disagreement(const ModuleNCConnection& a, const ModuleNCConnection& b, int max_index);
/// Gauge taking a to b through index d; both must share the base connection.
ModuleGauge find_module_gauge(const ModuleNCConnection& a, const ModuleNCConnection& b);

}  // namespace nct
