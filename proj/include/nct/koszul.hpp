#pragma once

#include <compare>
#include <map>
#include <stdexcept>
#include <vector>

#include "nct/linalg.hpp"
#include "nct/ncseries.hpp"
#include "nct/word.hpp"

namespace nct {

class AInfinityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Basis vector `index` (0-based) of E^degree.
struct BasisRef {
  int degree = 0;
  int index = 0;
  auto operator<=>(const BasisRef&) const = default;
};

using Vector = std::map<BasisRef, Rational>;

/// Finite-dimensional minimal A-infinity algebra with E^0 spanned by a strict unit.
class MinimalAInfinity {
 public:
  using Table = std::map<std::vector<BasisRef>, Vector>;

  MinimalAInfinity() = default;
  explicit MinimalAInfinity(std::vector<int> dims);
  /// Exterior algebra on n generators with the wedge product.
  static MinimalAInfinity exterior(int n);
  /// E^0 + E^1 with only the unit products.
  static MinimalAInfinity curve(int n);

  const std::vector<int>& dims() const { return dims_; }
  int top_degree() const { return static_cast<int>(dims_.size()) - 1; }
  int max_arity() const;
  /// Basis of E in (degree, index) order.
  std::vector<BasisRef> basis() const;
  /// Basis of the augmentation ideal (degrees >= 1).
  std::vector<BasisRef> reduced_basis() const;

  /// Adds c * out to m_k(in); unit inputs are fixed by strict unitality.
  void add_product(const std::vector<BasisRef>& in, BasisRef out, const Rational& c);
  /// Stored entries of m_k, excluding unit rules.
  const Table& products(int k) const;
  /// m_k on a basis tuple, including unit rules.
  Vector apply(const std::vector<BasisRef>& in) const;

  bool operator==(const MinimalAInfinity&) const = default;

 private:
  void check_ref(BasisRef r) const;

  std::vector<int> dims_;
  std::map<int, Table> products_;
};

struct AInfinityReport {
  struct Entry {
    int n;  // number of inputs of the identity
    std::size_t tuples;
    std::size_t failures;
    std::vector<BasisRef> first_failure;
  };
  std::vector<Entry> entries;
  bool ok() const;
};

/// Default bound 2 * k_max - 1: larger identities only involve vanishing products.
int default_identity_bound(const MinimalAInfinity& a);
AInfinityReport validate_ainfinity(const MinimalAInfinity& a, int n_max);
AInfinityReport validate_ainfinity(const MinimalAInfinity& a);

/// Letters of the Koszul dual: duals of the reduced basis, E^1 first (letter 1..dim E^1).
struct BarDual {
  std::vector<BasisRef> generators;  // generators[l-1] is dual to letter l
  std::vector<int> degrees;          // 1 - |u|
  std::map<BasisRef, LinearWords> images;
  int letter(BasisRef r) const;
};

/// Dual of the bar differential as a derivation of the free algebra on all dual generators.
BarDual bar_dual(const MinimalAInfinity& a);
/// D applied to a word combination, truncated at max_length.
LinearWords apply_bar_dual(const BarDual& b, const LinearWords& x, int max_length);
/// Generators g with D(D(g)) != 0 through max_length.
std::vector<BasisRef> bar_dual_square_defects(const BarDual& b, int max_length);

/// d_m on the dual basis of E^r, r >= 2, as series in the E^1 letters; validates the input.
std::map<BasisRef, TensorPoly> bar_dual_differential(const MinimalAInfinity& a, int d);

struct KoszulDualPresentation {
  int letters = 0;
  int truncation = 0;
  std::vector<BasisRef> sources;  // dual generator of E^2 behind each relation
  std::vector<TensorPoly> relations;
  std::vector<long> quotient_dims;  // degrees 0..truncation of the associated graded quotient
  bool relations_independent = false;
};

/// Per-degree dimensions of gr(T / (<R> + T^{>d})) for the degree filtration.
std::vector<long> quotient_dimensions(int n, const std::vector<TensorPoly>& relations, int d);
KoszulDualPresentation relation_ideal(const MinimalAInfinity& a, int d);

/// Finite complex with a cohomological degree and a filtration index per basis vector.
struct FilteredComplex {
  std::vector<int> degree;
  std::vector<int> filtration;
  Matrix d;
  std::size_t size() const { return degree.size(); }
};

/// p i = id and i p = id + d h + h d, with a perturbation delta of the big differential.
struct Retraction {
  FilteredComplex big;
  FilteredComplex small;
  Matrix i;  // small -> big
  Matrix p;  // big -> small
  Matrix h;  // big -> big, degree -1
  Matrix delta;
};

/// Throws std::invalid_argument naming the first violated condition.
void validate_retraction(const Retraction& r);

struct PerturbedRetraction {
  Matrix differential;  // d_small + p A i
  Matrix inclusion;     // i + h A i
  Matrix projection;    // p + p A h
  Matrix homotopy;      // h + h A h
  int terms = 0;        // nonzero terms of A = delta + delta h delta + ...
};

/// Homological perturbation; throws DivergenceError when delta does not raise the filtration
/// or the series has more than `max_terms` nonzero terms.
PerturbedRetraction perturbation_series(const Retraction& r, int max_terms);

}  // namespace nct
