#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nct/derham.hpp"
#include "nct/ncseries.hpp"
#include "nct/perturbation.hpp"
#include "nct/ring.hpp"

namespace nct {

class TorsionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Christoffel symbols Gamma^k_{ij} on a chart with n coordinates.
class ConnectionSpec {
 public:
  ConnectionSpec() = default;
  explicit ConnectionSpec(int n);
  static ConnectionSpec flat(int n) { return ConnectionSpec(n); }

  int n() const { return n_; }
  const Poly& gamma(int k, int i, int j) const;  // 1-based
  void set_gamma(int k, int i, int j, const Poly& value);
  bool is_symmetric() const;
  bool is_flat() const;

  bool operator==(const ConnectionSpec&) const = default;

 private:
  std::size_t index(int k, int i, int j) const;

  int n_ = 0;
  std::vector<Poly> gamma_;
};

/// D = tau + nabla_1 + ... + nabla_d on generators, with de Rham on coefficients in D_1.
class NCConnection {
 public:
  NCConnection() = default;
  /// nabla[i-1][k-1] is nabla_i(e_k) for i = 1..d.
  NCConnection(ConnectionSpec spec, int d, std::vector<std::vector<DgElement>> nabla);

  int n() const { return spec_.n(); }
  int truncation() const { return d_; }
  const ConnectionSpec& spec() const { return spec_; }
  const DgElement& nabla(int i, int k) const;
  std::uint64_t fingerprint() const { return fingerprint_; }

  /// D_i for i >= 1 as a derivation rule.
  GeneratorRule rule(int i) const;
  /// D_{>=1} = sum of all D_i, i >= 1.
  const GeneratorRule& positive_rule() const { return positive_; }

  DgElement apply(const DgElement& x) const;
  DgElement apply_positive(const DgElement& x) const;
  DgElement apply_index(int i, const DgElement& x) const;

  /// Copy with nabla_i(e_k) replaced; used for mutation tests.
  NCConnection with_nabla(int i, int k, const DgElement& value) const;

 private:
  void rebuild();

  ConnectionSpec spec_;
  int d_ = 0;
  std::vector<std::vector<DgElement>> nabla_;
  GeneratorRule positive_;
  std::uint64_t fingerprint_ = 0;
};

/// First-order rule nabla_1(e_k) = -sum Gamma^k_{ij} dx_i (x) e_j.
std::vector<DgElement> christoffel_rule(const ConnectionSpec& spec, int d);
/// [D0, D1](e_k); vanishes for every k iff Gamma is symmetric.
DgElement torsion_component(const ConnectionSpec& spec, int k);

NCConnection build_nc_connection(const ConnectionSpec& spec, int d);

struct SquareZeroEntry {
  int generator;
  int degree;  // m: component of D^2(e_k) in Omega^2 (x) T^{m-1}
  bool zero;
  std::size_t nonzero_terms;
};

struct SquareZeroReport {
  std::vector<SquareZeroEntry> entries;
  int untracked_from = 0;  // tensor degrees >= this are not checked
  bool ok() const;
};

SquareZeroReport verify_square_zero(const NCConnection& nc);

/// Phi = id + h D_{>=1}, its inverse and h_D = Phi^{-1} h Phi for a connection.
FilteredOperators<DgElement> conjugator(const NCConnection& nc);

struct FlatSection {
  TensorPoly value;
  DgElement witness;  // D(value)
  std::uint64_t context = 0;
};

FlatSection sigma_lift(const NCConnection& nc, const Poly& f);
FlatSection flat_section(const NCConnection& nc, const TensorPoly& value);
FlatSection mul_flat(const NCConnection& nc, const FlatSection& a, const FlatSection& b);

struct LeadingTerm {
  int degree = -1;
  TensorPoly component;
  PbwSeries pbw;
};

/// Lowest tensor-degree component; throws std::logic_error if it has a letter part in degree > 0.
LeadingTerm leading_term(const FlatSection& a);

/// Ranks of the constant-coefficient leading terms of products of iterated sigma-commutators.
std::vector<long> commutator_leading_dimensions(const NCConnection& nc, int max_degree);

/// Filtered automorphism e_k -> e_k + phi_2(e_k) + ... + phi_d(e_k) acting on letters only.
class GaugeTransform {
 public:
  GaugeTransform() = default;
  static GaugeTransform identity(int n, int d);
  explicit GaugeTransform(std::vector<TensorPoly> images);

  int n() const { return static_cast<int>(images_.size()); }
  int truncation() const { return images_.empty() ? 0 : images_.front().truncation(); }
  const TensorPoly& image(int k) const { return images_[static_cast<std::size_t>(k - 1)]; }
  /// Degree-m part phi_m(e_k).
  TensorPoly component(int m, int k) const { return image(k).component(m); }
  bool is_identity() const;

  TensorPoly apply(const TensorPoly& x) const;
  DgElement apply(const DgElement& x) const;
  GaugeTransform inverse() const;
  GaugeTransform with_truncation(int d) const;
  /// (this o other)(e_k) = this(other(e_k)).
  GaugeTransform compose(const GaugeTransform& other) const;

 private:
  std::vector<TensorPoly> images_;
};

/// phi D phi^{-1}, exact in every index <= d.
NCConnection conjugate(const NCConnection& nc, const GaugeTransform& phi);
/// Indices (tensor degrees) i <= max_index where the connections differ on some generator.
std::vector<int> disagreement(const NCConnection& a, const NCConnection& b, int max_index);
GaugeTransform find_gauge(const NCConnection& a, const NCConnection& b);

}  // namespace nct
