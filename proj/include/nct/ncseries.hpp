#pragma once

#include <map>
#include <string>
#include <vector>

#include "nct/lyndon.hpp"
#include "nct/ring.hpp"
#include "nct/word.hpp"

namespace nct {

/// Truncated noncommutative series: sum over words of length <= d of polynomial coefficients.
class TensorPoly {
 public:
  using TermMap = std::map<Word, Poly>;

  TensorPoly() = default;
  TensorPoly(int n, int d);
  static TensorPoly scalar(int n, int d, const Poly& p);
  static TensorPoly letter(int n, int d, int k);
  static TensorPoly from_words(int n, int d, const LinearWords& x);

  int letters() const { return n_; }
  int truncation() const { return d_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Lowest tensor degree present; -1 for zero.
  int lowest_degree() const;
  TensorPoly component(int degree) const;
  TensorPoly truncated(int max_degree) const;
  TensorPoly with_truncation(int d) const;
  /// Constant coefficients of the words; throws if a coefficient is non-constant.
  LinearWords constant_words() const;

  void add_term(const Word& w, const Poly& c);

  TensorPoly& operator+=(const TensorPoly& other);
  TensorPoly& operator-=(const TensorPoly& other);
  TensorPoly& operator*=(const Rational& c);
  TensorPoly scaled(const Poly& p) const;
  friend TensorPoly operator+(TensorPoly a, const TensorPoly& b) { return a += b; }
  friend TensorPoly operator-(TensorPoly a, const TensorPoly& b) { return a -= b; }
  friend TensorPoly operator*(TensorPoly a, const Rational& c) { return a *= c; }
  TensorPoly operator-() const;
  friend TensorPoly operator*(const TensorPoly& a, const TensorPoly& b);

  bool operator==(const TensorPoly& other) const = default;
  std::string str() const;

 private:
  void check_compatible(const TensorPoly& other) const;

  int n_ = 0;
  int d_ = 0;
  TermMap terms_;
};

TensorPoly nc_mul(const TensorPoly& a, const TensorPoly& b);
TensorPoly commutator(const TensorPoly& a, const TensorPoly& b);

/// Polynomial in commuting symbols y1..yn with coefficients in Q[x1..xn].
struct YPoly {
  int n = 0;
  std::map<Monomial, Poly> terms;

  void add(const Monomial& y, const Poly& c);
  bool is_zero() const { return terms.empty(); }
  bool operator==(const YPoly&) const = default;
};

/// Replaces y^a by the ordered word e1^a1 ... en^an.
TensorPoly ordered_substitution(const YPoly& p, int d);

/// Decomposition of a series as sum over bracket products M of f_M(y) * M.
struct PbwSeries {
  int n = 0;
  int d = 0;
  std::map<std::vector<Word>, YPoly> entries;

  /// True when some component with bracket factors is nonzero.
  bool has_bracket_part() const;
  std::string str() const;
};

PbwSeries pbw_decompose(const TensorPoly& x);
TensorPoly recompose(const PbwSeries& s);

}  // namespace nct
