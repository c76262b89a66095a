#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

namespace nct {

using Rational = mpq_class;

/// Error raised when operands live in polynomial rings of different arity.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Error raised on malformed textual input. `position` is a 0-based offset.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::invalid_argument(message + " at offset " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

inline constexpr int kMaxVariables = 8;

/// Commutative monomial in at most kMaxVariables variables, ordered by graded lex.
class Monomial {
 public:
  Monomial() = default;
  static Monomial variable(int index);  // 0-based

  int degree() const { return degree_; }
  int exponent(int index) const { return exps_[static_cast<std::size_t>(index)]; }
  void set_exponent(int index, int value);
  bool is_one() const { return degree_ == 0; }

  Monomial operator*(const Monomial& other) const;

  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;

 private:
  std::uint16_t degree_ = 0;
  std::array<std::uint8_t, kMaxVariables> exps_{};
};

/// Sparse polynomial over Q in variables x1..xn.
class Poly {
 public:
  using TermMap = std::map<Monomial, Rational>;

  Poly() = default;
  explicit Poly(int variable_count);
  Poly(int variable_count, const Rational& constant);

  static Poly variable(int variable_count, int index);  // 1-based
  static Poly parse(std::string_view text, int variable_count);

  int variable_count() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  int total_degree() const;  // -1 for the zero polynomial
  const TermMap& terms() const { return terms_; }

  void add_term(const Monomial& m, const Rational& c);

  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  Poly& operator*=(const Poly& other);
  Poly& operator*=(const Rational& c);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
  Poly operator-() const;

  Poly partial(int index) const;  // 1-based
  std::string str() const;

  bool operator==(const Poly& other) const;

 private:
  void check_same_ring(const Poly& other) const;

  int n_ = 0;
  TermMap terms_;
};

enum class PolyOp { Add, Sub, Mul };

Poly poly_arith(PolyOp op, const Poly& a, const std::variant<Poly, Rational>& b);
Poly poly_partial(int index, const Poly& p);

}  // namespace nct
