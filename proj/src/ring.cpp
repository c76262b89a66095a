#include "nct/ring.hpp"

#include <cctype>
#include <utility>
#include <vector>

namespace nct {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

// Recursive-descent parser over a whitespace-free copy; offsets map back to the input.
class PolyParser {
 public:
  PolyParser(std::string_view text, int n) : n_(n) {
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (std::isspace(static_cast<unsigned char>(text[i]))) continue;
      chars_.push_back(text[i]);
      offsets_.push_back(i);
    }
    end_offset_ = text.size();
  }

  Poly run() {
    if (chars_.empty()) fail("empty polynomial");
    Poly result(n_);
    bool first = true;
    while (pos_ < chars_.size()) {
      Rational sign = 1;
      if (peek() == '+' || peek() == '-') {
        if (peek() == '-') sign = -1;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      auto [coeff, mono] = term();
      result.add_term(mono, sign * coeff);
    }
    return result;
  }

 private:
  char peek() const { return pos_ < chars_.size() ? chars_[pos_] : '\0'; }
  std::size_t offset() const { return pos_ < offsets_.size() ? offsets_[pos_] : end_offset_; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, offset()); }

  std::string digits() {
    std::string out;
    while (std::isdigit(static_cast<unsigned char>(peek()))) out.push_back(chars_[pos_++]);
    if (out.empty()) fail("expected digits");
    return out;
  }

  std::pair<Rational, Monomial> term() {
    Rational coeff = 1;
    Monomial mono;
    factor(coeff, mono);
    while (peek() == '*') {
      ++pos_;
      factor(coeff, mono);
    }
    return {coeff, mono};
  }

  void factor(Rational& coeff, Monomial& mono) {
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = digits();
      std::string den = "1";
      if (peek() == '/') {
        ++pos_;
        den = digits();
      }
      mpz_class d(den);
      if (d == 0) fail("zero denominator");
      Rational q(mpz_class(num), d);
      q.canonicalize();
      coeff *= q;
      return;
    }
    if (c == 'x') {
      ++pos_;
      std::size_t at = offset();
      int index = std::stoi(digits());
      if (index < 1 || index > n_) throw ParseError("variable x" + std::to_string(index) + " out of range", at);
      int e = 1;
      if (peek() == '^') {
        ++pos_;
        e = std::stoi(digits());
      }
      Monomial m;
      m.set_exponent(index - 1, e);
      mono = mono * m;
      return;
    }
    fail("unexpected character");
  }

  int n_;
  std::string chars_;
  std::vector<std::size_t> offsets_;
  std::size_t end_offset_ = 0;
  std::size_t pos_ = 0;
};

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  std::string body = s.substr(start);
  std::size_t slash = body.find('/');
  std::string num = body.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : body.substr(slash + 1);
  if (!all_digits(num)) throw ParseError("malformed rational '" + s + "'", start);
  if (!all_digits(den)) throw ParseError("malformed rational '" + s + "'", start + slash + 1);
  mpz_class d(den);
  if (d == 0) throw ParseError("zero denominator in '" + s + "'", start + slash + 1);
  Rational q(mpz_class(num), d);
  q.canonicalize();
  if (s[0] == '-') q = -q;
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Monomial Monomial::variable(int index) {
  Monomial m;
  m.set_exponent(index, 1);
  return m;
}

void Monomial::set_exponent(int index, int value) {
  if (index < 0 || index >= kMaxVariables) throw DimensionError("variable index out of range");
  if (value < 0 || value > 255) throw std::overflow_error("monomial exponent out of range");
  auto& slot = exps_[static_cast<std::size_t>(index)];
  degree_ = static_cast<std::uint16_t>(degree_ - slot + value);
  slot = static_cast<std::uint8_t>(value);
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out;
  for (int i = 0; i < kMaxVariables; ++i) {
    int e = exponent(i) + other.exponent(i);
    if (e > 255) throw std::overflow_error("monomial exponent out of range");
    out.exps_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(e);
  }
  out.degree_ = static_cast<std::uint16_t>(degree_ + other.degree_);
  return out;
}

Poly::Poly(int variable_count) : n_(variable_count) {
  if (n_ < 0 || n_ > kMaxVariables) throw DimensionError("unsupported variable count " + std::to_string(n_));
}

Poly::Poly(int variable_count, const Rational& constant) : Poly(variable_count) {
  add_term(Monomial(), constant);
}

Poly Poly::variable(int variable_count, int index) {
  if (index < 1 || index > variable_count) throw DimensionError("variable index out of range");
  Poly p(variable_count);
  p.add_term(Monomial::variable(index - 1), 1);
  return p;
}

Poly Poly::parse(std::string_view text, int variable_count) {
  return PolyParser(text, variable_count).run();
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Poly::constant_term() const {
  auto it = terms_.find(Monomial());
  return it == terms_.end() ? Rational(0) : it->second;
}

int Poly::total_degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }

void Poly::add_term(const Monomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

void Poly::check_same_ring(const Poly& other) const {
  if (n_ != other.n_)
    throw DimensionError("polynomials in " + std::to_string(n_) + " and " + std::to_string(other.n_) +
                         " variables");
}

Poly& Poly::operator+=(const Poly& other) {
  check_same_ring(other);
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& other) {
  check_same_ring(other);
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Poly& Poly::operator*=(const Poly& other) { return *this = *this * other; }

Poly& Poly::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  a.check_same_ring(b);
  Poly out(a.n_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
  return out;
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Poly Poly::partial(int index) const {
  if (index < 1 || index > n_) throw DimensionError("partial derivative index out of range");
  Poly out(n_);
  for (const auto& [m, c] : terms_) {
    int e = m.exponent(index - 1);
    if (e == 0) continue;
    Monomial dm = m;
    dm.set_exponent(index - 1, e - 1);
    out.add_term(dm, c * e);
  }
  return out;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    bool negative = sgn(c) < 0;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    Rational mag = abs(c);
    std::string mono;
    for (int i = 0; i < n_; ++i) {
      int e = m.exponent(i);
      if (e == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(i + 1);
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty())
      out += to_string(mag);
    else if (mag == 1)
      out += mono;
    else
      out += to_string(mag) + "*" + mono;
  }
  return out;
}

bool Poly::operator==(const Poly& other) const { return n_ == other.n_ && terms_ == other.terms_; }

Poly poly_arith(PolyOp op, const Poly& a, const std::variant<Poly, Rational>& b) {
  Poly rhs = std::holds_alternative<Poly>(b) ? std::get<Poly>(b) : Poly(a.variable_count(), std::get<Rational>(b));
  switch (op) {
    case PolyOp::Add:
      return a + rhs;
    case PolyOp::Sub:
      return a - rhs;
    case PolyOp::Mul:
      return a * rhs;
  }
  throw std::invalid_argument("unknown polynomial operation");
}

Poly poly_partial(int index, const Poly& p) { return p.partial(index); }

}  // namespace nct
