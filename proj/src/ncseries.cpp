#include "nct/ncseries.hpp"

#include <stdexcept>

#include "nct/tables.hpp"

namespace nct {

TensorPoly::TensorPoly(int n, int d) : n_(n), d_(d) {
  if (n < 1 || n > kMaxVariables) throw DimensionError("letter count out of range");
  if (d < 0 || d >= Word::kMaxLength) throw DimensionError("truncation out of range");
}

TensorPoly TensorPoly::scalar(int n, int d, const Poly& p) {
  TensorPoly t(n, d);
  t.add_term(Word(), p);
  return t;
}

TensorPoly TensorPoly::letter(int n, int d, int k) {
  if (k < 1 || k > n) throw DimensionError("letter index out of range");
  TensorPoly t(n, d);
  t.add_term(Word::letter(k), Poly(n, 1));
  return t;
}

TensorPoly TensorPoly::from_words(int n, int d, const LinearWords& x) {
  TensorPoly t(n, d);
  for (const auto& [w, c] : x) t.add_term(w, Poly(n, c));
  return t;
}

int TensorPoly::lowest_degree() const { return terms_.empty() ? -1 : terms_.begin()->first.size(); }

TensorPoly TensorPoly::component(int degree) const {
  TensorPoly out(n_, d_);
  for (const auto& [w, c] : terms_)
    if (w.size() == degree) out.terms_.emplace(w, c);
  return out;
}

TensorPoly TensorPoly::truncated(int max_degree) const {
  TensorPoly out(n_, d_);
  for (const auto& [w, c] : terms_)
    if (w.size() <= max_degree) out.terms_.emplace(w, c);
  return out;
}

TensorPoly TensorPoly::with_truncation(int d) const {
  TensorPoly out(n_, d);
  for (const auto& [w, c] : terms_)
    if (w.size() <= d) out.terms_.emplace(w, c);
  return out;
}

LinearWords TensorPoly::constant_words() const {
  LinearWords out;
  for (const auto& [w, c] : terms_) {
    if (!c.is_constant()) throw std::invalid_argument("series has non-constant coefficients");
    add_to(out, w, c.constant_term());
  }
  return out;
}

void TensorPoly::add_term(const Word& w, const Poly& c) {
  if (c.variable_count() != n_) throw DimensionError("coefficient ring does not match the letter count");
  for (int i = 0; i < w.size(); ++i)
    if (w[i] > n_) throw DimensionError("letter outside the alphabet");
  if (w.size() > d_ || c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void TensorPoly::check_compatible(const TensorPoly& other) const {
  if (n_ != other.n_ || d_ != other.d_)
    throw DimensionError("series with different letter count or truncation");
}

TensorPoly& TensorPoly::operator+=(const TensorPoly& other) {
  check_compatible(other);
  for (const auto& [w, c] : other.terms_) add_term(w, c);
  return *this;
}

TensorPoly& TensorPoly::operator-=(const TensorPoly& other) {
  check_compatible(other);
  for (const auto& [w, c] : other.terms_) add_term(w, -c);
  return *this;
}

TensorPoly& TensorPoly::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, p] : terms_) p *= c;
  return *this;
}

TensorPoly TensorPoly::scaled(const Poly& p) const {
  TensorPoly out(n_, d_);
  for (const auto& [w, c] : terms_) out.add_term(w, c * p);
  return out;
}

TensorPoly TensorPoly::operator-() const {
  TensorPoly out = *this;
  for (auto& [w, c] : out.terms_) c = -c;
  return out;
}

TensorPoly operator*(const TensorPoly& a, const TensorPoly& b) {
  a.check_compatible(b);
  TensorPoly out(a.n_, a.d_);
  for (const auto& [wa, ca] : a.terms_)
    for (const auto& [wb, cb] : b.terms_)
      if (wa.size() + wb.size() <= a.d_) out.add_term(wa.concat(wb), ca * cb);
  return out;
}

std::string TensorPoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [w, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + c.str() + ")";
    if (!w.empty()) out += "*" + w.str();
  }
  return out;
}

TensorPoly nc_mul(const TensorPoly& a, const TensorPoly& b) { return a * b; }

TensorPoly commutator(const TensorPoly& a, const TensorPoly& b) { return a * b - b * a; }

void YPoly::add(const Monomial& y, const Poly& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms.try_emplace(y, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

TensorPoly ordered_substitution(const YPoly& p, int d) {
  TensorPoly out(p.n, d);
  for (const auto& [y, c] : p.terms) {
    if (y.degree() > d) throw std::length_error("y-degree exceeds the truncation");
    out.add_term(ChartTables::ordered_word(y, p.n), c);
  }
  return out;
}

bool PbwSeries::has_bracket_part() const {
  for (const auto& [factors, f] : entries)
    if (!factors.empty() && !f.is_zero()) return true;
  return false;
}

std::string PbwSeries::str() const {
  if (entries.empty()) return "0";
  std::string out;
  for (const auto& [factors, f] : entries) {
    for (const auto& [y, c] : f.terms) {
      if (!out.empty()) out += " + ";
      out += "(" + c.str() + ")";
      PbwMonomial m;
      m.letter_exponents.resize(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) m.letter_exponents[static_cast<std::size_t>(k)] = y.exponent(k);
      m.brackets = factors;
      out += "*" + m.str();
    }
  }
  return out;
}

PbwSeries pbw_decompose(const TensorPoly& x) {
  const ChartTables& tables = chart_tables(x.letters(), x.truncation());
  PbwSeries out{x.letters(), x.truncation(), {}};
  for (const auto& [w, c] : x.terms())
    for (const auto& t : tables.decomposition(w)) {
      YPoly& slot = out.entries[tables.bracket_factors(t.bracket_id)];
      slot.n = x.letters();
      slot.add(t.letters, c * t.coeff);
    }
  for (auto it = out.entries.begin(); it != out.entries.end();) {
    if (it->second.is_zero())
      it = out.entries.erase(it);
    else
      ++it;
  }
  return out;
}

TensorPoly recompose(const PbwSeries& s) {
  TensorPoly out(s.n, s.d);
  for (const auto& [factors, f] : s.entries) {
    LinearWords tail{{Word(), Rational(1)}};
    for (const Word& b : factors) tail = multiply(tail, bracketing(b));
    for (const auto& [y, c] : f.terms) {
      Word head = ChartTables::ordered_word(y, s.n);
      for (const auto& [tw, tc] : tail)
        if (head.size() + tw.size() <= s.d) out.add_term(head.concat(tw), c * tc);
    }
  }
  return out;
}

}  // namespace nct
