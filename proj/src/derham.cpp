#include "nct/derham.hpp"

#include <stdexcept>

#include "nct/tables.hpp"

namespace nct {

namespace {

int parity_sign(int count) { return (count & 1) ? -1 : 1; }

// Sign of dx_i ^ dx_S relative to the sorted monomial.
int insert_sign(int i, WedgeMask s) {
  WedgeMask below = s & ((WedgeMask{1} << (i - 1)) - 1);
  return parity_sign(wedge_degree(below));
}

}  // namespace

DgElement::DgElement(int n, int d) : n_(n), d_(d) {
  if (n < 1 || n > kMaxVariables) throw DimensionError("letter count out of range");
  if (d < 0 || d >= Word::kMaxLength) throw DimensionError("truncation out of range");
}

DgElement DgElement::from_tensor(const TensorPoly& t) {
  DgElement x(t.letters(), t.truncation());
  for (const auto& [w, c] : t.terms()) x.terms_.emplace(DgKey{0, w}, c);
  return x;
}

DgElement DgElement::scalar(int n, int d, const Poly& p) {
  DgElement x(n, d);
  x.add_term(0, Word(), p);
  return x;
}

DgElement DgElement::letter(int n, int d, int k) {
  DgElement x(n, d);
  x.add_term(0, Word::letter(k), Poly(n, 1));
  return x;
}

DgElement DgElement::one_form(int n, int d, int i) {
  DgElement x(n, d);
  x.add_term(WedgeMask{1} << (i - 1), Word(), Poly(n, 1));
  return x;
}

DgElement DgElement::differential(int d, const Poly& f) {
  int n = f.variable_count();
  DgElement x(n, d);
  for (int i = 1; i <= n; ++i) x.add_term(WedgeMask{1} << (i - 1), Word(), f.partial(i));
  return x;
}

void DgElement::add_term(WedgeMask wedge, const Word& w, const Poly& c) {
  if (c.variable_count() != n_) throw DimensionError("coefficient ring does not match the letter count");
  if (wedge >> n_) throw DimensionError("form index outside the chart");
  for (int i = 0; i < w.size(); ++i)
    if (w[i] > n_) throw DimensionError("letter outside the alphabet");
  if (w.size() > d_ || c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(DgKey{wedge, w}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

DgElement DgElement::form_degree(int q) const {
  DgElement out(n_, d_);
  for (const auto& [k, c] : terms_)
    if (wedge_degree(k.wedge) == q) out.terms_.emplace(k, c);
  return out;
}

DgElement DgElement::component(int tensor_degree) const {
  DgElement out(n_, d_);
  for (const auto& [k, c] : terms_)
    if (k.word.size() == tensor_degree) out.terms_.emplace(k, c);
  return out;
}

DgElement DgElement::truncated(int max_tensor_degree) const {
  DgElement out(n_, d_);
  for (const auto& [k, c] : terms_)
    if (k.word.size() <= max_tensor_degree) out.terms_.emplace(k, c);
  return out;
}

DgElement DgElement::with_truncation(int d) const {
  DgElement out(n_, d);
  for (const auto& [k, c] : terms_)
    if (k.word.size() <= d) out.terms_.emplace(k, c);
  return out;
}

int DgElement::lowest_tensor_degree() const {
  int low = -1;
  for (const auto& [k, c] : terms_)
    if (low < 0 || k.word.size() < low) low = k.word.size();
  return low;
}

bool DgElement::vanishes_through(int t) const {
  for (const auto& [k, c] : terms_)
    if (k.word.size() <= t) return false;
  return true;
}

TensorPoly DgElement::to_tensor() const {
  TensorPoly out(n_, d_);
  for (const auto& [k, c] : terms_) {
    if (k.wedge != 0) throw std::invalid_argument("element has positive exterior degree");
    out.add_term(k.word, c);
  }
  return out;
}

void DgElement::check_compatible(const DgElement& other) const {
  if (n_ != other.n_ || d_ != other.d_) throw DimensionError("elements with different letter count or truncation");
}

DgElement& DgElement::operator+=(const DgElement& other) {
  check_compatible(other);
  for (const auto& [k, c] : other.terms_) add_term(k.wedge, k.word, c);
  return *this;
}

DgElement& DgElement::operator-=(const DgElement& other) {
  check_compatible(other);
  for (const auto& [k, c] : other.terms_) add_term(k.wedge, k.word, -c);
  return *this;
}

DgElement& DgElement::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, p] : terms_) p *= c;
  return *this;
}

DgElement DgElement::operator-() const {
  DgElement out = *this;
  for (auto& [k, c] : out.terms_) c = -c;
  return out;
}

DgElement operator*(const DgElement& a, const DgElement& b) {
  a.check_compatible(b);
  DgElement out(a.n_, a.d_);
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_) {
      if (ka.word.size() + kb.word.size() > a.d_) continue;
      int s = wedge_sign(ka.wedge, kb.wedge);
      if (s == 0) continue;
      Poly c = ca * cb;
      if (s < 0) c = -c;
      out.add_term(ka.wedge | kb.wedge, ka.word.concat(kb.word), c);
    }
  return out;
}

std::string DgElement::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [k, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + c.str() + ")";
    for (int i : wedge_indices(k.wedge)) out += "*dx" + std::to_string(i);
    if (!k.word.empty()) out += "*" + k.word.str();
  }
  return out;
}

DgElement tau(const DgElement& x) {
  DgElement out(x.letters(), x.truncation());
  for (const auto& [k, c] : x.terms()) {
    for (int p = 0; p < k.word.size(); ++p) {
      int letter = k.word[p];
      WedgeMask bit = WedgeMask{1} << (letter - 1);
      if (k.wedge & bit) continue;
      // Moving dx_letter past dx_S and into sorted position leaves the parity of {s in S : s < letter}.
      int sign = insert_sign(letter, k.wedge);
      out.add_term(k.wedge | bit, k.word.without(p), sign > 0 ? c : -c);
    }
  }
  return out;
}

DgElement homotopy(const DgElement& x) {
  DgElement out(x.letters(), x.truncation());
  if (x.is_zero()) return out;
  const ChartTables& tables = chart_tables(x.letters(), x.truncation());
  for (const auto& [k, c] : x.terms())
    for (const auto& t : tables.homotopy(k.wedge, k.word)) out.add_term(t.wedge, t.word, c * t.coeff);
  return out;
}

DgElement de_rham(const DgElement& x) {
  DgElement out(x.letters(), x.truncation());
  for (const auto& [k, c] : x.terms())
    for (int i = 1; i <= x.letters(); ++i) {
      WedgeMask bit = WedgeMask{1} << (i - 1);
      if (k.wedge & bit) continue;
      Poly dc = c.partial(i);
      if (dc.is_zero()) continue;
      out.add_term(k.wedge | bit, k.word, insert_sign(i, k.wedge) > 0 ? dc : -dc);
    }
  return out;
}

DgElement extend_derivation(const GeneratorRule& rule, const DgElement& x) {
  int n = x.letters();
  int d = x.truncation();
  if (static_cast<int>(rule.letter_images.size()) != n)
    throw std::invalid_argument("derivation rule needs one image per letter");
  if (rule.de_rham_on_coefficients && rule.degree != 1)
    throw std::invalid_argument("de Rham part requires a derivation of degree 1");
  for (const auto& img : rule.letter_images) {
    if (img.letters() != n) throw DimensionError("letter image over a different chart");
    for (const auto& [k, c] : img.terms())
      if (wedge_degree(k.wedge) != rule.degree)
        throw std::invalid_argument("letter image has the wrong exterior degree");
  }

  DgElement out = rule.de_rham_on_coefficients ? de_rham(x) : DgElement(n, d);
  for (const auto& [k, c] : x.terms()) {
    int pass_sign = parity_sign(rule.degree * wedge_degree(k.wedge));
    for (int p = 0; p < k.word.size(); ++p) {
      const DgElement& img = rule.letter_images[static_cast<std::size_t>(k.word[p] - 1)];
      for (const auto& [ik, ic] : img.terms()) {
        if (k.word.size() - 1 + ik.word.size() > d) continue;
        int s = wedge_sign(k.wedge, ik.wedge);
        if (s == 0) continue;
        Poly coeff = c * ic;
        if (s * pass_sign < 0) coeff = -coeff;
        out.add_term(k.wedge | ik.wedge, k.word.splice(p, ik.word), coeff);
      }
    }
  }
  return out;
}

}  // namespace nct
