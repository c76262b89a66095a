#include "nct/fedosov.hpp"

#include <functional>
#include <map>

#include "nct/linalg.hpp"
#include "nct/parallel.hpp"

namespace nct {

namespace {

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

DgElement generator(int n, int d, int k) { return DgElement::letter(n, d, k); }

}  // namespace

ConnectionSpec::ConnectionSpec(int n) : n_(n) {
  if (n < 1 || n > kMaxVariables) throw DimensionError("chart dimension out of range");
  gamma_.assign(static_cast<std::size_t>(n * n * n), Poly(n));
}

std::size_t ConnectionSpec::index(int k, int i, int j) const {
  if (k < 1 || k > n_ || i < 1 || i > n_ || j < 1 || j > n_) throw DimensionError("Christoffel index out of range");
  return static_cast<std::size_t>(((k - 1) * n_ + (i - 1)) * n_ + (j - 1));
}

const Poly& ConnectionSpec::gamma(int k, int i, int j) const { return gamma_[index(k, i, j)]; }

void ConnectionSpec::set_gamma(int k, int i, int j, const Poly& value) {
  if (value.variable_count() != n_) throw DimensionError("Christoffel symbol over the wrong ring");
  gamma_[index(k, i, j)] = value;
}

bool ConnectionSpec::is_symmetric() const {
  for (int k = 1; k <= n_; ++k)
    for (int i = 1; i <= n_; ++i)
      for (int j = i + 1; j <= n_; ++j)
        if (!(gamma(k, i, j) == gamma(k, j, i))) return false;
  return true;
}

bool ConnectionSpec::is_flat() const {
  for (const auto& g : gamma_)
    if (!g.is_zero()) return false;
  return true;
}

NCConnection::NCConnection(ConnectionSpec spec, int d, std::vector<std::vector<DgElement>> nabla)
    : spec_(std::move(spec)), d_(d), nabla_(std::move(nabla)) {
  int n = spec_.n();
  if (static_cast<int>(nabla_.size()) != d_) throw std::invalid_argument("connection needs one entry per index 1..d");
  for (int i = 1; i <= d_; ++i) {
    const auto& row = nabla_[static_cast<std::size_t>(i - 1)];
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("connection needs one image per generator");
    for (const auto& img : row) {
      if (img.letters() != n || img.truncation() != d_) throw DimensionError("connection image over the wrong chart");
      for (const auto& [key, c] : img.terms()) {
        if (wedge_degree(key.wedge) != 1) throw std::invalid_argument("connection image must be a one-form");
        if (key.word.size() != i) throw std::invalid_argument("nabla_" + std::to_string(i) + " must have tensor degree " + std::to_string(i));
      }
    }
  }
  rebuild();
}

void NCConnection::rebuild() {
  int n = spec_.n();
  positive_ = GeneratorRule{1, true, {}};
  std::uint64_t h = fnv1a(14695981039346656037ULL, std::to_string(n) + "/" + std::to_string(d_));
  for (int k = 1; k <= n; ++k) {
    DgElement sum(n, d_);
    for (int i = 1; i <= d_; ++i) {
      const DgElement& img = nabla_[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k - 1)];
      sum += img;
      h = fnv1a(h, img.str() + ";");
    }
    positive_.letter_images.push_back(std::move(sum));
  }
  fingerprint_ = h;
}

const DgElement& NCConnection::nabla(int i, int k) const {
  if (i < 1 || i > d_ || k < 1 || k > n()) throw std::out_of_range("connection index out of range");
  return nabla_[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k - 1)];
}

GeneratorRule NCConnection::rule(int i) const {
  GeneratorRule r{1, i == 1, {}};
  for (int k = 1; k <= n(); ++k)
    r.letter_images.push_back(i >= 1 && i <= d_ ? nabla(i, k) : DgElement(n(), d_));
  return r;
}

DgElement NCConnection::apply_positive(const DgElement& x) const { return extend_derivation(positive_, x); }

DgElement NCConnection::apply(const DgElement& x) const { return tau(x) + apply_positive(x); }

DgElement NCConnection::apply_index(int i, const DgElement& x) const {
  if (i == 0) return tau(x);
  return extend_derivation(rule(i), x);
}

NCConnection NCConnection::with_nabla(int i, int k, const DgElement& value) const {
  auto nabla = nabla_;
  nabla.at(static_cast<std::size_t>(i - 1)).at(static_cast<std::size_t>(k - 1)) = value;
  return NCConnection(spec_, d_, std::move(nabla));
}

std::vector<DgElement> christoffel_rule(const ConnectionSpec& spec, int d) {
  int n = spec.n();
  std::vector<DgElement> out;
  for (int k = 1; k <= n; ++k) {
    DgElement img(n, d);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) img.add_term(WedgeMask{1} << (i - 1), Word::letter(j), -spec.gamma(k, i, j));
    out.push_back(std::move(img));
  }
  return out;
}

DgElement torsion_component(const ConnectionSpec& spec, int k) {
  int n = spec.n();
  GeneratorRule d1{1, true, christoffel_rule(spec, 1)};
  DgElement e = generator(n, 1, k);
  return tau(extend_derivation(d1, e)) + extend_derivation(d1, tau(e));
}

NCConnection build_nc_connection(const ConnectionSpec& spec, int d) {
  int n = spec.n();
  if (d < 2) throw std::invalid_argument("truncation must be at least 2");
  for (int k = 1; k <= n; ++k)
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        if (!(spec.gamma(k, i, j) == spec.gamma(k, j, i)))
          throw TorsionError("Christoffel symbols not symmetric: Gamma^" + std::to_string(k) + "_{" +
                             std::to_string(i) + std::to_string(j) + "} != Gamma^" + std::to_string(k) + "_{" +
                             std::to_string(j) + std::to_string(i) + "}");

  std::vector<std::vector<DgElement>> nabla;
  nabla.push_back(christoffel_rule(spec, d));
  std::vector<GeneratorRule> rules;
  rules.push_back(GeneratorRule{1, true, nabla[0]});
  for (int m = 2; m <= d; ++m) {
    std::vector<DgElement> row(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t idx) {
      DgElement acc(n, d);
      for (int i = 1; i <= m - 1; ++i)
        acc += extend_derivation(rules[static_cast<std::size_t>(i - 1)], nabla[static_cast<std::size_t>(m - i - 1)][idx]);
      row[idx] = -homotopy(acc);
    });
    rules.push_back(GeneratorRule{1, false, row});
    nabla.push_back(std::move(row));
  }
  return NCConnection(spec, d, std::move(nabla));
}

bool SquareZeroReport::ok() const {
  for (const auto& e : entries)
    if (!e.zero) return false;
  return true;
}

SquareZeroReport verify_square_zero(const NCConnection& nc) {
  int n = nc.n();
  int d = nc.truncation();
  std::vector<DgElement> squares(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t idx) {
    DgElement e = generator(n, d, static_cast<int>(idx) + 1);
    squares[idx] = nc.apply(nc.apply(e));
  });
  SquareZeroReport report;
  report.untracked_from = d;
  for (int k = 1; k <= n; ++k) {
    const DgElement& sq = squares[static_cast<std::size_t>(k - 1)];
    for (int m = 1; m <= d; ++m) {
      DgElement part = sq.component(m - 1);
      report.entries.push_back({k, m, part.is_zero(), part.terms().size()});
    }
  }
  return report;
}

FilteredOperators<DgElement> conjugator(const NCConnection& nc) {
  FilteredOperators<DgElement> ops;
  ops.d0 = [](const DgElement& x) { return tau(x); };
  ops.d_positive = [&nc](const DgElement& x) { return nc.apply_positive(x); };
  ops.h = [](const DgElement& x) { return homotopy(x); };
  ops.depth = nc.truncation() + 1;
  return ops;
}

FlatSection flat_section(const NCConnection& nc, const TensorPoly& value) {
  if (value.letters() != nc.n() || value.truncation() != nc.truncation())
    throw DimensionError("series does not live on this connection's chart");
  FlatSection s{value, nc.apply(DgElement::from_tensor(value)), nc.fingerprint()};
  if (!s.witness.vanishes_through(nc.truncation() - 1)) throw std::logic_error("element is not D-closed at truncation");
  return s;
}

FlatSection sigma_lift(const NCConnection& nc, const Poly& f) {
  int n = nc.n();
  int d = nc.truncation();
  if (f.variable_count() != n) throw DimensionError("function over the wrong chart");
  auto ops = conjugator(nc);
  DgElement sigma = DgElement::scalar(n, d, f) - ops.h_D(DgElement::differential(d, f));
  return flat_section(nc, sigma.to_tensor());
}

FlatSection mul_flat(const NCConnection& nc, const FlatSection& a, const FlatSection& b) {
  if (a.context != nc.fingerprint() || b.context != nc.fingerprint())
    throw std::invalid_argument("flat sections come from a different connection");
  return flat_section(nc, a.value * b.value);
}

LeadingTerm leading_term(const FlatSection& a) {
  if (a.value.is_zero()) throw std::invalid_argument("leading term of zero");
  LeadingTerm t;
  t.degree = a.value.lowest_degree();
  t.component = a.value.component(t.degree);
  t.pbw = pbw_decompose(t.component);
  if (t.degree > 0)
    for (const auto& [factors, f] : t.pbw.entries)
      for (const auto& [y, c] : f.terms)
        if (!y.is_one()) throw std::logic_error("leading term has a letter part");
  return t;
}

namespace {

void compositions(int m, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (m == 0) {
    out.push_back(cur);
    return;
  }
  for (int part = 2; part <= m; ++part) {
    cur.push_back(part);
    compositions(m - part, cur, out);
    cur.pop_back();
  }
}

void index_tuples(int n, int length, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == length) {
    out.push_back(cur);
    return;
  }
  for (int k = 1; k <= n; ++k) {
    cur.push_back(k);
    index_tuples(n, length, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<long> commutator_leading_dimensions(const NCConnection& nc, int max_degree) {
  int n = nc.n();
  int d = nc.truncation();
  if (max_degree > d) throw std::invalid_argument("degree bound exceeds the truncation");
  std::vector<TensorPoly> sigma;
  for (int i = 1; i <= n; ++i) sigma.push_back(sigma_lift(nc, Poly::variable(n, i)).value);

  // Left-normed commutators [[s_{i1}, s_{i2}], ...] keyed by index tuple.
  std::map<std::vector<int>, TensorPoly> brackets;
  for (int len = 2; len <= max_degree; ++len) {
    std::vector<std::vector<int>> tuples;
    std::vector<int> cur;
    index_tuples(n, len, cur, tuples);
    for (const auto& t : tuples) {
      std::vector<int> head(t.begin(), t.end() - 1);
      const TensorPoly& inner = len == 2 ? sigma[static_cast<std::size_t>(t[0] - 1)] : brackets.at(head);
      brackets.emplace(t, commutator(inner, sigma[static_cast<std::size_t>(t.back() - 1)]));
    }
  }

  std::vector<long> dims(static_cast<std::size_t>(max_degree) + 1, 0);
  parallel_for(dims.size(), [&](std::size_t slot) {
    int m = static_cast<int>(slot);
    if (m == 0) {
      dims[slot] = 1;
      return;
    }
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions(m, cur, comps);
    std::vector<LinearWords> leading;
    for (const auto& comp : comps) {
      // Enumerate one index tuple per part.
      std::vector<std::vector<std::vector<int>>> choices;
      for (int part : comp) {
        std::vector<std::vector<int>> tuples;
        std::vector<int> c;
        index_tuples(n, part, c, tuples);
        choices.push_back(std::move(tuples));
      }
      std::vector<std::size_t> pick(comp.size(), 0);
      while (true) {
        TensorPoly product = TensorPoly::scalar(n, d, Poly(n, 1));
        for (std::size_t p = 0; p < comp.size(); ++p) product = product * brackets.at(choices[p][pick[p]]);
        int low = product.lowest_degree();
        if (low >= 0 && low < m) throw std::logic_error("commutator product has a term below its filtration degree");
        leading.push_back(product.component(m).constant_words());
        std::size_t p = 0;
        while (p < pick.size() && ++pick[p] == choices[p].size()) pick[p++] = 0;
        if (p == pick.size()) break;
      }
    }
    std::map<Word, std::size_t> column;
    for (const auto& lw : leading)
      for (const auto& [w, c] : lw) column.emplace(w, 0);
    std::size_t next = 0;
    for (auto& [w, idx] : column) idx = next++;
    Matrix mat(leading.size(), column.size());
    for (std::size_t r = 0; r < leading.size(); ++r)
      for (const auto& [w, c] : leading[r]) mat(r, column.at(w)) = c;
    dims[slot] = static_cast<long>(rank(mat));
  });
  return dims;
}

GaugeTransform GaugeTransform::identity(int n, int d) {
  std::vector<TensorPoly> images;
  for (int k = 1; k <= n; ++k) images.push_back(TensorPoly::letter(n, d, k));
  return GaugeTransform(std::move(images));
}

GaugeTransform::GaugeTransform(std::vector<TensorPoly> images) : images_(std::move(images)) {
  int n = static_cast<int>(images_.size());
  for (int k = 1; k <= n; ++k) {
    const TensorPoly& img = images_[static_cast<std::size_t>(k - 1)];
    if (img.letters() != n || img.truncation() != images_.front().truncation())
      throw DimensionError("gauge images over different charts");
    TensorPoly low = img.truncated(1);
    if (!(low == TensorPoly::letter(n, img.truncation(), k)))
      throw std::invalid_argument("gauge transform must be the identity modulo degree 2");
  }
}

bool GaugeTransform::is_identity() const {
  for (int k = 1; k <= n(); ++k)
    if (!(image(k) == TensorPoly::letter(n(), truncation(), k))) return false;
  return true;
}

TensorPoly GaugeTransform::apply(const TensorPoly& x) const {
  if (x.letters() != n() || x.truncation() != truncation()) throw DimensionError("series over a different chart");
  std::map<Word, TensorPoly> cache;
  cache.emplace(Word(), TensorPoly::scalar(n(), truncation(), Poly(n(), 1)));
  std::function<const TensorPoly&(const Word&)> word_image = [&](const Word& w) -> const TensorPoly& {
    auto it = cache.find(w);
    if (it != cache.end()) return it->second;
    TensorPoly value = word_image(w.prefix(w.size() - 1)) * image(w[w.size() - 1]);
    return cache.emplace(w, std::move(value)).first->second;
  };
  TensorPoly out(n(), truncation());
  for (const auto& [w, c] : x.terms()) out += word_image(w).scaled(c);
  return out;
}

DgElement GaugeTransform::apply(const DgElement& x) const {
  if (x.letters() != n() || x.truncation() != truncation()) throw DimensionError("element over a different chart");
  std::map<WedgeMask, TensorPoly> by_form;
  for (const auto& [key, c] : x.terms()) {
    auto [it, inserted] = by_form.try_emplace(key.wedge, n(), truncation());
    it->second.add_term(key.word, c);
  }
  DgElement out(n(), truncation());
  for (const auto& [wedge, t] : by_form) {
    TensorPoly image = apply(t);
    for (const auto& [w, c] : image.terms()) out.add_term(wedge, w, c);
  }
  return out;
}

GaugeTransform GaugeTransform::inverse() const {
  int d = truncation();
  std::vector<TensorPoly> inv;
  for (int k = 1; k <= n(); ++k) inv.push_back(TensorPoly::letter(n(), d, k));
  for (int round = 0; round <= d; ++round) {
    bool exact = true;
    for (int k = 1; k <= n(); ++k) {
      auto& slot = inv[static_cast<std::size_t>(k - 1)];
      TensorPoly err = apply(slot) - TensorPoly::letter(n(), d, k);
      if (!err.is_zero()) {
        exact = false;
        slot -= err;
      }
    }
    if (exact) return GaugeTransform(std::move(inv));
  }
  throw std::logic_error("gauge inversion did not terminate");
}

GaugeTransform GaugeTransform::with_truncation(int d) const {
  std::vector<TensorPoly> images;
  for (const auto& img : images_) images.push_back(img.with_truncation(d));
  return GaugeTransform(std::move(images));
}

GaugeTransform GaugeTransform::compose(const GaugeTransform& other) const {
  if (other.n() != n() || other.truncation() != truncation()) throw DimensionError("gauge transforms over different charts");
  std::vector<TensorPoly> images;
  for (int k = 1; k <= n(); ++k) images.push_back(apply(other.image(k)));
  return GaugeTransform(std::move(images));
}

NCConnection conjugate(const NCConnection& nc, const GaugeTransform& phi) {
  int n = nc.n();
  int d = nc.truncation();
  if (phi.n() != n || phi.truncation() != d) throw DimensionError("gauge transform over a different chart");
  // One extra degree keeps index d exact: nabla_{d+1} only reaches tensor degree d + 1.
  GaugeTransform lifted = phi.with_truncation(d + 1);
  GaugeTransform lifted_inverse = lifted.inverse();
  std::vector<std::vector<DgElement>> nabla(static_cast<std::size_t>(d), std::vector<DgElement>(static_cast<std::size_t>(n)));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t idx) {
    int k = static_cast<int>(idx) + 1;
    DgElement image = lifted.apply(nc.apply(DgElement::from_tensor(lifted_inverse.image(k))));
    if (!(image.component(0) == DgElement::one_form(n, d + 1, k)))
      throw std::logic_error("conjugation changed the degree-0 part");
    for (int i = 1; i <= d; ++i) nabla[static_cast<std::size_t>(i - 1)][idx] = image.component(i).with_truncation(d);
  });
  ConnectionSpec spec(n);
  for (int k = 1; k <= n; ++k)
    for (const auto& [key, c] : nabla[0][static_cast<std::size_t>(k - 1)].terms()) {
      int i = wedge_indices(key.wedge).front();
      spec.set_gamma(k, i, key.word[0], -c);
    }
  return NCConnection(spec, d, std::move(nabla));
}

std::vector<int> disagreement(const NCConnection& a, const NCConnection& b, int max_index) {
  std::vector<int> out;
  for (int i = 1; i <= max_index; ++i)
    for (int k = 1; k <= a.n(); ++k)
      if (!(a.nabla(i, k) == b.nabla(i, k))) {
        out.push_back(i);
        break;
      }
  return out;
}

GaugeTransform find_gauge(const NCConnection& a, const NCConnection& b) {
  if (a.n() != b.n() || a.truncation() != b.truncation()) throw DimensionError("connections on different charts");
  int n = a.n();
  int d = a.truncation();
  GaugeTransform total = GaugeTransform::identity(n, d);
  NCConnection current = a;
  for (int m = 1; m <= d - 1; ++m) {
    std::vector<TensorPoly> step;
    bool trivial = true;
    for (int k = 1; k <= n; ++k) {
      DgElement delta = current.nabla(m, k) - b.nabla(m, k);
      TensorPoly correction = homotopy(delta).to_tensor();
      if (!correction.is_zero()) trivial = false;
      step.push_back(TensorPoly::letter(n, d, k) + correction);
    }
    if (trivial) continue;
    GaugeTransform phi(std::move(step));
    current = conjugate(current, phi);
    total = phi.compose(total);
  }
  if (!disagreement(conjugate(a, total), b, d - 1).empty())
    throw std::logic_error("gauge search failed to match the connections");
  return total;
}

}  // namespace nct
