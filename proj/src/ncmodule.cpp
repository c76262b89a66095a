#include "nct/ncmodule.hpp"

#include <stdexcept>

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

void require_one_forms(const ModuleElement& x, const char* what) {
  for (const DgElement& part : x.parts())
    for (const auto& [k, c] : part.terms())
      if (wedge_degree(k.wedge) != 1) throw std::invalid_argument(std::string(what) + " must be a one-form");
}

}  // namespace

// ModuleElement

ModuleElement::ModuleElement(int rank, int n, int d) : n_(n), d_(d) {
  if (rank < 1) throw std::invalid_argument("module rank must be positive");
  parts_.assign(static_cast<std::size_t>(rank), DgElement(n, d));
}

ModuleElement ModuleElement::basis(int rank, int n, int d, int a) {
  if (a < 1 || a > rank) throw std::out_of_range("section index out of range");
  ModuleElement x(rank, n, d);
  x[a] = DgElement::scalar(n, d, Poly(n, 1));
  return x;
}

ModuleElement ModuleElement::from_tensors(const std::vector<TensorPoly>& parts) {
  if (parts.empty()) throw std::invalid_argument("module rank must be positive");
  ModuleElement x(static_cast<int>(parts.size()), parts.front().letters(), parts.front().truncation());
  for (std::size_t a = 0; a < parts.size(); ++a) {
    if (parts[a].letters() != x.n_ || parts[a].truncation() != x.d_) throw DimensionError("module coefficients over different charts");
    x.parts_[a] = DgElement::from_tensor(parts[a]);
  }
  return x;
}

bool ModuleElement::is_zero() const {
  for (const auto& p : parts_)
    if (!p.is_zero()) return false;
  return true;
}

ModuleElement ModuleElement::component(int tensor_degree) const {
  ModuleElement out = *this;
  for (auto& p : out.parts_) p = p.component(tensor_degree);
  return out;
}

ModuleElement ModuleElement::form_degree(int q) const {
  ModuleElement out = *this;
  for (auto& p : out.parts_) p = p.form_degree(q);
  return out;
}

ModuleElement ModuleElement::truncated(int max_tensor_degree) const {
  ModuleElement out = *this;
  for (auto& p : out.parts_) p = p.truncated(max_tensor_degree);
  return out;
}

ModuleElement ModuleElement::with_truncation(int d) const {
  ModuleElement out = *this;
  out.d_ = d;
  for (auto& p : out.parts_) p = p.with_truncation(d);
  return out;
}

bool ModuleElement::vanishes_through(int t) const {
  for (const auto& p : parts_)
    if (!p.vanishes_through(t)) return false;
  return true;
}

std::vector<TensorPoly> ModuleElement::to_tensors() const {
  std::vector<TensorPoly> out;
  for (const auto& p : parts_) out.push_back(p.to_tensor());
  return out;
}

std::size_t ModuleElement::term_count() const {
  std::size_t count = 0;
  for (const auto& p : parts_) count += p.terms().size();
  return count;
}

void ModuleElement::check_compatible(const ModuleElement& other) const {
  if (rank() != other.rank() || n_ != other.n_ || d_ != other.d_) throw DimensionError("module elements over different bundles");
}

ModuleElement& ModuleElement::operator+=(const ModuleElement& other) {
  check_compatible(other);
  for (std::size_t a = 0; a < parts_.size(); ++a) parts_[a] += other.parts_[a];
  return *this;
}

ModuleElement& ModuleElement::operator-=(const ModuleElement& other) {
  check_compatible(other);
  for (std::size_t a = 0; a < parts_.size(); ++a) parts_[a] -= other.parts_[a];
  return *this;
}

ModuleElement& ModuleElement::operator*=(const Rational& c) {
  for (auto& p : parts_) p *= c;
  return *this;
}

ModuleElement ModuleElement::operator-() const {
  ModuleElement out = *this;
  for (auto& p : out.parts_) p = -p;
  return out;
}

ModuleElement operator*(const ModuleElement& m, const DgElement& y) {
  if (m.n_ != y.letters()) throw DimensionError("module element and algebra element over different charts");
  ModuleElement out = m;
  DgElement lifted = y.truncation() == m.d_ ? y : y.with_truncation(m.d_);
  for (auto& p : out.parts_) p = p * lifted;
  return out;
}

std::string ModuleElement::str() const {
  std::string out;
  for (std::size_t a = 0; a < parts_.size(); ++a) {
    if (parts_[a].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "s" + std::to_string(a + 1) + "*(" + parts_[a].str() + ")";
  }
  return out.empty() ? "0" : out;
}

ModuleElement homotopy(const ModuleElement& x) {
  ModuleElement out = x;
  for (int a = 1; a <= x.rank(); ++a) out[a] = homotopy(x[a]);
  return out;
}

ModuleElement tau(const ModuleElement& x) {
  ModuleElement out = x;
  for (int a = 1; a <= x.rank(); ++a) out[a] = tau(x[a]);
  return out;
}

// ModuleConnectionSpec

ModuleConnectionSpec::ModuleConnectionSpec(int rank, int n) : rank_(rank), n_(n) {
  if (rank < 1) throw std::invalid_argument("module rank must be positive");
  if (n < 1 || n > kMaxVariables) throw DimensionError("chart dimension out of range");
  omega_.assign(static_cast<std::size_t>(rank * rank), DgElement(n, 0));
}

const DgElement& ModuleConnectionSpec::omega(int b, int a) const {
  if (a < 1 || a > rank_ || b < 1 || b > rank_) throw std::out_of_range("connection matrix index out of range");
  return omega_[static_cast<std::size_t>((b - 1) * rank_ + (a - 1))];
}

void ModuleConnectionSpec::set_omega(int b, int a, const DgElement& value) {
  if (a < 1 || a > rank_ || b < 1 || b > rank_) throw std::out_of_range("connection matrix index out of range");
  if (value.letters() != n_) throw DimensionError("connection entry over a different chart");
  for (const auto& [k, c] : value.terms()) {
    if (wedge_degree(k.wedge) != 1) throw std::invalid_argument("connection entries must have exterior degree 1");
    if (!k.word.empty()) throw std::invalid_argument("connection entries must have tensor degree 0");
  }
  omega_[static_cast<std::size_t>((b - 1) * rank_ + (a - 1))] = value.with_truncation(0);
}

std::vector<std::vector<DgElement>> ModuleConnectionSpec::curvature() const {
  std::vector<std::vector<DgElement>> out(static_cast<std::size_t>(rank_));
  for (int b = 1; b <= rank_; ++b)
    for (int a = 1; a <= rank_; ++a) {
      DgElement r = de_rham(omega(b, a));
      for (int c = 1; c <= rank_; ++c) r += omega(b, c) * omega(c, a);
      out[static_cast<std::size_t>(b - 1)].push_back(std::move(r));
    }
  return out;
}

bool ModuleConnectionSpec::is_flat() const {
  for (const auto& row : curvature())
    for (const auto& e : row)
      if (!e.is_zero()) return false;
  return true;
}

// ModuleNCConnection

ModuleNCConnection::ModuleNCConnection(NCConnection base, ModuleConnectionSpec spec,
                                       std::vector<std::vector<ModuleElement>> nabla)
    : base_(std::move(base)), spec_(std::move(spec)), nabla_(std::move(nabla)) {
  int r = spec_.rank();
  int d = base_.truncation();
  if (spec_.n() != base_.n()) throw DimensionError("bundle and base live on different charts");
  if (static_cast<int>(nabla_.size()) != d + 1) throw std::invalid_argument("expected d + 1 correction layers");
  for (int i = 1; i <= d + 1; ++i) {
    const auto& layer = nabla_[static_cast<std::size_t>(i - 1)];
    if (static_cast<int>(layer.size()) != r) throw std::invalid_argument("expected one image per basis section");
    for (const ModuleElement& img : layer) {
      if (img.rank() != r || img.letters() != base_.n() || img.truncation() != d)
        throw DimensionError("section image over a different bundle");
      require_one_forms(img, "section image");
      for (const DgElement& part : img.parts())
        for (const auto& [k, c] : part.terms())
          if (k.word.size() != i - 1) throw std::invalid_argument("section image has the wrong tensor degree");
    }
  }
  rebuild();
}

void ModuleNCConnection::rebuild() {
  int r = rank();
  int d = truncation();
  positive_.assign(static_cast<std::size_t>(r), ModuleElement(r, n(), d));
  std::uint64_t h = fnv1a(base_.fingerprint(), "module/" + std::to_string(r));
  for (int a = 1; a <= r; ++a)
    for (int i = 1; i <= d + 1; ++i) {
      const ModuleElement& img = nabla(i, a);
      positive_[static_cast<std::size_t>(a - 1)] += img;
      h = fnv1a(h, img.str() + ";");
    }
  fingerprint_ = h;
}

const ModuleElement& ModuleNCConnection::nabla(int i, int a) const {
  if (i < 1 || i > max_index() || a < 1 || a > rank()) throw std::out_of_range("module connection index out of range");
  return nabla_[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(a - 1)];
}

ModuleElement ModuleNCConnection::apply_images(const std::vector<ModuleElement>& images, const ModuleElement& x) const {
  ModuleElement out(x.rank(), x.letters(), x.truncation());
  for (int a = 1; a <= x.rank(); ++a) {
    if (x[a].is_zero()) continue;
    const ModuleElement& img = images[static_cast<std::size_t>(a - 1)];
    out += (img.truncation() == x.truncation() ? img : img.with_truncation(x.truncation())) * x[a];
  }
  return out;
}

ModuleElement ModuleNCConnection::apply_index(int i, const ModuleElement& x) const {
  if (x.rank() != rank() || x.letters() != n()) throw DimensionError("element over a different bundle");
  if (i == 0) return tau(x);
  ModuleElement out(x.rank(), x.letters(), x.truncation());
  if (i > max_index()) return out;
  if (i <= truncation())
    for (int a = 1; a <= x.rank(); ++a) out[a] = base_.apply_index(i, x[a]);
  return out + apply_images(nabla_[static_cast<std::size_t>(i - 1)], x);
}

ModuleElement ModuleNCConnection::apply_positive(const ModuleElement& x) const {
  if (x.rank() != rank() || x.letters() != n()) throw DimensionError("element over a different bundle");
  ModuleElement out(x.rank(), x.letters(), x.truncation());
  for (int a = 1; a <= x.rank(); ++a) out[a] = base_.apply_positive(x[a]);
  return out + apply_images(positive_, x);
}

ModuleElement ModuleNCConnection::apply(const ModuleElement& x) const { return tau(x) + apply_positive(x); }

ModuleNCConnection ModuleNCConnection::with_nabla(int i, int a, const ModuleElement& value) const {
  auto nabla = nabla_;
  nabla.at(static_cast<std::size_t>(i - 1)).at(static_cast<std::size_t>(a - 1)) = value;
  return ModuleNCConnection(base_, spec_, std::move(nabla));
}

ModuleNCConnection build_module_connection(const NCConnection& base, const ModuleConnectionSpec& spec) {
  if (spec.rank() < 1) throw std::invalid_argument("module rank must be positive");
  if (spec.n() != base.n()) throw DimensionError("bundle and base live on different charts");
  if (!verify_square_zero(base).ok()) throw std::logic_error("base connection fails the square-zero check");
  int r = spec.rank();
  int n = base.n();
  int d = base.truncation();
  std::vector<std::vector<ModuleElement>> nabla(static_cast<std::size_t>(d + 1),
                                                std::vector<ModuleElement>(static_cast<std::size_t>(r), ModuleElement(r, n, d)));
  for (int a = 1; a <= r; ++a)
    for (int b = 1; b <= r; ++b) nabla[0][static_cast<std::size_t>(a - 1)][b] = spec.omega(b, a).with_truncation(d);
  for (int m = 2; m <= d + 1; ++m) {
    ModuleNCConnection partial(base, spec, nabla);
    std::vector<ModuleElement> layer(static_cast<std::size_t>(r));
    parallel_for(static_cast<std::size_t>(r), [&](std::size_t idx) {
      int a = static_cast<int>(idx) + 1;
      ModuleElement acc(r, n, d);
      for (int i = 1; i <= m - 1; ++i) acc += partial.apply_index(i, partial.nabla(m - i, a));
      layer[idx] = -homotopy(acc.component(m - 2));
    });
    nabla[static_cast<std::size_t>(m - 1)] = std::move(layer);
  }
  return ModuleNCConnection(base, spec, std::move(nabla));
}

bool ModuleSquareZeroReport::ok() const {
  for (const auto& e : entries)
    if (!e.zero) return false;
  return true;
}

ModuleSquareZeroReport verify_module_square_zero(const ModuleNCConnection& mc) {
  int r = mc.rank();
  int d = mc.truncation();
  std::vector<ModuleElement> squares(static_cast<std::size_t>(r));
  parallel_for(squares.size(), [&](std::size_t idx) {
    ModuleElement s = ModuleElement::basis(r, mc.n(), d, static_cast<int>(idx) + 1);
    squares[idx] = mc.apply(mc.apply(s));
  });
  ModuleSquareZeroReport report;
  report.untracked_from = d;
  for (int a = 1; a <= r; ++a)
    for (int t = 0; t <= d - 1; ++t) {
      ModuleElement part = squares[static_cast<std::size_t>(a - 1)].component(t);
      report.entries.push_back({a, t, part.is_zero(), part.term_count()});
    }
  return report;
}

FilteredOperators<ModuleElement> module_conjugator(const ModuleNCConnection& mc) {
  FilteredOperators<ModuleElement> ops;
  ops.d0 = [](const ModuleElement& x) { return tau(x); };
  ops.d_positive = [&mc](const ModuleElement& x) { return mc.apply_positive(x); };
  ops.h = [](const ModuleElement& x) { return homotopy(x); };
  ops.depth = mc.truncation() + 1;
  return ops;
}

ModuleFlatSection module_flat_section(const ModuleNCConnection& mc, const std::vector<TensorPoly>& value) {
  if (static_cast<int>(value.size()) != mc.rank()) throw DimensionError("section has the wrong rank");
  ModuleElement x = ModuleElement::from_tensors(value);
  if (x.letters() != mc.n() || x.truncation() != mc.truncation()) throw DimensionError("section over a different chart");
  ModuleFlatSection s{value, mc.apply(x), mc.fingerprint()};
  if (!s.witness.vanishes_through(mc.truncation() - 1)) throw std::logic_error("module element is not closed at truncation");
  return s;
}

std::vector<ModuleFlatSection> module_flat_basis(const ModuleNCConnection& mc) {
  int r = mc.rank();
  auto ops = module_conjugator(mc);
  std::vector<ModuleFlatSection> out(static_cast<std::size_t>(r));
  parallel_for(out.size(), [&](std::size_t idx) {
    ModuleElement s = ModuleElement::basis(r, mc.n(), mc.truncation(), static_cast<int>(idx) + 1);
    ModuleElement lift = s - ops.h_D(mc.apply(s));
    out[idx] = module_flat_section(mc, lift.to_tensors());
  });
  return out;
}

ModuleFlatSection act_flat(const ModuleNCConnection& mc, const ModuleFlatSection& s, const FlatSection& f) {
  if (s.context != mc.fingerprint()) throw std::invalid_argument("module section comes from a different connection");
  if (f.context != mc.base().fingerprint()) throw std::invalid_argument("flat function comes from a different connection");
  std::vector<TensorPoly> value;
  for (const TensorPoly& part : s.value) value.push_back(part * f.value);
  return module_flat_section(mc, value);
}

// HomMap

HomMap::HomMap(int target_rank, int source_rank, int n, int d)
    : target_rank_(target_rank), source_rank_(source_rank), n_(n), d_(d) {
  if (target_rank < 1 || source_rank < 1) throw std::invalid_argument("module rank must be positive");
  entries_.assign(static_cast<std::size_t>(target_rank * source_rank), TensorPoly(n, d));
}

const TensorPoly& HomMap::entry(int b, int a) const {
  if (b < 1 || b > target_rank_ || a < 1 || a > source_rank_) throw std::out_of_range("map entry out of range");
  return entries_[static_cast<std::size_t>((b - 1) * source_rank_ + (a - 1))];
}

TensorPoly& HomMap::entry(int b, int a) {
  if (b < 1 || b > target_rank_ || a < 1 || a > source_rank_) throw std::out_of_range("map entry out of range");
  return entries_[static_cast<std::size_t>((b - 1) * source_rank_ + (a - 1))];
}

ModuleElement HomMap::apply(const ModuleElement& x) const {
  if (x.rank() != source_rank_ || x.letters() != n_ || x.truncation() != d_) throw DimensionError("map applied to a different bundle");
  ModuleElement out(target_rank_, n_, d_);
  for (int a = 1; a <= source_rank_; ++a) {
    if (x[a].is_zero()) continue;
    for (int b = 1; b <= target_rank_; ++b)
      if (!entry(b, a).is_zero()) out[b] += DgElement::from_tensor(entry(b, a)) * x[a];
  }
  return out;
}

HomMap HomMap::compose(const HomMap& other) const {
  if (other.target_rank_ != source_rank_ || other.n_ != n_ || other.d_ != d_) throw DimensionError("maps do not compose");
  HomMap out(target_rank_, other.source_rank_, n_, d_);
  for (int b = 1; b <= target_rank_; ++b)
    for (int a = 1; a <= other.source_rank_; ++a)
      for (int c = 1; c <= source_rank_; ++c) out.entry(b, a) += entry(b, c) * other.entry(c, a);
  return out;
}

HomMap HomMap::operator+(const HomMap& other) const {
  if (other.target_rank_ != target_rank_ || other.source_rank_ != source_rank_) throw DimensionError("maps of different shapes");
  HomMap out = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] += other.entries_[i];
  return out;
}

HomMap HomMap::operator-(const HomMap& other) const {
  if (other.target_rank_ != target_rank_ || other.source_rank_ != source_rank_) throw DimensionError("maps of different shapes");
  HomMap out = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] -= other.entries_[i];
  return out;
}

bool HomMap::is_zero() const {
  for (const auto& e : entries_)
    if (!e.is_zero()) return false;
  return true;
}

int HomMap::lowest_degree() const {
  int low = -1;
  for (const auto& e : entries_) {
    int l = e.lowest_degree();
    if (l >= 0 && (low < 0 || l < low)) low = l;
  }
  return low;
}

HomMap HomMap::component(int degree) const {
  HomMap out = *this;
  for (auto& e : out.entries_) e = e.component(degree);
  return out;
}

HomMap HomMap::with_truncation(int d) const {
  HomMap out = *this;
  out.d_ = d;
  for (auto& e : out.entries_) e = e.with_truncation(d);
  return out;
}

namespace {

void check_shared_base(const ModuleNCConnection& a, const ModuleNCConnection& b) {
  if (a.n() != b.n() || a.truncation() != b.truncation() || a.base().fingerprint() != b.base().fingerprint())
    throw std::invalid_argument("module connections over different base connections");
}

/// Constant-coefficient kernel of tau on words of length m.
std::vector<LinearWords> tau_kernel(int n, int m) {
  if (m == 0) return {LinearWords{{Word(), Rational(1)}}};
  std::vector<Word> words{Word()};
  for (int len = 1; len <= m; ++len) {
    std::vector<Word> next;
    for (const Word& w : words)
      for (int k = 1; k <= n; ++k) next.push_back(w.concat(Word::letter(k)));
    words = std::move(next);
  }
  std::map<DgKey, std::size_t> rows;
  std::vector<DgElement> images;
  for (const Word& w : words) {
    DgElement x(n, m);
    x.add_term(0, w, Poly(n, 1));
    images.push_back(tau(x));
    for (const auto& [k, c] : images.back().terms()) rows.emplace(k, 0);
  }
  std::size_t next = 0;
  for (auto& [k, idx] : rows) idx = next++;
  Matrix mat(rows.size(), words.size());
  for (std::size_t j = 0; j < words.size(); ++j)
    for (const auto& [k, c] : images[j].terms()) mat(rows.at(k), j) = c.constant_term();
  std::vector<LinearWords> out;
  for (const auto& v : nullspace(mat)) {
    LinearWords lw;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (sgn(v[j]) != 0) lw.emplace(words[j], v[j]);
    out.push_back(std::move(lw));
  }
  return out;
}

}  // namespace

std::vector<HomMap> hom_leading(const ModuleNCConnection& source, const ModuleNCConnection& target, int degree) {
  check_shared_base(source, target);
  int n = source.n();
  int d = source.truncation();
  if (degree < 0 || degree > d) throw std::invalid_argument("degree outside the truncation");
  std::vector<HomMap> out;
  for (const LinearWords& u : tau_kernel(n, degree))
    for (int b = 1; b <= target.rank(); ++b)
      for (int a = 1; a <= source.rank(); ++a) {
        HomMap f(target.rank(), source.rank(), n, d);
        f.entry(b, a) = TensorPoly::from_words(n, d, u);
        out.push_back(std::move(f));
      }
  return out;
}

std::vector<ModuleElement> hom_defect(const ModuleNCConnection& source, const ModuleNCConnection& target, const HomMap& f) {
  check_shared_base(source, target);
  if (f.source_rank() != source.rank() || f.target_rank() != target.rank()) throw DimensionError("map shape does not match the bundles");
  std::vector<ModuleElement> out;
  for (int a = 1; a <= source.rank(); ++a) {
    ModuleElement s = ModuleElement::basis(source.rank(), source.n(), source.truncation(), a);
    out.push_back(target.apply(f.apply(s)) - f.apply(source.apply(s)));
  }
  return out;
}

HomMap hom_lift(const ModuleNCConnection& source, const ModuleNCConnection& target, const HomMap& leading) {
  int d = source.truncation();
  int n0 = leading.lowest_degree();
  if (n0 < 0) throw std::invalid_argument("cannot lift the zero map");
  HomMap f = leading;
  for (int m = n0 + 1; m <= d; ++m) {
    auto defect = hom_defect(source, target, f);
    for (int a = 1; a <= source.rank(); ++a) {
      const ModuleElement& e = defect[static_cast<std::size_t>(a - 1)];
      if (!e.vanishes_through(m - 2)) throw std::logic_error("leading term does not commute with the differentials");
      ModuleElement correction = -homotopy(e.component(m - 1));
      for (int b = 1; b <= target.rank(); ++b) f.entry(b, a) += correction[b].to_tensor();
    }
  }
  return f;
}

// ModuleGauge

ModuleGauge::ModuleGauge(HomMap map) : map_(std::move(map)) {
  if (map_.source_rank() != map_.target_rank()) throw DimensionError("gauge transform must be square");
  for (int b = 1; b <= rank(); ++b)
    for (int a = 1; a <= rank(); ++a) {
      TensorPoly low = map_.entry(b, a).component(0);
      TensorPoly expect(map_.letters(), map_.truncation());
      if (a == b) expect = TensorPoly::scalar(map_.letters(), map_.truncation(), Poly(map_.letters(), 1));
      if (!(low == expect)) throw std::invalid_argument("gauge transform must be the identity modulo tensor degree 1");
    }
}

ModuleGauge ModuleGauge::identity(int rank, int n, int d) {
  HomMap m(rank, rank, n, d);
  for (int a = 1; a <= rank; ++a) m.entry(a, a) = TensorPoly::scalar(n, d, Poly(n, 1));
  return ModuleGauge(std::move(m));
}

bool ModuleGauge::is_identity() const {
  return map_ == identity(rank(), map_.letters(), map_.truncation()).map();
}

ModuleGauge ModuleGauge::inverse() const {
  HomMap id = identity(rank(), map_.letters(), map_.truncation()).map();
  HomMap nil = map_ - id;
  HomMap acc = id;
  HomMap term = id;
  for (int j = 0; j <= map_.truncation(); ++j) {
    HomMap next = nil.compose(term);
    term = HomMap(rank(), rank(), map_.letters(), map_.truncation()) - next;
    if (term.is_zero()) break;
    acc = acc + term;
  }
  return ModuleGauge(std::move(acc));
}

ModuleGauge ModuleGauge::compose(const ModuleGauge& other) const { return ModuleGauge(map_.compose(other.map_)); }

ModuleGauge ModuleGauge::with_truncation(int d) const { return ModuleGauge(map_.with_truncation(d)); }

ModuleNCConnection conjugate(const ModuleNCConnection& mc, const ModuleGauge& phi) {
  int r = mc.rank();
  int n = mc.n();
  int d = mc.truncation();
  if (phi.rank() != r || phi.map().letters() != n || phi.map().truncation() != d)
    throw DimensionError("gauge transform over a different bundle");
  // One extra degree keeps tensor degree d exact.
  ModuleGauge lifted = phi.with_truncation(d + 1);
  ModuleGauge lifted_inverse = lifted.inverse();
  std::vector<ModuleElement> images(static_cast<std::size_t>(r));
  parallel_for(images.size(), [&](std::size_t idx) {
    int a = static_cast<int>(idx) + 1;
    ModuleElement s = ModuleElement::basis(r, n, d + 1, a);
    images[idx] = lifted.map().apply(mc.apply(lifted_inverse.map().apply(s)));
    if (!(images[idx].form_degree(1) == images[idx])) throw std::logic_error("conjugated image is not a one-form");
  });
  ModuleConnectionSpec spec(r, n);
  std::vector<std::vector<ModuleElement>> nabla(static_cast<std::size_t>(d + 1));
  for (int a = 1; a <= r; ++a) {
    const ModuleElement& img = images[static_cast<std::size_t>(a - 1)];
    for (int b = 1; b <= r; ++b) spec.set_omega(b, a, img[b].component(0).with_truncation(0));
    for (int i = 1; i <= d + 1; ++i) nabla[static_cast<std::size_t>(i - 1)].push_back(img.component(i - 1).with_truncation(d));
  }
  return ModuleNCConnection(mc.base(), spec, std::move(nabla));
}

std::vector<int> disagreement(const ModuleNCConnection& a, const ModuleNCConnection& b, int max_index) {
  if (a.rank() != b.rank()) throw DimensionError("module connections of different rank");
  std::vector<int> out;
  for (int i = 1; i <= max_index; ++i)
    for (int s = 1; s <= a.rank(); ++s)
      if (!(a.nabla(i, s) == b.nabla(i, s))) {
        out.push_back(i);
        break;
      }
  return out;
}

ModuleGauge find_module_gauge(const ModuleNCConnection& a, const ModuleNCConnection& b) {
  check_shared_base(a, b);
  if (a.rank() != b.rank()) throw DimensionError("module connections of different rank");
  int r = a.rank();
  int n = a.n();
  int d = a.truncation();
  ModuleGauge total = ModuleGauge::identity(r, n, d);
  ModuleNCConnection current = a;
  for (int m = 1; m <= d; ++m) {
    HomMap step = ModuleGauge::identity(r, n, d).map();
    bool trivial = true;
    for (int s = 1; s <= r; ++s) {
      ModuleElement correction = homotopy(current.nabla(m, s) - b.nabla(m, s));
      if (correction.is_zero()) continue;
      trivial = false;
      for (int t = 1; t <= r; ++t) step.entry(t, s) += correction[t].to_tensor();
    }
    if (trivial) continue;
    ModuleGauge phi(std::move(step));
    current = conjugate(current, phi);
    total = phi.compose(total);
  }
  if (!disagreement(conjugate(a, total), b, d).empty())
    throw std::logic_error("gauge search failed to match the module connections");
  return total;
}

}  // namespace nct
