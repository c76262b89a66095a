#include "nct/koszul.hpp"

#include <algorithm>
#include <string>

namespace nct {

namespace {

int parity(long x) { return (x % 2 == 0) ? 1 : -1; }

void add_to(Vector& v, BasisRef r, const Rational& c) {
  if (sgn(c) == 0) return;
  Rational& slot = v[r];
  slot += c;
  if (sgn(slot) == 0) v.erase(r);
}

std::vector<std::vector<int>> subsets(int n, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int from) -> void {
    if (static_cast<int>(cur.size()) == r) {
      out.push_back(cur);
      return;
    }
    for (int i = from; i <= n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 1);
  return out;
}

long binomial(int n, int r) {
  long b = 1;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

std::string ref_str(BasisRef r) { return "(" + std::to_string(r.degree) + "," + std::to_string(r.index) + ")"; }

}  // namespace

MinimalAInfinity::MinimalAInfinity(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty() || dims_[0] != 1) throw std::invalid_argument("E^0 must be one-dimensional");
  for (int d : dims_)
    if (d < 0) throw std::invalid_argument("graded dimensions must be nonnegative");
}

MinimalAInfinity MinimalAInfinity::exterior(int n) {
  if (n < 1) throw std::invalid_argument("exterior algebra needs a generator");
  std::vector<int> dims;
  for (int r = 0; r <= n; ++r) dims.push_back(static_cast<int>(binomial(n, r)));
  MinimalAInfinity a(dims);
  std::vector<std::map<std::vector<int>, int>> index(static_cast<std::size_t>(n) + 1);
  std::vector<std::vector<std::vector<int>>> sets(static_cast<std::size_t>(n) + 1);
  for (int r = 0; r <= n; ++r) {
    sets[static_cast<std::size_t>(r)] = subsets(n, r);
    for (std::size_t i = 0; i < sets[static_cast<std::size_t>(r)].size(); ++i)
      index[static_cast<std::size_t>(r)].emplace(sets[static_cast<std::size_t>(r)][i], static_cast<int>(i));
  }
  for (int r = 1; r <= n; ++r)
    for (int s = 1; r + s <= n; ++s)
      for (std::size_t x = 0; x < sets[static_cast<std::size_t>(r)].size(); ++x)
        for (std::size_t y = 0; y < sets[static_cast<std::size_t>(s)].size(); ++y) {
          const auto& sx = sets[static_cast<std::size_t>(r)][x];
          const auto& sy = sets[static_cast<std::size_t>(s)][y];
          std::vector<int> joined = sx;
          joined.insert(joined.end(), sy.begin(), sy.end());
          std::vector<int> sorted = joined;
          std::sort(sorted.begin(), sorted.end());
          if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
          long inversions = 0;
          for (int u : sx)
            for (int v : sy)
              if (u > v) ++inversions;
          a.add_product({{r, static_cast<int>(x)}, {s, static_cast<int>(y)}},
                        {r + s, index[static_cast<std::size_t>(r + s)].at(sorted)}, Rational(parity(inversions)));
        }
  return a;
}

MinimalAInfinity MinimalAInfinity::curve(int n) {
  if (n < 1) throw std::invalid_argument("curve-type algebra needs a generator");
  return MinimalAInfinity({1, n});
}

int MinimalAInfinity::max_arity() const {
  int k = 2;
  for (const auto& [arity, table] : products_)
    if (!table.empty()) k = std::max(k, arity);
  return k;
}

std::vector<BasisRef> MinimalAInfinity::basis() const {
  std::vector<BasisRef> out;
  for (int r = 0; r <= top_degree(); ++r)
    for (int i = 0; i < dims_[static_cast<std::size_t>(r)]; ++i) out.push_back({r, i});
  return out;
}

std::vector<BasisRef> MinimalAInfinity::reduced_basis() const {
  std::vector<BasisRef> out = basis();
  out.erase(out.begin());
  return out;
}

void MinimalAInfinity::check_ref(BasisRef r) const {
  if (r.degree < 0 || r.degree > top_degree() || r.index < 0 || r.index >= dims_[static_cast<std::size_t>(r.degree)])
    throw std::out_of_range("basis element " + ref_str(r) + " does not exist");
}

void MinimalAInfinity::add_product(const std::vector<BasisRef>& in, BasisRef out, const Rational& c) {
  int k = static_cast<int>(in.size());
  if (k < 2) throw std::invalid_argument("products need at least two inputs");
  int degree = 2 - k;
  for (BasisRef r : in) {
    check_ref(r);
    if (r.degree == 0) throw std::invalid_argument("products with the unit are fixed by strict unitality");
    degree += r.degree;
  }
  check_ref(out);
  if (out.degree != degree) throw std::invalid_argument("product m_" + std::to_string(k) + " has the wrong degree");
  Vector& v = products_[k][in];
  add_to(v, out, c);
  if (v.empty()) products_[k].erase(in);
}

const MinimalAInfinity::Table& MinimalAInfinity::products(int k) const {
  static const Table kEmpty;
  auto it = products_.find(k);
  return it == products_.end() ? kEmpty : it->second;
}

Vector MinimalAInfinity::apply(const std::vector<BasisRef>& in) const {
  if (in.size() < 2) throw std::invalid_argument("products need at least two inputs");
  bool has_unit = false;
  for (BasisRef r : in) has_unit = has_unit || r.degree == 0;
  if (has_unit) {
    if (in.size() != 2) return {};
    return {{in[0].degree == 0 ? in[1] : in[0], Rational(1)}};
  }
  const Table& table = products(static_cast<int>(in.size()));
  auto it = table.find(in);
  return it == table.end() ? Vector{} : it->second;
}

bool AInfinityReport::ok() const {
  for (const auto& e : entries)
    if (e.failures != 0) return false;
  return true;
}

int default_identity_bound(const MinimalAInfinity& a) { return 2 * a.max_arity() - 1; }

AInfinityReport validate_ainfinity(const MinimalAInfinity& a, int n_max) {
  std::vector<BasisRef> basis = a.basis();
  AInfinityReport report;
  for (int n = 3; n <= n_max; ++n) {
    AInfinityReport::Entry entry{n, 0, 0, {}};
    std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
    while (true) {
      std::vector<BasisRef> tuple;
      for (std::size_t p : pick) tuple.push_back(basis[p]);
      // sum over i + l + j = n of (-1)^{i + l j} m_{k+1}(id^i (x) m_l (x) id^j), Koszul signs on elements
      Vector total;
      for (int l = 2; l <= n - 1; ++l)
        for (int i = 0; i + l <= n; ++i) {
          int j = n - l - i;
          long before = 0;
          for (int t = 0; t < i; ++t) before += tuple[static_cast<std::size_t>(t)].degree;
          int sign = parity(i + static_cast<long>(l) * j) * parity(static_cast<long>(l) * before);
          std::vector<BasisRef> inner(tuple.begin() + i, tuple.begin() + i + l);
          for (const auto& [out, c] : a.apply(inner)) {
            std::vector<BasisRef> outer(tuple.begin(), tuple.begin() + i);
            outer.push_back(out);
            outer.insert(outer.end(), tuple.begin() + i + l, tuple.end());
            for (const auto& [r, c2] : a.apply(outer)) add_to(total, r, Rational(sign) * c * c2);
          }
        }
      ++entry.tuples;
      if (!total.empty()) {
        if (entry.failures == 0) entry.first_failure = tuple;
        ++entry.failures;
      }
      std::size_t p = 0;
      while (p < pick.size() && ++pick[p] == basis.size()) pick[p++] = 0;
      if (p == pick.size()) break;
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

AInfinityReport validate_ainfinity(const MinimalAInfinity& a) { return validate_ainfinity(a, default_identity_bound(a)); }

int BarDual::letter(BasisRef r) const {
  auto it = std::find(generators.begin(), generators.end(), r);
  if (it == generators.end()) throw std::out_of_range("no dual generator for " + ref_str(r));
  return static_cast<int>(it - generators.begin()) + 1;
}

BarDual bar_dual(const MinimalAInfinity& a) {
  BarDual b;
  b.generators = a.reduced_basis();
  if (static_cast<int>(b.generators.size()) > 15) throw std::length_error("too many dual generators for the word encoding");
  for (BasisRef r : b.generators) b.degrees.push_back(1 - r.degree);
  for (int k = 2; k <= a.max_arity(); ++k)
    for (const auto& [in, outs] : a.products(k)) {
      // Desuspension signs (-1)^{sum_i (k - i)(|u_i| - 1)}.
      long exponent = 0;
      Word w;
      for (int i = 1; i <= k; ++i) {
        BasisRef u = in[static_cast<std::size_t>(i - 1)];
        exponent += static_cast<long>(k - i) * (u.degree - 1);
        w.push_back(b.letter(u));
      }
      for (const auto& [out, c] : outs) add_to(b.images[out], w, Rational(parity(exponent)) * c);
    }
  for (auto it = b.images.begin(); it != b.images.end();) it = it->second.empty() ? b.images.erase(it) : std::next(it);
  return b;
}

LinearWords apply_bar_dual(const BarDual& b, const LinearWords& x, int max_length) {
  LinearWords out;
  for (const auto& [w, c] : x) {
    long before = 0;
    for (int p = 0; p < w.size(); ++p) {
      BasisRef g = b.generators[static_cast<std::size_t>(w[p] - 1)];
      auto it = b.images.find(g);
      if (it != b.images.end())
        for (const auto& [iw, ic] : it->second) {
          if (w.size() - 1 + iw.size() > max_length) continue;
          add_to(out, w.splice(p, iw), Rational(parity(before)) * c * ic);
        }
      before += b.degrees[static_cast<std::size_t>(w[p] - 1)];
    }
  }
  return out;
}

std::vector<BasisRef> bar_dual_square_defects(const BarDual& b, int max_length) {
  std::vector<BasisRef> out;
  for (const auto& [g, image] : b.images)
    if (!apply_bar_dual(b, image, max_length).empty()) out.push_back(g);
  return out;
}

namespace {

void require_valid(const MinimalAInfinity& a) {
  AInfinityReport report = validate_ainfinity(a);
  for (const auto& e : report.entries)
    if (e.failures != 0) {
      std::string tuple;
      for (BasisRef r : e.first_failure) tuple += ref_str(r);
      throw AInfinityError("A-infinity identity with " + std::to_string(e.n) + " inputs fails on " + tuple);
    }
}

}  // namespace

std::map<BasisRef, TensorPoly> bar_dual_differential(const MinimalAInfinity& a, int d) {
  if (a.top_degree() < 1 || a.dims()[1] == 0) throw std::invalid_argument("E^1 must be nonzero");
  require_valid(a);
  int n = a.dims()[1];
  BarDual b = bar_dual(a);
  std::map<BasisRef, TensorPoly> out;
  for (int r = 2; r <= a.top_degree(); ++r)
    for (int i = 0; i < a.dims()[static_cast<std::size_t>(r)]; ++i) {
      BasisRef g{r, i};
      TensorPoly t(n, d);
      auto it = b.images.find(g);
      if (it != b.images.end())
        for (const auto& [w, c] : it->second) {
          bool letters_only = true;
          for (int p = 0; p < w.size(); ++p) letters_only = letters_only && w[p] <= n;
          if (letters_only && w.size() <= d) t.add_term(w, Poly(n, c));
        }
      out.emplace(g, std::move(t));
    }
  return out;
}

std::vector<long> quotient_dimensions(int n, const std::vector<TensorPoly>& relations, int d) {
  std::vector<Word> words{Word()};
  std::vector<Word> layer{Word()};
  for (int len = 1; len <= d; ++len) {
    std::vector<Word> next;
    for (const Word& w : layer)
      for (int k = 1; k <= n; ++k) next.push_back(w.concat(Word::letter(k)));
    words.insert(words.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  std::map<Word, std::size_t> column;
  for (std::size_t j = 0; j < words.size(); ++j) column.emplace(words[j], j);

  std::vector<LinearWords> rows;
  for (const TensorPoly& r : relations) {
    if (r.letters() != n) throw DimensionError("relation over a different alphabet");
    LinearWords rw = r.constant_words();
    int low = r.lowest_degree();
    if (low < 0) continue;
    for (const Word& u : words)
      for (const Word& v : words) {
        if (u.size() + low + v.size() > d) continue;
        LinearWords row;
        for (const auto& [w, c] : rw) {
          Word full = u.concat(w);
          if (full.size() + v.size() > d) continue;
          add_to(row, full.concat(v), c);
        }
        if (!row.empty()) rows.push_back(std::move(row));
      }
  }
  Matrix m(rows.size(), words.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [w, c] : rows[i]) m(i, column.at(w)) = c;
  std::vector<long> dims;
  long count = 1;
  for (int deg = 0; deg <= d; ++deg) {
    dims.push_back(count);
    count *= n;
  }
  // Columns run in increasing degree, so each pivot sits in the lowest degree of its row.
  for (std::size_t pivot : row_reduce(m)) --dims[static_cast<std::size_t>(words[pivot].size())];
  return dims;
}

KoszulDualPresentation relation_ideal(const MinimalAInfinity& a, int d) {
  auto dm = bar_dual_differential(a, d);
  KoszulDualPresentation out;
  out.letters = a.dims()[1];
  out.truncation = d;
  for (const auto& [g, t] : dm)
    if (g.degree == 2) {
      out.sources.push_back(g);
      out.relations.push_back(t);
    }
  out.quotient_dims = quotient_dimensions(out.letters, out.relations, d);
  std::map<Word, std::size_t> column;
  for (const auto& r : out.relations)
    for (const auto& [w, c] : r.terms()) column.emplace(w, 0);
  std::size_t next = 0;
  for (auto& [w, idx] : column) idx = next++;
  Matrix m(out.relations.size(), column.size());
  for (std::size_t i = 0; i < out.relations.size(); ++i)
    for (const auto& [w, c] : out.relations[i].terms()) m(i, column.at(w)) = c.constant_term();
  out.relations_independent = rank(m) == out.relations.size();
  return out;
}

namespace {

void check_square(const Matrix& m, std::size_t size, const char* what) {
  if (m.rows() != size || m.cols() != size) throw std::invalid_argument(std::string(what) + " has the wrong shape");
}

void check_shape(const Matrix& m, std::size_t rows, std::size_t cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols) throw std::invalid_argument(std::string(what) + " has the wrong shape");
}

void check_degree(const Matrix& m, const std::vector<int>& target, const std::vector<int>& source, int shift, const char* what) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (sgn(m(r, c)) != 0 && target[r] != source[c] + shift)
        throw std::invalid_argument(std::string(what) + " does not have degree " + std::to_string(shift));
}

void check_complex(const FilteredComplex& c, const char* what) {
  if (c.filtration.size() != c.degree.size()) throw std::invalid_argument(std::string(what) + " needs one filtration index per basis vector");
  check_square(c.d, c.size(), what);
  check_degree(c.d, c.degree, c.degree, 1, what);
  if (!(c.d * c.d).is_zero()) throw std::invalid_argument(std::string(what) + " differential does not square to zero");
}

}  // namespace

void validate_retraction(const Retraction& r) {
  check_complex(r.big, "big complex");
  check_complex(r.small, "small complex");
  std::size_t nb = r.big.size(), ns = r.small.size();
  check_shape(r.i, nb, ns, "inclusion");
  check_shape(r.p, ns, nb, "projection");
  check_square(r.h, nb, "homotopy");
  check_square(r.delta, nb, "perturbation");
  check_degree(r.i, r.big.degree, r.small.degree, 0, "inclusion");
  check_degree(r.p, r.small.degree, r.big.degree, 0, "projection");
  check_degree(r.h, r.big.degree, r.big.degree, -1, "homotopy");
  check_degree(r.delta, r.big.degree, r.big.degree, 1, "perturbation");
  if (!(r.p * r.i == Matrix::identity(ns))) throw std::invalid_argument("p i is not the identity");
  if (!(r.i * r.p == Matrix::identity(nb) + r.big.d * r.h + r.h * r.big.d))
    throw std::invalid_argument("i p differs from id + d h + h d");
  if (!(r.big.d * r.i == r.i * r.small.d)) throw std::invalid_argument("inclusion is not a chain map");
  if (!(r.small.d * r.p == r.p * r.big.d)) throw std::invalid_argument("projection is not a chain map");
  Matrix perturbed = r.big.d + r.delta;
  if (!(perturbed * perturbed).is_zero()) throw std::invalid_argument("perturbed differential does not square to zero");
}

PerturbedRetraction perturbation_series(const Retraction& r, int max_terms) {
  validate_retraction(r);
  const auto& f = r.big.filtration;
  for (std::size_t row = 0; row < r.delta.rows(); ++row)
    for (std::size_t col = 0; col < r.delta.cols(); ++col) {
      if (sgn(r.delta(row, col)) != 0 && f[row] <= f[col])
        throw DivergenceError("perturbation does not raise the filtration");
      if (sgn(r.h(row, col)) != 0 && f[row] < f[col]) throw DivergenceError("homotopy lowers the filtration");
    }
  std::size_t nb = r.big.size();
  Matrix a(nb, nb);
  Matrix term = r.delta;
  int terms = 0;
  while (!term.is_zero()) {
    if (++terms > max_terms) throw DivergenceError("perturbation series did not terminate within the truncation");
    a = a + term;
    term = term * r.h * r.delta;
  }
  PerturbedRetraction out;
  out.differential = r.small.d + r.p * a * r.i;
  out.inclusion = r.i + r.h * a * r.i;
  out.projection = r.p + r.p * a * r.h;
  out.homotopy = r.h + r.h * a * r.h;
  out.terms = terms;
  return out;
}

}  // namespace nct
