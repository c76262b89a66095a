#include "nct/io.hpp"

#include <algorithm>
#include <set>

namespace nct::io {

namespace {

using In = nlohmann::json;

std::string child(const std::string& where, const std::string& key) { return where + "/" + key; }

const In& require(const In& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw SpecError(where.empty() ? "/" : where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SpecError(child(where, key), "missing field");
  return *it;
}

int as_int(const In& j, const std::string& where, int lo, int hi) {
  if (!j.is_number_integer()) throw SpecError(where, "expected an integer");
  auto v = j.get<long long>();
  if (v < lo || v > hi)
    throw SpecError(where, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

int index_from(const std::string& text, const std::string& where, int hi) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw SpecError(where, "expected an index, got \"" + text + "\"");
  }
  if (used != text.size() || v < 1 || v > hi)
    throw SpecError(where, "index \"" + text + "\" outside 1.." + std::to_string(hi));
  return v;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(' ');
  auto e = s.find_last_not_of(' ');
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

Rational as_rational(const In& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw SpecError(where, "expected a rational as a string or integer");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const ParseError& e) {
    throw SpecError(where, e.what());
  }
}

Poly as_poly(const In& j, const std::string& where, int n) {
  if (j.is_number_integer()) return Poly(n, Rational(j.get<long>()));
  if (!j.is_string()) throw SpecError(where, "expected a polynomial string");
  try {
    return Poly::parse(j.get<std::string>(), n);
  } catch (const std::invalid_argument& e) {
    throw SpecError(where, e.what());
  }
}

Word as_word(const In& j, const std::string& where, int n) {
  if (!j.is_array()) throw SpecError(where, "expected an array of letters");
  if (j.size() > static_cast<std::size_t>(Word::kMaxLength)) throw SpecError(where, "word too long");
  Word w;
  for (std::size_t p = 0; p < j.size(); ++p) w.push_back(as_int(j[p], child(where, std::to_string(p)), 1, n));
  return w;
}

void check_keys(const In& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw SpecError(where.empty() ? "/" : where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw SpecError(child(where, key), "unknown field");
  }
}

// `byte` is 1-based, as reported by the JSON parser.
std::string location(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < std::min(byte, text.size() + 1); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

ConnectionSpec christoffel_from_json(const In& j, const std::string& where, int n) {
  if (!j.is_object()) throw SpecError(where, "expected an object keyed by upper index");
  std::map<std::tuple<int, int, int>, std::pair<Poly, std::string>> given;
  for (const auto& [kkey, table] : j.items()) {
    std::string wk = child(where, kkey);
    int k = index_from(kkey, wk, n);
    if (!table.is_object()) throw SpecError(wk, "expected an object keyed by \"i,j\"");
    for (const auto& [ijkey, value] : table.items()) {
      std::string wij = child(wk, ijkey);
      auto comma = ijkey.find(',');
      if (comma == std::string::npos) throw SpecError(wij, "expected a key of the form \"i,j\"");
      int i = index_from(trim(ijkey.substr(0, comma)), wij, n);
      int jj = index_from(trim(ijkey.substr(comma + 1)), wij, n);
      if (!given.emplace(std::tuple{k, i, jj}, std::pair{as_poly(value, wij, n), wij}).second)
        throw SpecError(wij, "duplicate entry");
    }
  }
  ConnectionSpec spec(n);
  for (const auto& [key, entry] : given) {
    auto [k, i, jj] = key;
    auto mirror = given.find({k, jj, i});
    if (mirror != given.end() && !(mirror->second.first == entry.first))
      throw SpecError(entry.second, "Christoffel symbols must be symmetric in the lower indices");
    spec.set_gamma(k, i, jj, entry.first);
    spec.set_gamma(k, jj, i, entry.first);
  }
  return spec;
}

ModuleConnectionSpec module_from_json(const In& j, const std::string& where, int n) {
  check_keys(j, where, {"rank", "omega"});
  int rank = as_int(require(j, "rank", where), child(where, "rank"), 1, 8);
  const In& omega = require(j, "omega", where);
  std::string wo = child(where, "omega");
  if (!omega.is_array() || omega.size() != static_cast<std::size_t>(rank))
    throw SpecError(wo, "expected " + std::to_string(rank) + " rows");
  ModuleConnectionSpec spec(rank, n);
  for (int b = 1; b <= rank; ++b) {
    const In& row = omega[static_cast<std::size_t>(b - 1)];
    std::string wr = child(wo, std::to_string(b - 1));
    if (!row.is_array() || row.size() != static_cast<std::size_t>(rank))
      throw SpecError(wr, "expected " + std::to_string(rank) + " entries");
    for (int a = 1; a <= rank; ++a) {
      const In& entry = row[static_cast<std::size_t>(a - 1)];
      std::string we = child(wr, std::to_string(a - 1));
      if (!entry.is_object()) throw SpecError(we, "expected an object keyed by form index");
      DgElement w(n, 0);
      for (const auto& [ikey, value] : entry.items()) {
        std::string wi = child(we, ikey);
        int i = index_from(ikey, wi, n);
        w.add_term(WedgeMask{1} << (i - 1), Word(), as_poly(value, wi, n));
      }
      spec.set_omega(b, a, w);
    }
  }
  return spec;
}

BasisRef ref_from_json(const In& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw SpecError(where, "expected [degree, index]");
  BasisRef r;
  r.degree = j[0].is_string() ? index_from(j[0].get<std::string>(), child(where, "0"), 64)
                              : as_int(j[0], child(where, "0"), 0, 64);
  r.index = as_int(j[1], child(where, "1"), 0, 1 << 20);
  return r;
}

Json ref_json(BasisRef r) { return Json::array({r.degree, r.index}); }

Json terms_json(const TensorPoly& t) {
  Json terms = Json::array();
  for (const auto& [w, c] : t.terms()) terms.push_back(Json{{"word", to_json(w)}, {"coeff", c.str()}});
  return terms;
}

Json terms_json(const DgElement& x) {
  Json terms = Json::array();
  for (const auto& [key, c] : x.terms())
    terms.push_back(Json{{"wedge", wedge_indices(key.wedge)}, {"word", to_json(key.word)}, {"coeff", c.str()}});
  return terms;
}

Json christoffel_json(const ConnectionSpec& spec) {
  Json out = Json::object();
  for (int k = 1; k <= spec.n(); ++k) {
    Json table = Json::object();
    for (int i = 1; i <= spec.n(); ++i)
      for (int j = 1; j <= spec.n(); ++j)
        if (!spec.gamma(k, i, j).is_zero()) table[std::to_string(i) + "," + std::to_string(j)] = spec.gamma(k, i, j).str();
    if (!table.empty()) out[std::to_string(k)] = table;
  }
  return out;
}

Json module_spec_json(const ModuleConnectionSpec& spec) {
  Json omega = Json::array();
  for (int b = 1; b <= spec.rank(); ++b) {
    Json row = Json::array();
    for (int a = 1; a <= spec.rank(); ++a) {
      Json entry = Json::object();
      for (const auto& [key, c] : spec.omega(b, a).terms()) entry[std::to_string(wedge_indices(key.wedge).front())] = c.str();
      row.push_back(entry);
    }
    omega.push_back(row);
  }
  return Json{{"rank", spec.rank()}, {"omega", omega}};
}

}  // namespace

ChartSpec parse_chart_spec(const std::string& text) {
  In j;
  try {
    j = In::parse(text);
  } catch (const In::parse_error& e) {
    throw SpecError(location(text, e.byte), "invalid JSON");
  }
  check_keys(j, "", {"format", "n", "truncation", "christoffel", "module", "ainfinity"});
  ChartSpec spec;
  if (j.contains("format")) as_int(j["format"], "/format", kFormat, kFormat);
  if (j.contains("n")) spec.n = as_int(j["n"], "/n", 1, kMaxVariables);
  if (j.contains("truncation")) spec.truncation = as_int(j["truncation"], "/truncation", 0, Word::kMaxLength - 1);
  if (spec.n) {
    spec.christoffel = ConnectionSpec(*spec.n);
    if (j.contains("christoffel")) spec.christoffel = christoffel_from_json(j["christoffel"], "/christoffel", *spec.n);
    if (j.contains("module")) spec.module = module_from_json(j["module"], "/module", *spec.n);
  } else {
    for (const char* key : {"christoffel", "module"})
      if (j.contains(key)) throw SpecError("/n", std::string("required by /") + key);
  }
  if (j.contains("ainfinity")) spec.ainfinity = ainfinity_from_json(j["ainfinity"], "/ainfinity");
  return spec;
}

Json chart_spec_json(const ChartSpec& spec) {
  Json out{{"format", kFormat}};
  if (spec.n) out["n"] = *spec.n;
  if (spec.truncation) out["truncation"] = *spec.truncation;
  if (spec.n) out["christoffel"] = christoffel_json(spec.christoffel);
  if (spec.module) out["module"] = module_spec_json(*spec.module);
  if (spec.ainfinity) out["ainfinity"] = to_json(*spec.ainfinity);
  return out;
}

MinimalAInfinity ainfinity_from_json(const In& j, const std::string& where) {
  if (j.is_object() && j.contains("preset")) {
    check_keys(j, where, {"preset", "n"});
    const In& preset = j["preset"];
    int n = as_int(require(j, "n", where), child(where, "n"), 1, 15);
    if (preset == "exterior") {
      if (n > 4) throw SpecError(child(where, "n"), "exterior preset supports at most 4 generators");
      return MinimalAInfinity::exterior(n);
    }
    if (preset == "curve") return MinimalAInfinity::curve(n);
    throw SpecError(child(where, "preset"), "expected \"exterior\" or \"curve\"");
  }
  check_keys(j, where, {"dims", "products"});
  const In& dims = require(j, "dims", where);
  std::string wd = child(where, "dims");
  if (!dims.is_array() || dims.empty()) throw SpecError(wd, "expected a nonempty array");
  std::vector<int> d;
  for (std::size_t r = 0; r < dims.size(); ++r) d.push_back(as_int(dims[r], child(wd, std::to_string(r)), 0, 64));
  if (d[0] != 1) throw SpecError(child(wd, "0"), "E^0 must be one-dimensional");
  MinimalAInfinity a(d);
  if (!j.contains("products")) return a;
  const In& products = j["products"];
  std::string wp = child(where, "products");
  if (!products.is_array()) throw SpecError(wp, "expected an array");
  for (std::size_t t = 0; t < products.size(); ++t) {
    const In& block = products[t];
    std::string wb = child(wp, std::to_string(t));
    check_keys(block, wb, {"k", "entries"});
    int k = as_int(require(block, "k", wb), child(wb, "k"), 2, 15);
    const In& entries = require(block, "entries", wb);
    std::string we = child(wb, "entries");
    if (!entries.is_array()) throw SpecError(we, "expected an array");
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const In& entry = entries[e];
      std::string wi = child(we, std::to_string(e));
      check_keys(entry, wi, {"in", "out", "coeff"});
      const In& in = require(entry, "in", wi);
      if (!in.is_array() || in.size() != static_cast<std::size_t>(k))
        throw SpecError(child(wi, "in"), "expected " + std::to_string(k) + " inputs");
      std::vector<BasisRef> refs;
      for (std::size_t p = 0; p < in.size(); ++p) refs.push_back(ref_from_json(in[p], child(child(wi, "in"), std::to_string(p))));
      BasisRef out = ref_from_json(require(entry, "out", wi), child(wi, "out"));
      Rational c = entry.contains("coeff") ? as_rational(entry["coeff"], child(wi, "coeff")) : Rational(1);
      try {
        a.add_product(refs, out, c);
      } catch (const std::exception& ex) {
        throw SpecError(wi, ex.what());
      }
    }
  }
  return a;
}

Json to_json(const MinimalAInfinity& a) {
  Json products = Json::array();
  for (int k = 2; k <= a.max_arity(); ++k) {
    Json entries = Json::array();
    for (const auto& [in, outs] : a.products(k))
      for (const auto& [out, c] : outs) {
        Json refs = Json::array();
        for (BasisRef r : in) refs.push_back(ref_json(r));
        entries.push_back(Json{{"in", refs}, {"out", ref_json(out)}, {"coeff", to_string(c)}});
      }
    if (!entries.empty()) products.push_back(Json{{"k", k}, {"entries", entries}});
  }
  return Json{{"dims", a.dims()}, {"products", products}};
}

Json to_json(const Word& w) { return w.letters(); }

Json to_json(const TensorPoly& t) {
  return Json{{"format", kFormat}, {"n", t.letters()}, {"truncation", t.truncation()}, {"terms", terms_json(t)}};
}

Json to_json(const DgElement& x) {
  return Json{{"format", kFormat}, {"n", x.letters()}, {"truncation", x.truncation()}, {"terms", terms_json(x)}};
}

TensorPoly tensor_from_json(const In& j, const std::string& where) {
  int n = as_int(require(j, "n", where), child(where, "n"), 1, kMaxVariables);
  int d = as_int(require(j, "truncation", where), child(where, "truncation"), 0, Word::kMaxLength);
  const In& terms = require(j, "terms", where);
  std::string wt = child(where, "terms");
  if (!terms.is_array()) throw SpecError(wt, "expected an array");
  TensorPoly t(n, d);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    std::string wi = child(wt, std::to_string(i));
    Word w = as_word(require(terms[i], "word", wi), child(wi, "word"), n);
    if (w.size() > d) throw SpecError(child(wi, "word"), "word longer than the truncation");
    t.add_term(w, as_poly(require(terms[i], "coeff", wi), child(wi, "coeff"), n));
  }
  return t;
}

DgElement dg_from_json(const In& j, const std::string& where) {
  int n = as_int(require(j, "n", where), child(where, "n"), 1, kMaxVariables);
  int d = as_int(require(j, "truncation", where), child(where, "truncation"), 0, Word::kMaxLength);
  const In& terms = require(j, "terms", where);
  std::string wt = child(where, "terms");
  if (!terms.is_array()) throw SpecError(wt, "expected an array");
  DgElement x(n, d);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    std::string wi = child(wt, std::to_string(i));
    const In& wedge = require(terms[i], "wedge", wi);
    if (!wedge.is_array()) throw SpecError(child(wi, "wedge"), "expected an array of form indices");
    std::vector<int> indices;
    for (std::size_t p = 0; p < wedge.size(); ++p) indices.push_back(as_int(wedge[p], child(child(wi, "wedge"), std::to_string(p)), 1, n));
    std::vector<int> sorted = indices;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != indices || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw SpecError(child(wi, "wedge"), "form indices must be strictly increasing");
    Word w = as_word(require(terms[i], "word", wi), child(wi, "word"), n);
    if (w.size() > d) throw SpecError(child(wi, "word"), "word longer than the truncation");
    x.add_term(wedge_from_indices(indices), w, as_poly(require(terms[i], "coeff", wi), child(wi, "coeff"), n));
  }
  return x;
}

std::string bracket_string(const Word& lyndon) {
  if (lyndon.size() == 1) return "e" + std::to_string(lyndon[0]);
  auto [u, v] = standard_factorization(lyndon);
  return "[" + bracket_string(u) + "," + bracket_string(v) + "]";
}

std::string leading_string(const PbwSeries& s) {
  std::string out;
  for (const auto& [factors, coeff] : s.entries)
    for (const auto& [y, c] : coeff.terms) {
      if (!y.is_one()) throw std::logic_error("leading term has a letter part");
      std::string product;
      for (const Word& f : factors) product += bracket_string(f);
      std::string cs = c.str();
      bool simple = c.terms().size() == 1;
      if (!out.empty()) {
        if (simple && cs[0] == '-') {
          out += " - ";
          cs = cs.substr(1);
        } else {
          out += " + ";
        }
      }
      if (cs == "1")
        out += product;
      else if (cs == "-1")
        out += "-" + product;
      else
        out += (simple ? cs : "(" + cs + ")") + "*" + product;
    }
  return out.empty() ? "0" : out;
}

Json to_json(const NCConnection& nc) {
  Json nabla = Json::array();
  for (int i = 1; i <= nc.truncation(); ++i)
    for (int k = 1; k <= nc.n(); ++k) nabla.push_back(Json{{"index", i}, {"generator", k}, {"terms", terms_json(nc.nabla(i, k))}});
  return Json{{"format", kFormat},
              {"kind", "nc_connection"},
              {"n", nc.n()},
              {"truncation", nc.truncation()},
              {"christoffel", christoffel_json(nc.spec())},
              {"nabla", nabla}};
}

Json to_json(const SquareZeroReport& r) {
  Json entries = Json::array();
  Json failures = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back(Json{{"generator", e.generator}, {"degree", e.degree}, {"zero", e.zero}});
    if (!e.zero) failures.push_back(Json{{"generator", e.generator}, {"degree", e.degree}, {"nonzero_terms", e.nonzero_terms}});
  }
  return Json{{"format", kFormat},
              {"kind", "square_zero_report"},
              {"ok", r.ok()},
              {"untracked_from", r.untracked_from},
              {"failures", failures},
              {"entries", entries}};
}

Json to_json(const ModuleNCConnection& mc) {
  Json nabla = Json::array();
  for (int i = 1; i <= mc.max_index(); ++i)
    for (int a = 1; a <= mc.rank(); ++a) {
      Json parts = Json::array();
      for (int b = 1; b <= mc.rank(); ++b) parts.push_back(terms_json(mc.nabla(i, a)[b]));
      nabla.push_back(Json{{"index", i}, {"section", a}, {"components", parts}});
    }
  return Json{{"format", kFormat},
              {"kind", "module_nc_connection"},
              {"n", mc.n()},
              {"truncation", mc.truncation()},
              {"rank", mc.rank()},
              {"module", module_spec_json(mc.spec())},
              {"nabla", nabla}};
}

Json to_json(const ModuleSquareZeroReport& r) {
  Json entries = Json::array();
  Json failures = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back(Json{{"section", e.section}, {"degree", e.degree}, {"zero", e.zero}});
    if (!e.zero) failures.push_back(Json{{"section", e.section}, {"degree", e.degree}, {"nonzero_terms", e.nonzero_terms}});
  }
  return Json{{"format", kFormat},
              {"kind", "module_square_zero_report"},
              {"ok", r.ok()},
              {"untracked_from", r.untracked_from},
              {"failures", failures},
              {"entries", entries}};
}

Json to_json(const GaugeTransform& phi) {
  Json images = Json::array();
  for (int k = 1; k <= phi.n(); ++k) images.push_back(Json{{"generator", k}, {"terms", terms_json(phi.image(k))}});
  return Json{{"format", kFormat},
              {"kind", "gauge_transform"},
              {"n", phi.n()},
              {"truncation", phi.truncation()},
              {"identity", phi.is_identity()},
              {"images", images}};
}

Json to_json(const AInfinityReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json entry{{"inputs", e.n}, {"tuples", e.tuples}, {"failures", e.failures}};
    if (e.failures != 0) {
      Json tuple = Json::array();
      for (BasisRef ref : e.first_failure) tuple.push_back(ref_json(ref));
      entry["first_failure"] = tuple;
    }
    entries.push_back(entry);
  }
  return Json{{"format", kFormat}, {"kind", "ainfinity_report"}, {"ok", r.ok()}, {"entries", entries}};
}

Json to_json(const KoszulDualPresentation& p) {
  Json relations = Json::array();
  for (std::size_t i = 0; i < p.relations.size(); ++i)
    relations.push_back(Json{{"source", ref_json(p.sources[i])}, {"terms", terms_json(p.relations[i])}});
  return Json{{"format", kFormat},
              {"kind", "koszul_dual"},
              {"letters", p.letters},
              {"truncation", p.truncation},
              {"relations", relations},
              {"relations_independent", p.relations_independent},
              {"quotient_dims", p.quotient_dims}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace nct::io
