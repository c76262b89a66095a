#include "nct/pipeline.hpp"

#include <algorithm>

#include "nct/io.hpp"

namespace nct {

namespace {

using io::Json;
using io::SpecError;

struct Chart {
  io::ChartSpec spec;
  int n = 0;
  int d = 0;
};

Chart load_chart(const std::string& text, const std::optional<int>& override, const std::string& label) {
  Chart c;
  try {
    c.spec = io::parse_chart_spec(text);
  } catch (const SpecError& e) {
    throw SpecError(label + " " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
  }
  if (!c.spec.n) throw SpecError(label + " /n", "missing field");
  c.n = *c.spec.n;
  if (override)
    c.d = *override;
  else if (c.spec.truncation)
    c.d = *c.spec.truncation;
  else
    throw SpecError(label + " /truncation", "missing field and no --truncation given");
  if (c.d < 2 || c.d > Word::kMaxLength - 1) throw SpecError(label + " /truncation", "truncation must lie in 2..14");
  return c;
}

Poly poly_arg(const RunOptions& o, std::size_t i, int n) {
  if (i >= o.args.size()) throw SpecError("argument " + std::to_string(i + 1), "missing polynomial");
  try {
    return Poly::parse(o.args[i], n);
  } catch (const std::invalid_argument& e) {
    throw SpecError("argument " + std::to_string(i + 1), e.what());
  }
}

Json closure_report(const FlatSection& s, int d) {
  bool ok = s.witness.vanishes_through(d - 1);
  return Json{{"format", io::kFormat},
              {"kind", "closure_report"},
              {"ok", ok},
              {"checked_through", d - 1},
              {"witness_terms", s.witness.truncated(d - 1).terms().size()}};
}

Json flat_json(const FlatSection& s, const std::vector<std::string>& inputs) {
  Json out = io::to_json(s.value);
  Json j{{"format", io::kFormat}, {"kind", "flat_section"}, {"inputs", inputs}};
  for (auto& [key, value] : out.items())
    if (key != "format") j[key] = value;
  return j;
}

// df (x) dg as sum_ij (d_i f)(d_j g) e_i e_j.
TensorPoly differential_product(const Poly& f, const Poly& g, int n, int d) {
  TensorPoly t(n, d);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) t.add_term(Word{i, j}, f.partial(i) * g.partial(j));
  return t;
}

RunResult finish(const Json& artifact, const Json& report) {
  RunResult r;
  r.artifact = io::dump(artifact);
  r.report = io::dump(report);
  r.exit_code = report.at("ok").get<bool>() ? 0 : 1;
  if (r.exit_code != 0) r.message = "identity check failed; see report";
  return r;
}

RunResult thicken(const RunOptions& o, bool report_only) {
  Chart c = load_chart(o.spec_text, o.truncation, "spec");
  NCConnection nc = build_nc_connection(c.spec.christoffel, c.d);
  Json report = io::to_json(verify_square_zero(nc));
  return finish(report_only ? report : io::to_json(nc), report);
}

RunResult lift(const RunOptions& o) {
  Chart c = load_chart(o.spec_text, o.truncation, "spec");
  Poly f = poly_arg(o, 0, c.n);
  NCConnection nc = build_nc_connection(c.spec.christoffel, c.d);
  FlatSection s = sigma_lift(nc, f);
  return finish(flat_json(s, {f.str()}), closure_report(s, c.d));
}

RunResult mul(const RunOptions& o) {
  Chart c = load_chart(o.spec_text, o.truncation, "spec");
  Poly f = poly_arg(o, 0, c.n), g = poly_arg(o, 1, c.n);
  NCConnection nc = build_nc_connection(c.spec.christoffel, c.d);
  FlatSection sf = sigma_lift(nc, f), sg = sigma_lift(nc, g);
  FlatSection prod = mul_flat(nc, sf, sg);
  TensorPoly law = prod.value - sigma_lift(nc, f * g).value -
                   (differential_product(f, g, c.n, c.d) - differential_product(g, f, c.n, c.d)) * Rational(1, 2);
  bool law_ok = law.truncated(2).is_zero();
  Json report = closure_report(prod, c.d);
  report["kind"] = "product_report";
  report["commutator_law"] = law_ok;
  report["ok"] = report["ok"].get<bool>() && law_ok;
  return finish(flat_json(prod, {f.str(), g.str()}), report);
}

RunResult bracket(const RunOptions& o) {
  Chart c = load_chart(o.spec_text, o.truncation, "spec");
  Poly f = poly_arg(o, 0, c.n), g = poly_arg(o, 1, c.n);
  NCConnection nc = build_nc_connection(c.spec.christoffel, c.d);
  FlatSection sf = sigma_lift(nc, f), sg = sigma_lift(nc, g);
  FlatSection br = flat_section(nc, commutator(sf.value, sg.value));
  Json artifact{{"format", io::kFormat}, {"kind", "leading_term"}, {"inputs", {f.str(), g.str()}}};
  if (br.value.is_zero()) {
    artifact["degree"] = -1;
    artifact["leading"] = "0";
    artifact["terms"] = Json::array();
  } else {
    LeadingTerm t = leading_term(br);
    artifact["degree"] = t.degree;
    artifact["leading"] = t.degree == 0 ? t.component.terms().begin()->second.str() : io::leading_string(t.pbw);
    artifact["terms"] = io::to_json(t.component)["terms"];
  }
  return finish(artifact, closure_report(br, c.d));
}

RunResult dims(const RunOptions& o) {
  if (o.dims_n < 1 || o.dims_n > kMaxVariables) throw SpecError("--n", "expected 1.." + std::to_string(kMaxVariables));
  if (o.dims_max < 0 || o.dims_max > 8) throw SpecError("--max", "expected 0..8");
  NCConnection nc = build_nc_connection(ConnectionSpec::flat(o.dims_n), std::max(2, o.dims_max + 1));
  RunResult r;
  r.artifact = io::dump(Json{{"format", io::kFormat},
                             {"kind", "leading_dimensions"},
                             {"n", o.dims_n},
                             {"max", o.dims_max},
                             {"dims", commutator_leading_dimensions(nc, o.dims_max)}});
  return r;
}

RunResult module(const RunOptions& o) {
  Chart c = load_chart(o.spec_text, o.truncation, "spec");
  if (!c.spec.module) throw SpecError("spec /module", "missing field");
  NCConnection nc = build_nc_connection(c.spec.christoffel, c.d);
  ModuleNCConnection mc = build_module_connection(nc, *c.spec.module);
  return finish(io::to_json(mc), io::to_json(verify_module_square_zero(mc)));
}

RunResult gauge(const RunOptions& o) {
  if (!o.target_text) throw SpecError("--target", "missing target chart spec");
  Chart a = load_chart(o.spec_text, o.truncation, "spec");
  Chart b = load_chart(*o.target_text, o.truncation ? o.truncation : std::optional<int>(a.d), "target");
  if (a.n != b.n) throw SpecError("target /n", "charts have different dimensions");
  if (a.d != b.d) throw SpecError("target /truncation", "charts have different truncations");
  NCConnection ca = build_nc_connection(a.spec.christoffel, a.d);
  NCConnection cb = build_nc_connection(b.spec.christoffel, b.d);
  GaugeTransform phi = find_gauge(ca, cb);
  std::vector<int> bad = disagreement(conjugate(ca, phi), cb, a.d - 1);
  Json report{{"format", io::kFormat},
              {"kind", "gauge_report"},
              {"ok", bad.empty()},
              {"checked_through", a.d - 1},
              {"disagreement", bad}};
  return finish(io::to_json(phi), report);
}

RunResult koszul(const RunOptions& o) {
  io::ChartSpec spec;
  try {
    spec = io::parse_chart_spec(o.spec_text);
  } catch (const SpecError& e) {
    throw SpecError("spec " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
  }
  if (!spec.ainfinity) throw SpecError("spec /ainfinity", "missing field");
  int d = o.truncation ? *o.truncation : spec.truncation.value_or(4);
  if (d < 1 || d > Word::kMaxLength - 1) throw SpecError("spec /truncation", "truncation must lie in 1..14");
  const MinimalAInfinity& a = *spec.ainfinity;
  if (a.top_degree() < 1 || a.dims()[1] == 0) throw SpecError("spec /ainfinity/dims", "E^1 must be nonzero");
  AInfinityReport validation = validate_ainfinity(a);
  Json report = io::to_json(validation);
  if (!validation.ok()) {
    RunResult r;
    r.exit_code = 1;
    r.report = io::dump(report);
    r.artifact = r.report;
    r.message = "A-infinity identities fail; see report";
    return r;
  }
  bool square_zero = bar_dual_square_defects(bar_dual(a), d + 1).empty();
  report["bar_dual_square_zero"] = square_zero;
  report["ok"] = square_zero;
  return finish(io::to_json(relation_ideal(a, d)), report);
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> kCommands{"thicken", "verify", "lift", "mul", "bracket",
                                                  "dims",    "module", "gauge", "koszul"};
  return kCommands;
}

RunResult run(const RunOptions& o) {
  try {
    if (o.command == "thicken") return thicken(o, false);
    if (o.command == "verify") return thicken(o, true);
    if (o.command == "lift") return lift(o);
    if (o.command == "mul") return mul(o);
    if (o.command == "bracket") return bracket(o);
    if (o.command == "dims") return dims(o);
    if (o.command == "module") return module(o);
    if (o.command == "gauge") return gauge(o);
    if (o.command == "koszul") return koszul(o);
    throw SpecError("command", "unknown command \"" + o.command + "\"");
  } catch (const SpecError& e) {
    return {2, "", "", e.what()};
  } catch (const std::invalid_argument& e) {
    return {2, "", "", std::string("invalid input: ") + e.what()};
  } catch (const std::logic_error& e) {
    return {1, "", "", std::string("identity check failed: ") + e.what()};
  }
}

}  // namespace nct
