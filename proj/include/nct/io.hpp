#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "nct/fedosov.hpp"
#include "nct/koszul.hpp"
#include "nct/ncmodule.hpp"

namespace nct::io {

using Json = nlohmann::ordered_json;

inline constexpr int kFormat = 1;

/// Malformed input; `where` is a JSON pointer or a byte offset.
class SpecError : public std::runtime_error {
 public:
  SpecError(const std::string& where, const std::string& message)
      : std::runtime_error(where + ": " + message), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

struct ChartSpec {
  std::optional<int> n;
  std::optional<int> truncation;
  ConnectionSpec christoffel;
  std::optional<ModuleConnectionSpec> module;
  std::optional<MinimalAInfinity> ainfinity;
};

ChartSpec parse_chart_spec(const std::string& text);
Json chart_spec_json(const ChartSpec& spec);

MinimalAInfinity ainfinity_from_json(const nlohmann::json& j, const std::string& where = "");
Json to_json(const MinimalAInfinity& a);

Json to_json(const Word& w);
Json to_json(const TensorPoly& t);
Json to_json(const DgElement& x);
TensorPoly tensor_from_json(const nlohmann::json& j, const std::string& where = "");
DgElement dg_from_json(const nlohmann::json& j, const std::string& where = "");

/// Standard bracketing of a Lyndon word, e.g. "[e1,[e1,e2]]".
std::string bracket_string(const Word& lyndon);
/// Bracket-basis rendering of a leading term with no letter part.
std::string leading_string(const PbwSeries& s);

Json to_json(const NCConnection& nc);
Json to_json(const SquareZeroReport& r);
Json to_json(const ModuleNCConnection& mc);
Json to_json(const ModuleSquareZeroReport& r);
Json to_json(const GaugeTransform& phi);
Json to_json(const AInfinityReport& r);
Json to_json(const KoszulDualPresentation& p);

/// Canonical text: two-space indentation and a trailing newline.
std::string dump(const Json& j);

}  // namespace nct::io
