#pragma once

#include <optional>
#include <string>
#include <vector>

namespace nct {

struct RunOptions {
  std::string command;  // thicken, verify, lift, mul, bracket, dims, module, gauge, koszul
  std::string spec_text;
  std::optional<std::string> target_text;  // second chart spec for gauge
  std::vector<std::string> args;           // polynomials for lift, mul, bracket
  std::optional<int> truncation;           // overrides the spec
  int dims_n = 2;
  int dims_max = 5;
};

struct RunResult {
  int exit_code = 0;      // 0 ok, 1 identity failure, 2 invalid input
  std::string artifact;   // canonical JSON, empty on invalid input
  std::string report;     // canonical JSON, empty when the command checks no identity
  std::string message;    // diagnostic for invalid input or failures
};

const std::vector<std::string>& commands();
RunResult run(const RunOptions& options);

}  // namespace nct
