#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sitelab/io.hpp"

namespace sitelab::scenario {

using io::Json;

struct Options {
  std::uint64_t seed = 0;      // used by sampling checks without their own "seed"
  std::optional<int> max_n;    // overrides step horizons of valuation checks
  bool concurrent = true;
};

struct Outcome {
  Json report;
  int exit_code = 0;                  // 0 all pass, 1 some check failed, 2 invalid input
  std::optional<std::string> output;  // the scenario's "output" path, resolved
};

/// Scenario document:
///   {"name", "inputs": {name: {"kind", "path" | "doc", ...}}, "checks": [{"op", ...}], "output"}
/// Every input is read and validated and every check's parameters are
/// checked before anything runs. Input or parameter errors give exit code 2
/// and a report with "status": "error" and a file:line:col message.
Outcome run(const io::Document& scenario, const Options& options, const std::string& base_dir = ".");
Outcome run_file(const std::string& path, const Options& options);

/// Names accepted in a check's "op" field.
std::vector<std::string> operations();

const std::vector<std::string>& builtin_demos();
/// Throws InputError for an unknown name.
const std::string& demo_text(const std::string& name);
Outcome run_demo(const std::string& name, const Options& options);

}  // namespace sitelab::scenario
