#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "minins/simulation.hpp"

namespace minins {

/// One line of a golden `.expected` file:
///
///   key=value      exact string match
///   key=[lo,hi]    numeric value within the closed band
struct Expectation {
  std::string key;
  std::optional<std::string> exact;
  double lo = 0;
  double hi = 0;
};

// `#` comments and blank lines are skipped. Throws ParseError.
std::vector<Expectation> parse_expectations(std::string_view text);

struct ScenarioVerdict {
  std::string name;
  bool pass = false;
  std::vector<std::string> mismatches;
};

ScenarioVerdict check_result(const std::string& name, const RunResult& result,
                             const std::vector<Expectation>& expectations);

// Runs one scenario text (digest only, no trace file) and checks it.
ScenarioVerdict validate_scenario(const std::string& name, std::string_view scenario_text,
                                  std::string_view expected_text);

// Every `<name>.scn` with a sibling `<name>.expected` in `dir`, run
// concurrently, reported in name order.
std::vector<ScenarioVerdict> validate_directory(const std::filesystem::path& dir);

// Directory holding the bundled golden scenarios.
std::filesystem::path default_golden_dir();

}  // namespace minins
