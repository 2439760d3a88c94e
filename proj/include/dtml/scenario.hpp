#pragma once

#include <string>

namespace dtml {

// Executes a scenario script: loading named models and action models,
// threading pointed updates, and checking assertions. Exit code 0 when every
// step passes, 1 when an assertion or expectation fails, 2 on errors.
struct ScenarioOutcome {
  int exit_code = 0;
  std::string transcript;
};

ScenarioOutcome run_scenario_text(const std::string& text, const std::string& base_dir);
ScenarioOutcome run_scenario_file(const std::string& path);

}  // namespace dtml
