#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dtml {

struct SuiteOptions {
  uint64_t seed = 20260801;
  int iterations = 0;          // 0 = suite default
  int formulas_per_model = 0;  // 0 = suite default
  std::string fixtures_dir;    // figures suite only
};

struct SuiteResult {
  std::string name;
  uint64_t seed = 0;
  long checks = 0;
  std::vector<std::string> failures;

  bool pass() const { return failures.empty(); }
  std::string report() const;
};

// Randomized differential check of the hybrid-to-term-modal translation on
// model images.
SuiteResult run_prop1_suite(const SuiteOptions& opts);

// Randomized check that compiled action models emulate feature-model
// dynamics: canonical bounded morphisms plus satisfaction agreement.
SuiteResult run_prop2_suite(const SuiteOptions& opts);

// The four static axioms hold on every image; targeted mutations falsify
// exactly the matching axiom.
SuiteResult run_fn_suite(const SuiteOptions& opts);

// Knowledge is truthful, positively and negatively introspective on every
// partition-shaped model.
SuiteResult run_s5_suite(const SuiteOptions& opts);

// Replays every scripted satisfaction claim from the shipped fixtures.
SuiteResult run_figures_suite(const SuiteOptions& opts);

struct FigureCheck {
  int criterion;  // 1..6
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<FigureCheck> figure_checks(const std::string& fixtures_dir);

}  // namespace dtml
