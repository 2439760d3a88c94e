// Command-line front end: model checking, product updates, translations,
// verification suites and scenario scripts over line-oriented text formats.

#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dtml/errors.hpp"
#include "dtml/generators.hpp"
#include "dtml/io.hpp"
#include "dtml/kdl.hpp"
#include "dtml/parser.hpp"
#include "dtml/scenario.hpp"
#include "dtml/suites.hpp"
#include "dtml/update.hpp"

namespace {

using namespace dtml;

// "name=path" or bare path (stem becomes the name).
std::pair<std::string, std::string> split_action_arg(const std::string& arg) {
  auto eq = arg.find('=');
  if (eq != std::string::npos) return {arg.substr(0, eq), arg.substr(eq + 1)};
  std::string name = arg;
  auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  auto dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return {name, arg};
}

int cmd_check(const std::string& model_path, const std::string& world,
              std::vector<std::string> formulas, const std::string& formula_file,
              const std::vector<std::string>& action_args, bool strict) {
  LoadedModel loaded = load_model_file(model_path);
  for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
  const Model& m = loaded.pointed.model;

  ActionRegistry registry;
  for (const auto& arg : action_args) {
    auto [name, path] = split_action_arg(arg);
    registry[name] = load_action_file(path, m.sig, &registry).action;
  }

  if (!formula_file.empty()) {
    std::istringstream in(read_file(formula_file));
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      formulas.push_back(line);
    }
  }
  if (formulas.empty()) throw Error("no formulas given (use --formula or --formula-file)");

  std::string at = world.empty() ? loaded.pointed.actual : world;
  if (!m.has_world(at)) throw Error("unknown world: " + at);

  EvalOptions opts;
  opts.strict_dynamic = strict;
  opts.registry = registry;
  Evaluator ev(opts);
  bool all_true = true;
  for (const auto& text : formulas) {
    Formula phi = parse_formula(text, m.sig, &registry);
    bool value = ev.satisfies(m, at, Valuation(), phi);
    all_true = all_true && value;
    std::cout << (value ? "true " : "false") << " | " << at << " | " << to_string(phi) << "\n";
  }
  return all_true ? 0 : 1;
}

int cmd_update(const std::string& model_path, const std::string& action_path,
               const std::string& event, const std::string& world, const std::string& out_path,
               bool self_test) {
  LoadedModel loaded = load_model_file(model_path);
  for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
  PointedModel pm = loaded.pointed;
  if (!world.empty()) {
    if (!pm.model.has_world(world)) throw Error("unknown world: " + world);
    pm.actual = world;
  }

  if (self_test) {
    auto id = identity_action();
    Evaluator ev;
    UpdateResult up = product_update_full(ev, pm.model, *id);
    std::map<std::string, std::string> map;
    for (const auto& w : pm.model.worlds) map[w] = up.world_names.at({w, "e"});
    auto issues = isomorphism_violations(pm.model, up.model, map);
    if (!issues.empty()) {
      for (const auto& i : issues) std::cerr << "self-test: " << i << "\n";
      return 1;
    }
    std::cout << "self-test ok: identity update is isomorphic to the input\n";
    return 0;
  }

  if (action_path.empty()) throw Error("no action file given");
  LoadedAction action = load_action_file(action_path, pm.model.sig);
  if (event.empty()) throw Error("no event given (use --event)");
  if (!action.action->has_event(event)) throw Error("unknown event: " + event);

  PointedAction pa{action.action, event};
  Evaluator ev;
  if (!applicable(ev, pm, pa)) {
    std::cerr << "not applicable: precondition " << to_string(action.action->precondition(event))
              << " fails at " << pm.actual << "\n";
    return 1;
  }
  PointedModel result = product_update_pointed(ev, pm, pa);
  std::string text = serialize_model(result);
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  std::cerr << "updated model: " << result.model.worlds.size() << " worlds, actual "
            << result.actual << "\n";
  return 0;
}

int cmd_translate(const std::string& hybrid_text, const std::string& kdl_text,
                  const std::string& pivot_arg, const std::vector<std::string>& nominal_list,
                  const std::string& updates_path, const std::vector<std::string>& constant_list,
                  const std::vector<std::string>& assign_list) {
  Pivot pivot = pivot_arg == "y" ? Pivot::y : Pivot::x;
  std::set<std::string> nominals(nominal_list.begin(), nominal_list.end());

  if (!hybrid_text.empty()) {
    HybridFormula phi = parse_hybrid_formula(hybrid_text, nominals);
    std::cout << to_string(translate(phi, pivot)) << "\n";
    return 0;
  }
  if (kdl_text.empty()) throw Error("use --hybrid-formula or --kdl-formula");
  if (updates_path.empty()) throw Error("--kdl-formula needs --updates");
  if (constant_list.empty()) throw Error("--kdl-formula needs --constants");
  UpdateDefs defs = load_updates_file(updates_path);
  HybridFormula phi = parse_kdl_formula(kdl_text, defs.features, nominals, &defs);
  std::map<std::string, std::string> nominal_constants;
  for (const auto& a : assign_list) {
    auto eq = a.find('=');
    if (eq == std::string::npos) throw Error("expected --assign nominal=constant");
    nominal_constants[a.substr(0, eq)] = a.substr(eq + 1);
  }
  Signature sig(constant_list, defs.features.all_prop_names());
  TranslationContext ctx(sig, defs.features, nominal_constants);
  std::cout << to_string(translate_dynamic(phi, pivot, ctx)) << "\n";
  return 0;
}

int cmd_verify(const std::string& suite, uint64_t seed, int iterations, int formulas,
               const std::string& fixtures) {
  SuiteOptions opts;
  opts.seed = seed;
  opts.iterations = iterations;
  opts.formulas_per_model = formulas;
  opts.fixtures_dir = fixtures;
  SuiteResult result;
  if (suite == "prop1")
    result = run_prop1_suite(opts);
  else if (suite == "prop2")
    result = run_prop2_suite(opts);
  else if (suite == "fn")
    result = run_fn_suite(opts);
  else if (suite == "s5")
    result = run_s5_suite(opts);
  else if (suite == "figures")
    result = run_figures_suite(opts);
  else
    throw Error("unknown suite: " + suite + " (expected prop1|prop2|fn|s5|figures)");
  std::cout << result.report();
  return result.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dtml - dynamic term-modal logic model checker"};
  app.require_subcommand(1);

  // check
  std::string model_path, world, formula_file;
  std::vector<std::string> formulas, action_args;
  bool strict = false;
  auto* check = app.add_subcommand("check", "evaluate formulas on a model");
  check->add_option("model", model_path, "model file")->required();
  check->add_option("--world", world, "world to evaluate at (default: actual)");
  check->add_option("--formula", formulas, "formula text (repeatable)");
  check->add_option("--formula-file", formula_file, "file with one formula per line");
  check->add_option("--action", action_args, "action model file, optionally name=path");
  check->add_flag("--strict-dynamic", strict,
                  "error on dynamic boxes with failing preconditions");

  // update
  std::string action_path, event, out_path;
  bool self_test = false;
  auto* update = app.add_subcommand("update", "apply a pointed action model");
  update->add_option("model", model_path, "model file")->required();
  update->add_option("action", action_path, "action model file");
  update->add_option("--event", event, "actual event");
  update->add_option("--world", world, "world to update at (default: actual)");
  update->add_option("--out", out_path, "write the updated model here");
  update->add_flag("--self-test", self_test, "check the identity update is an isomorphism");

  // translate
  std::string hybrid_text, kdl_text, pivot = "x", updates_path;
  std::vector<std::string> nominal_list, constant_list, assign_list;
  auto* translate_cmd = app.add_subcommand("translate", "translate hybrid formulas");
  translate_cmd->add_option("--hybrid-formula", hybrid_text, "static hybrid formula");
  translate_cmd->add_option("--kdl-formula", kdl_text, "feature-model formula with updates");
  translate_cmd->add_option("--pivot", pivot, "pivot variable (x or y)")
      ->check(CLI::IsMember({"x", "y"}));
  translate_cmd->add_option("--nominals", nominal_list, "identifiers treated as nominals");
  translate_cmd->add_option("--updates", updates_path, "updates file");
  translate_cmd->add_option("--constants", constant_list, "signature constants for grounding");
  translate_cmd->add_option("--assign", assign_list, "nominal=constant grounding (repeatable)");

  // verify
  std::string suite, fixtures = "fixtures";
  uint64_t seed = SuiteOptions().seed;
  int iterations = 0, suite_formulas = 0;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite, "prop1|prop2|fn|s5|figures")->required();
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--iterations", iterations, "number of random models");
  verify->add_option("--formulas", suite_formulas, "formulas per model");
  verify->add_option("--fixtures", fixtures, "fixtures directory (figures suite)");

  // scenario
  std::string scenario_path;
  auto* scenario = app.add_subcommand("scenario", "run a scenario script");
  scenario->add_option("file", scenario_path, "scenario file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed())
      return cmd_check(model_path, world, formulas, formula_file, action_args, strict);
    if (update->parsed())
      return cmd_update(model_path, action_path, event, world, out_path, self_test);
    if (translate_cmd->parsed())
      return cmd_translate(hybrid_text, kdl_text, pivot, nominal_list, updates_path,
                           constant_list, assign_list);
    if (verify->parsed())
      return cmd_verify(suite, seed, iterations, suite_formulas, fixtures);
    if (scenario->parsed()) {
      ScenarioOutcome outcome = run_scenario_file(scenario_path);
      std::cout << outcome.transcript;
      return outcome.exit_code;
    }
  } catch (const dtml::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
