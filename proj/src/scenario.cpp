#include "dtml/scenario.hpp"

#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "dtml/errors.hpp"
#include "dtml/io.hpp"
#include "dtml/parser.hpp"
#include "dtml/update.hpp"

namespace dtml {

namespace {

struct Line {
  std::string text;
  int number;
};

std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    number++;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    size_t end = line.find_last_not_of(" \t\r");
    out.push_back({line.substr(begin, end - begin + 1), number});
  }
  return out;
}

std::vector<std::string> tokens_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

struct Runner {
  std::string base_dir;
  std::ostringstream transcript;
  std::map<std::string, PointedModel> models;
  ActionRegistry actions;
  std::optional<Signature> sig;
  bool failed = false;

  std::string resolve(const std::string& path) const {
    if (!path.empty() && path[0] == '/') return path;
    return base_dir.empty() ? path : base_dir + "/" + path;
  }

  const PointedModel& model(const Line& line, const std::string& name) const {
    auto it = models.find(name);
    if (it == models.end())
      throw ParseError("unknown model: " + name, line.number, 1);
    return it->second;
  }

  // Runs one step; throws on errors, returns false on a failed assertion.
  bool step(const Line& line, const std::string& text) {
    auto head_tail = [&]() -> std::pair<std::string, std::string> {
      auto pos = text.find(':');
      if (pos == std::string::npos)
        throw ParseError("expected ':' in step", line.number, 1);
      return {text.substr(0, pos), text.substr(pos + 1)};
    };
    auto toks = tokens_of(text);
    if (toks.empty()) return true;
    const std::string& kw = toks[0];

    if (kw == "model") {
      if (toks.size() != 4 || toks[2] != "=")
        throw ParseError("expected: model <name> = <path>", line.number, 1);
      LoadedModel loaded = load_model_file(resolve(toks[3]));
      if (sig && !(loaded.pointed.model.sig == *sig))
        throw ModelError("model " + toks[1] + " uses a different signature");
      if (!sig) sig = loaded.pointed.model.sig;
      for (const auto& w : loaded.warnings) transcript << "  warning: " << w << "\n";
      transcript << "load model " << toks[1] << " ("
                 << loaded.pointed.model.worlds.size() << " worlds, actual "
                 << loaded.pointed.actual << ")\n";
      models[toks[1]] = std::move(loaded.pointed);
      return true;
    }
    if (kw == "action") {
      if (toks.size() != 4 || toks[2] != "=")
        throw ParseError("expected: action <name> = <path>", line.number, 1);
      if (!sig) throw ParseError("action loaded before any model", line.number, 1);
      LoadedAction loaded = load_action_file(resolve(toks[3]), *sig, &actions);
      for (const auto& w : loaded.warnings) transcript << "  warning: " << w << "\n";
      transcript << "load action " << toks[1] << " (" << loaded.action->events.size()
                 << " events)\n";
      actions[toks[1]] = std::move(loaded.action);
      return true;
    }
    if (kw == "update") {
      // update <name> = <model> * <action> : <event> [@ <world>]
      auto [head, tail] = head_tail();
      auto h = tokens_of(head);
      if (h.size() != 6 || h[2] != "=" || h[4] != "*")
        throw ParseError("expected: update <name> = <model> * <action> : <event> [@ <world>]",
                         line.number, 1);
      auto t = tokens_of(tail);
      if (t.size() != 1 && (t.size() != 3 || t[1] != "@"))
        throw ParseError("expected event and optional '@ <world>'", line.number, 1);
      PointedModel source = model(line, h[3]);
      if (t.size() == 3) source.actual = t[2];
      if (!source.model.has_world(source.actual))
        throw ModelError("unknown world: " + source.actual);
      auto ait = actions.find(h[5]);
      if (ait == actions.end())
        throw ParseError("unknown action: " + h[5], line.number, 1);
      Evaluator ev;
      PointedModel result = product_update_pointed(ev, source, {ait->second, t[0]});
      transcript << "update " << h[1] << " = " << h[3] << " * " << h[5] << " : " << t[0]
                 << " -> " << result.model.worlds.size() << " worlds, actual " << result.actual
                 << "\n";
      models[h[1]] = std::move(result);
      return true;
    }
    if (kw == "assert" || kw == "refute") {
      // assert <model> [@ <world>] : <formula>
      auto [head, tail] = head_tail();
      auto h = tokens_of(head);
      if (h.size() != 2 && (h.size() != 4 || h[2] != "@"))
        throw ParseError("expected: " + kw + " <model> [@ <world>] : <formula>", line.number, 1);
      const PointedModel& pm = model(line, h[1]);
      std::string world = h.size() == 4 ? h[3] : pm.actual;
      if (!pm.model.has_world(world)) throw ModelError("unknown world: " + world);
      Formula phi = parse_formula(tail, pm.model.sig, &actions);
      Evaluator ev;
      bool value = ev.satisfies(pm.model, world, Valuation(), phi);
      bool expected = kw == "assert";
      bool pass = value == expected;
      transcript << kw << " " << h[1] << " @ " << world << " : " << to_string(phi) << " -> "
                 << (value ? "true" : "false") << (pass ? " [pass]" : " [FAIL]") << "\n";
      return pass;
    }
    if (kw == "expect-worlds") {
      if (toks.size() != 4 || toks[2] != "=")
        throw ParseError("expected: expect-worlds <model> = <count>", line.number, 1);
      const PointedModel& pm = model(line, toks[1]);
      size_t want = static_cast<size_t>(std::stoul(toks[3]));
      bool pass = pm.model.worlds.size() == want;
      transcript << "expect-worlds " << toks[1] << " = " << toks[3] << " -> "
                 << pm.model.worlds.size() << (pass ? " [pass]" : " [FAIL]") << "\n";
      return pass;
    }
    if (kw == "expect-error") {
      std::string rest = text.substr(text.find("expect-error") + 12);
      size_t begin = rest.find_first_not_of(" \t");
      if (begin == std::string::npos)
        throw ParseError("expected a step after expect-error", line.number, 1);
      try {
        step(line, rest.substr(begin));
      } catch (const Error& e) {
        transcript << "expect-error: got \"" << e.what() << "\" [pass]\n";
        return true;
      }
      transcript << "expect-error: step succeeded [FAIL]\n";
      return false;
    }
    throw ParseError("unknown step: " + kw, line.number, 1);
  }
};

}  // namespace

ScenarioOutcome run_scenario_text(const std::string& text, const std::string& base_dir) {
  Runner runner;
  runner.base_dir = base_dir;
  ScenarioOutcome out;
  for (const Line& line : split_lines(text)) {
    try {
      if (!runner.step(line, line.text)) runner.failed = true;
    } catch (const Error& e) {
      runner.transcript << "error at line " << line.number << ": " << e.what() << "\n";
      out.exit_code = 2;
      out.transcript = runner.transcript.str();
      return out;
    }
  }
  out.exit_code = runner.failed ? 1 : 0;
  out.transcript = runner.transcript.str();
  return out;
}

ScenarioOutcome run_scenario_file(const std::string& path) {
  std::string dir;
  auto slash = path.find_last_of('/');
  if (slash != std::string::npos) dir = path.substr(0, slash);
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    return {2, std::string("error: ") + e.what() + "\n"};
  }
  return run_scenario_text(text, dir);
}

}  // namespace dtml
