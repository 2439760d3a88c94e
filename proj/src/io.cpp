#include "dtml/io.hpp"

#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "dtml/errors.hpp"
#include "dtml/parser.hpp"

namespace dtml {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
}

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

[[noreturn]] void fail(const Line& line, const std::string& msg) {
  throw ParseError(msg, line.number, 1);
}

// Splits "head : tail" at the first colon; tail may be empty.
std::pair<std::string, std::optional<std::string>> split_colon(const std::string& text) {
  auto pos = text.find(':');
  if (pos == std::string::npos) return {text, std::nullopt};
  return {text.substr(0, pos), text.substr(pos + 1)};
}

std::string keyword_of(const std::string& text) {
  auto ws = text.find_first_of(" \t");
  return ws == std::string::npos ? text : text.substr(0, ws);
}

std::string rest_of(const std::string& text) {
  auto ws = text.find_first_of(" \t");
  if (ws == std::string::npos) return "";
  auto begin = text.find_first_not_of(" \t", ws);
  return begin == std::string::npos ? "" : text.substr(begin);
}

std::vector<std::vector<std::string>> parse_cells(const Line& line, const std::string& text) {
  std::vector<std::vector<std::string>> cells;
  std::istringstream split(text);
  std::string part;
  while (std::getline(split, part, '|')) {
    auto toks = tokens_of(part);
    if (toks.empty()) fail(line, "empty partition cell");
    cells.push_back(toks);
  }
  if (cells.empty()) fail(line, "expected at least one cell");
  return cells;
}

// Reflexive-symmetric-transitive closure of edge pairs into cells.
std::vector<std::vector<std::string>> close_edges(
    const std::vector<std::string>& worlds,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::map<std::string, std::string> parent;
  for (const auto& w : worlds) parent[w] = w;
  std::function<std::string(const std::string&)> find = [&](const std::string& w) {
    return parent.at(w) == w ? w : parent[w] = find(parent.at(w));
  };
  for (const auto& [a, b] : pairs) parent[find(a)] = find(b);
  std::map<std::string, std::vector<std::string>> by_root;
  for (const auto& w : worlds) by_root[find(w)].push_back(w);
  std::vector<std::vector<std::string>> cells;
  std::set<std::string> seen;
  for (const auto& w : worlds) {
    std::string root = find(w);
    if (seen.insert(root).second) cells.push_back(by_root.at(root));
  }
  return cells;
}

}  // namespace

// ---------------------------------------------------------------------------
// Model files.

LoadedModel parse_model_text(const std::string& text) {
  LoadedModel out;
  Model& m = out.pointed.model;
  std::vector<std::string> constants, predicates;
  std::map<std::string, std::string> default_constants;
  std::map<std::string, std::set<std::string>> default_preds;
  std::set<std::pair<std::string, std::string>> default_net;

  struct WorldSection {
    std::map<std::string, std::string> constants;
    std::map<std::string, std::set<std::string>> preds;
    std::optional<std::set<std::pair<std::string, std::string>>> net;
  };
  std::map<std::string, WorldSection> sections;
  std::string current_world;
  bool in_world = false;

  for (const Line& line : split_lines(text)) {
    std::string kw = keyword_of(line.text);
    auto [head, tail] = split_colon(line.text);
    auto head_toks = tokens_of(head);

    if (kw == "constants") {
      constants = tokens_of(rest_of(line.text));
    } else if (kw == "predicates") {
      predicates = tokens_of(rest_of(line.text));
    } else if (kw == "agents") {
      m.agents = tokens_of(rest_of(line.text));
    } else if (kw == "worlds") {
      m.worlds = tokens_of(rest_of(line.text));
    } else if (kw == "actual") {
      auto toks = tokens_of(rest_of(line.text));
      if (toks.size() != 1) fail(line, "expected one actual world");
      out.pointed.actual = toks[0];
    } else if (kw == "partition") {
      if (head_toks.size() != 2 || !tail) fail(line, "expected: partition <agent> : cells");
      if (m.epistemic.count(head_toks[1]))
        fail(line, "agent " + head_toks[1] + " already has a partition");
      m.epistemic[head_toks[1]] = parse_cells(line, *tail);
    } else if (kw == "edges") {
      if (head_toks.size() != 2 || !tail) fail(line, "expected: edges <agent> : w v | ...");
      if (m.epistemic.count(head_toks[1]))
        fail(line, "agent " + head_toks[1] + " already has a partition");
      std::vector<std::pair<std::string, std::string>> pairs;
      std::istringstream split(*tail);
      std::string part;
      while (std::getline(split, part, '|')) {
        auto toks = tokens_of(part);
        if (toks.empty()) continue;
        if (toks.size() != 2) fail(line, "expected world pairs separated by '|'");
        pairs.emplace_back(toks[0], toks[1]);
      }
      m.epistemic[head_toks[1]] = close_edges(m.worlds, pairs);
      out.warnings.push_back("agent " + head_toks[1] +
                             ": edges closed to an equivalence relation");
    } else if (kw == "world") {
      auto toks = tokens_of(rest_of(line.text));
      if (toks.size() != 1) fail(line, "expected: world <name>");
      current_world = toks[0];
      in_world = true;
      sections[current_world];
    } else if (kw == "const") {
      auto toks = tokens_of(rest_of(line.text));
      if (toks.size() != 3 || toks[1] != "=") fail(line, "expected: const <c> = <agent>");
      if (in_world)
        sections[current_world].constants[toks[0]] = toks[2];
      else
        default_constants[toks[0]] = toks[2];
    } else if (kw == "pred") {
      if (head_toks.size() != 2 || !tail) fail(line, "expected: pred <P> : agents");
      auto agents = tokens_of(*tail);
      std::set<std::string> ext(agents.begin(), agents.end());
      if (in_world)
        sections[current_world].preds[head_toks[1]] = std::move(ext);
      else
        default_preds[head_toks[1]] = std::move(ext);
    } else if (kw == "net") {
      auto toks = tokens_of(rest_of(line.text));
      if (toks.size() != 2) fail(line, "expected: net <a> <b>");
      if (in_world) {
        auto& sec = sections[current_world];
        if (!sec.net) sec.net.emplace();
        sec.net->insert({toks[0], toks[1]});
      } else {
        default_net.insert({toks[0], toks[1]});
      }
    } else {
      fail(line, "unknown directive: " + kw);
    }
  }

  m.sig = Signature(constants, predicates);
  for (const auto& [w, sec] : sections)
    if (!m.has_world(w)) throw ModelError("world section for undeclared world " + w);

  for (const auto& w : m.worlds) {
    WorldInterp wi;
    wi.constants = default_constants;
    auto it = sections.find(w);
    if (it != sections.end())
      for (const auto& [c, a] : it->second.constants) wi.constants[c] = a;
    for (const auto& p : predicates) {
      std::set<std::string> ext;
      if (auto dit = default_preds.find(p); dit != default_preds.end()) ext = dit->second;
      if (it != sections.end())
        if (auto pit = it->second.preds.find(p); pit != it->second.preds.end())
          ext = pit->second;
      wi.predicates[p] = std::move(ext);
    }
    wi.network = default_net;
    if (it != sections.end() && it->second.net) wi.network = *it->second.net;
    m.interp[w] = std::move(wi);
  }

  if (out.pointed.actual.empty()) throw ModelError("model file declares no actual world");
  if (!m.has_world(out.pointed.actual))
    throw ModelError("actual world " + out.pointed.actual + " is not a world");
  auto issues = validate_model(m);
  if (!issues.empty()) {
    std::string msg = "invalid model: " + issues.front();
    if (issues.size() > 1) msg += " (+" + std::to_string(issues.size() - 1) + " more)";
    throw ModelError(msg);
  }
  return out;
}

LoadedModel load_model_file(const std::string& path) {
  try {
    return parse_model_text(read_file(path));
  } catch (ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0, 0);
  }
}

std::string serialize_model(const PointedModel& pm) {
  const Model& m = pm.model;
  std::ostringstream out;
  auto words = [&](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += " " + x;
    return s;
  };
  out << "constants" << words(m.sig.constants()) << "\n";
  out << "predicates" << words(m.sig.predicates()) << "\n";
  out << "agents" << words(m.agents) << "\n";
  out << "worlds" << words(m.worlds) << "\n";
  out << "actual " << pm.actual << "\n";
  for (const auto& a : m.agents) {
    out << "partition " << a << " :";
    const auto& cells = m.epistemic.at(a);
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out << " |";
      out << words(cells[i]);
    }
    out << "\n";
  }
  for (const auto& w : m.worlds) {
    out << "world " << w << "\n";
    const WorldInterp& wi = m.interp.at(w);
    for (const auto& c : m.sig.constants())
      out << "  const " << c << " = " << wi.constants.at(c) << "\n";
    for (const auto& p : m.sig.predicates()) {
      out << "  pred " << p << " :";
      if (auto it = wi.predicates.find(p); it != wi.predicates.end())
        for (const auto& a : it->second) out << " " << a;
      out << "\n";
    }
    for (const auto& [a, b] : wi.network) out << "  net " << a << " " << b << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Action files.

LoadedAction parse_action_text(const std::string& text, const Signature& sig,
                               std::string name, const ActionRegistry* registry) {
  LoadedAction out;
  auto d = std::make_shared<ActionModel>();
  d->name = std::move(name);
  std::string current_event;
  std::optional<Formula> wildcard;

  for (const Line& line : split_lines(text)) {
    std::string kw = keyword_of(line.text);
    if (kw == "event") {
      auto toks = tokens_of(rest_of(line.text));
      if (toks.size() != 1) fail(line, "expected: event <name>");
      if (d->has_event(toks[0])) fail(line, "duplicate event " + toks[0]);
      current_event = toks[0];
      d->events.push_back(current_event);
    } else if (kw == "pre") {
      if (current_event.empty()) fail(line, "pre outside event section");
      if (d->pre.count(current_event)) fail(line, "event already has a precondition");
      try {
        d->pre[current_event] = parse_formula(rest_of(line.text), sig, registry);
      } catch (const ParseError& e) {
        fail(line, std::string("in precondition: ") + e.what());
      }
    } else if (kw == "post") {
      if (current_event.empty()) fail(line, "post outside event section");
      auto [head, tail] = split_colon(line.text);
      if (!tail) fail(line, "expected: post <ground atom> : <formula>");
      Formula atom, value;
      try {
        atom = parse_formula(rest_of(head), sig, registry);
        value = parse_formula(*tail, sig, registry);
      } catch (const ParseError& e) {
        fail(line, std::string("in postcondition: ") + e.what());
      }
      if (!is_ground_atom(atom))
        fail(line, "postcondition key is not a ground atom: " + to_string(atom));
      if (atom.kind() == Formula::Kind::eq) fail(line, "equality postconditions are fixed");
      d->post[current_event].push_back(PostEntry{std::move(atom), std::move(value)});
    } else if (kw == "edge") {
      auto [head, tail] = split_colon(line.text);
      auto toks = tokens_of(head);
      if (toks.size() != 3 || !tail) fail(line, "expected: edge <e1> <e2> : <formula>");
      Formula q;
      try {
        q = parse_formula(*tail, sig, registry);
      } catch (const ParseError& e) {
        fail(line, std::string("in edge-condition: ") + e.what());
      }
      if (toks[1] == "*" && toks[2] == "*") {
        if (wildcard) fail(line, "duplicate wildcard edge");
        wildcard = q;
      } else {
        if (d->edges.count({toks[1], toks[2]}))
          fail(line, "duplicate edge (" + toks[1] + "," + toks[2] + ")");
        d->edges[{toks[1], toks[2]}] = q;
      }
    } else {
      fail(line, "unknown directive: " + kw);
    }
  }

  for (const auto& e : d->events)
    if (!d->pre.count(e)) d->pre[e] = Formula::top();
  if (wildcard)
    for (const auto& e1 : d->events)
      for (const auto& e2 : d->events)
        if (e1 != e2 && !d->edges.count({e1, e2})) d->edges[{e1, e2}] = *wildcard;

  auto issues = validate_action(*d, sig);
  if (!issues.empty()) {
    std::string msg = "invalid action model: " + issues.front();
    if (issues.size() > 1) msg += " (+" + std::to_string(issues.size() - 1) + " more)";
    throw ModelError(msg);
  }
  out.action = std::move(d);
  return out;
}

LoadedAction load_action_file(const std::string& path, const Signature& sig,
                              const ActionRegistry* registry) {
  std::string name = path;
  auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  auto dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  try {
    return parse_action_text(read_file(path), sig, name, registry);
  } catch (ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0, 0);
  }
}

std::string serialize_action(const ActionModel& d) {
  std::ostringstream out;
  for (const auto& e : d.events) {
    out << "event " << e << "\n";
    out << "  pre " << to_string(d.precondition(e)) << "\n";
    if (auto it = d.post.find(e); it != d.post.end())
      for (const auto& entry : it->second)
        out << "  post " << to_string(entry.atom) << " : " << to_string(entry.value) << "\n";
  }
  if (d.learning_edges) {
    if (d.events.size() > 64)
      throw Error("cannot serialize computed edge-conditions of " +
                  std::to_string(d.events.size()) + " events");
    for (const auto& e1 : d.events)
      for (const auto& e2 : d.events)
        if (e1 != e2)
          out << "edge " << e1 << " " << e2 << " : " << to_string(d.edge_condition(e1, e2))
              << "\n";
  } else {
    for (const auto& [pair, q] : d.edges)
      if (pair.first != pair.second)
        out << "edge " << pair.first << " " << pair.second << " : " << to_string(q) << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Hybrid model files.

LoadedHybrid parse_hybrid_text(const std::string& text) {
  LoadedHybrid out;
  HybridModel& m = out.model;

  struct WorldSection {
    std::optional<std::set<std::pair<std::string, std::string>>> net;
    std::map<std::string, std::set<std::string>> vals;
  };
  std::map<std::string, WorldSection> sections;
  std::set<std::pair<std::string, std::string>> default_net;
  std::map<std::string, std::set<std::string>> default_vals;
  std::string current_world;
  bool in_world = false;

  for (const Line& line : split_lines(text)) {
    std::string kw = keyword_of(line.text);
    auto [head, tail] = split_colon(line.text);
    auto head_toks = tokens_of(head);
    if (kw == "agents") {
      m.agents = tokens_of(rest_of(line.text));
    } else if (kw == "worlds") {
      m.worlds = tokens_of(rest_of(line.text));
    } else if (kw == "props") {
      m.propositions = tokens_of(rest_of(line.text));
    } else if (kw == "nominals") {
      m.nominals = tokens_of(rest_of(line.text));
    } else if (kw == "assign") {
      auto toks = tokens_of(rest_of(line.text));
      if (toks.size() != 3 || toks[1] != "=") fail(line, "expected: assign <nominal> = <agent>");
      m.nominal_assign[toks[0]] = toks[2];
    } else if (kw == "partition") {
      if (head_toks.size() != 2 || !tail) fail(line, "expected: partition <agent> : cells");
      m.epistemic[head_toks[1]] = parse_cells(line, *tail);
    } else if (kw == "edges") {
      if (head_toks.size() != 2 || !tail) fail(line, "expected: edges <agent> : w v | ...");
      std::vector<std::pair<std::string, std::string>> pairs;
      std::istringstream split(*tail);
      std::string part;
      while (std::getline(split, part, '|')) {
        auto toks = tokens_of(part);
        if (toks.empty()) continue;
        if (toks.size() != 2) fail(line, "expected world pairs separated by '|'");
        pairs.emplace_back(toks[0], toks[1]);
      }
      m.epistemic[head_toks[1]] = close_edges(m.worlds, pairs);
      out.warnings.push_back("agent " + head_toks[1] +
                             ": edges closed to an equivalence relation");
    } else if (kw == "world") {
      auto toks = tokens_of(rest_of(line.text));
      if (toks.size() != 1) fail(line, "expected: world <name>");
      current_world = toks[0];
      in_world = true;
      sections[current_world];
    } else if (kw == "net") {
      auto toks = tokens_of(rest_of(line.text));
      if (toks.size() != 2) fail(line, "expected: net <a> <b>");
      if (in_world) {
        auto& sec = sections[current_world];
        if (!sec.net) sec.net.emplace();
        sec.net->insert({toks[0], toks[1]});
      } else {
        default_net.insert({toks[0], toks[1]});
      }
    } else if (kw == "val") {
      if (head_toks.size() != 2 || !tail) fail(line, "expected: val <p> : agents");
      auto agents = tokens_of(*tail);
      std::set<std::string> ext(agents.begin(), agents.end());
      if (in_world)
        sections[current_world].vals[head_toks[1]] = std::move(ext);
      else
        default_vals[head_toks[1]] = std::move(ext);
    } else {
      fail(line, "unknown directive: " + kw);
    }
  }

  for (const auto& w : m.worlds) {
    auto it = sections.find(w);
    auto net = default_net;
    if (it != sections.end() && it->second.net) net = *it->second.net;
    m.networks[w] = std::move(net);
    for (const auto& p : m.propositions) {
      std::set<std::string> agents;
      if (auto dit = default_vals.find(p); dit != default_vals.end()) agents = dit->second;
      if (it != sections.end())
        if (auto vit = it->second.vals.find(p); vit != it->second.vals.end())
          agents = vit->second;
      for (const auto& a : agents) m.valuation[p].insert({w, a});
    }
  }

  auto issues = validate_hybrid(m);
  if (!issues.empty()) {
    std::string msg = "invalid hybrid model: " + issues.front();
    if (issues.size() > 1) msg += " (+" + std::to_string(issues.size() - 1) + " more)";
    throw ModelError(msg);
  }
  return out;
}

LoadedHybrid load_hybrid_file(const std::string& path) {
  try {
    return parse_hybrid_text(read_file(path));
  } catch (ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0, 0);
  }
}

// ---------------------------------------------------------------------------
// KDL model files.

LoadedKdl parse_kdl_text(const std::string& text) {
  LoadedKdl out;
  KdlModel& m = out.model;

  struct WorldSection {
    std::optional<std::set<std::pair<std::string, std::string>>> net;
    std::map<std::string, std::map<std::string, std::string>> sets;  // agent -> feature -> value
  };
  std::map<std::string, WorldSection> sections;
  std::set<std::pair<std::string, std::string>> default_net;
  std::map<std::string, std::map<std::string, std::string>> default_sets;
  std::string current_world;
  bool in_world = false;

  for (const Line& line : split_lines(text)) {
    std::string kw = keyword_of(line.text);
    auto [head, tail] = split_colon(line.text);
    auto head_toks = tokens_of(head);
    if (kw == "agents") {
      m.agents = tokens_of(rest_of(line.text));
    } else if (kw == "worlds") {
      m.worlds = tokens_of(rest_of(line.text));
    } else if (kw == "nominals") {
      m.nominals = tokens_of(rest_of(line.text));
    } else if (kw == "assign") {
      auto toks = tokens_of(rest_of(line.text));
      if (toks.size() != 3 || toks[1] != "=") fail(line, "expected: assign <nominal> = <agent>");
      m.nominal_assign[toks[0]] = toks[2];
    } else if (kw == "feature") {
      if (head_toks.size() != 2 || !tail) fail(line, "expected: feature <f> : values");
      auto values = tokens_of(*tail);
      if (values.empty()) fail(line, "feature needs at least one value");
      m.features.features.emplace_back(head_toks[1], values);
    } else if (kw == "partition") {
      if (head_toks.size() != 2 || !tail) fail(line, "expected: partition <agent> : cells");
      m.epistemic[head_toks[1]] = parse_cells(line, *tail);
    } else if (kw == "edges") {
      if (head_toks.size() != 2 || !tail) fail(line, "expected: edges <agent> : w v | ...");
      std::vector<std::pair<std::string, std::string>> pairs;
      std::istringstream split(*tail);
      std::string part;
      while (std::getline(split, part, '|')) {
        auto toks = tokens_of(part);
        if (toks.empty()) continue;
        if (toks.size() != 2) fail(line, "expected world pairs separated by '|'");
        pairs.emplace_back(toks[0], toks[1]);
      }
      m.epistemic[head_toks[1]] = close_edges(m.worlds, pairs);
      out.warnings.push_back("agent " + head_toks[1] +
                             ": edges closed to an equivalence relation");
    } else if (kw == "world") {
      auto toks = tokens_of(rest_of(line.text));
      if (toks.size() != 1) fail(line, "expected: world <name>");
      current_world = toks[0];
      in_world = true;
      sections[current_world];
    } else if (kw == "net") {
      auto toks = tokens_of(rest_of(line.text));
      if (toks.size() != 2) fail(line, "expected: net <a> <b>");
      if (in_world) {
        auto& sec = sections[current_world];
        if (!sec.net) sec.net.emplace();
        sec.net->insert({toks[0], toks[1]});
      } else {
        default_net.insert({toks[0], toks[1]});
      }
    } else if (kw == "set") {
      // set <agent> : <feature> = <value>
      if (head_toks.size() != 2 || !tail) fail(line, "expected: set <agent> : <f> = <z>");
      auto toks = tokens_of(*tail);
      if (toks.size() != 3 || toks[1] != "=") fail(line, "expected: set <agent> : <f> = <z>");
      if (in_world)
        sections[current_world].sets[head_toks[1]][toks[0]] = toks[2];
      else
        default_sets[head_toks[1]][toks[0]] = toks[2];
    } else {
      fail(line, "unknown directive: " + kw);
    }
  }

  for (const auto& w : m.worlds) {
    auto it = sections.find(w);
    auto net = default_net;
    if (it != sections.end() && it->second.net) net = *it->second.net;
    m.networks[w] = std::move(net);
    for (const auto& a : m.agents) {
      std::map<std::string, std::string> vals;
      if (auto dit = default_sets.find(a); dit != default_sets.end()) vals = dit->second;
      if (it != sections.end())
        if (auto sit = it->second.sets.find(a); sit != it->second.sets.end())
          for (const auto& [f, z] : sit->second) vals[f] = z;
      m.values[w][a] = std::move(vals);
    }
  }

  auto issues = validate_kdl(m);
  if (!issues.empty()) {
    std::string msg = "invalid feature model: " + issues.front();
    if (issues.size() > 1) msg += " (+" + std::to_string(issues.size() - 1) + " more)";
    throw ModelError(msg);
  }
  return out;
}

LoadedKdl load_kdl_file(const std::string& path) {
  try {
    return parse_kdl_text(read_file(path));
  } catch (ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0, 0);
  }
}

// ---------------------------------------------------------------------------
// Updates files.

UpdateDefs parse_updates_text(const std::string& text) {
  UpdateDefs defs;
  std::set<std::string> nominals;

  struct TransformDraft {
    std::string name;
    std::vector<HybridFormula> conditions;
    std::map<std::pair<size_t, std::string>, std::string> post;
  };
  std::optional<TransformDraft> transform;
  std::optional<std::pair<std::string, std::vector<HybridFormula>>> learn;

  auto flush = [&]() {
    if (transform) {
      if (transform->conditions.empty())
        throw ModelError("transform " + transform->name + " has no trigger");
      auto d = std::make_shared<DynamicTransformation>();
      d->name = transform->name;
      d->conditions = transform->conditions;
      d->post = transform->post;
      defs.transforms[d->name] = std::move(d);
      transform.reset();
    }
    if (learn) {
      auto l = std::make_shared<LearningUpdate>();
      l->name = learn->first;
      l->formulas = learn->second;
      defs.learnings[l->name] = std::move(l);
      learn.reset();
    }
  };

  for (const Line& line : split_lines(text)) {
    std::string kw = keyword_of(line.text);
    auto [head, tail] = split_colon(line.text);
    auto head_toks = tokens_of(head);
    if (kw == "feature") {
      if (head_toks.size() != 2 || !tail) fail(line, "expected: feature <f> : values");
      defs.features.features.emplace_back(head_toks[1], tokens_of(*tail));
    } else if (kw == "nominals") {
      for (const auto& n : tokens_of(rest_of(line.text))) nominals.insert(n);
    } else if (kw == "transform") {
      flush();
      auto toks = tokens_of(rest_of(line.text));
      if (toks.size() != 1) fail(line, "expected: transform <name>");
      transform = TransformDraft{toks[0], {}, {}};
    } else if (kw == "learn") {
      flush();
      auto toks = tokens_of(rest_of(line.text));
      if (toks.size() != 1) fail(line, "expected: learn <name>");
      learn = {toks[0], {}};
    } else if (kw == "when") {
      if (!transform) fail(line, "when outside transform block");
      try {
        transform->conditions.push_back(
            parse_kdl_formula(rest_of(line.text), defs.features, nominals, &defs));
      } catch (const ParseError& e) {
        fail(line, std::string("in trigger: ") + e.what());
      }
    } else if (kw == "set") {
      if (!transform) fail(line, "set outside transform block");
      if (transform->conditions.empty()) fail(line, "set before any trigger");
      auto toks = tokens_of(rest_of(line.text));
      if (toks.size() != 3 || toks[1] != "=") fail(line, "expected: set <f> = <z or *>");
      if (!defs.features.values_of(toks[0])) fail(line, "unknown feature: " + toks[0]);
      if (toks[2] == "*") continue;  // unchanged is the default
      const auto* values = defs.features.values_of(toks[0]);
      bool known = false;
      for (const auto& z : *values) known = known || z == toks[2];
      if (!known) fail(line, "unknown value " + toks[2] + " for feature " + toks[0]);
      transform->post[{transform->conditions.size() - 1, toks[0]}] = toks[2];
    } else if (kw == "formula") {
      if (!learn) fail(line, "formula outside learn block");
      try {
        learn->second.push_back(
            parse_kdl_formula(rest_of(line.text), defs.features, nominals, &defs));
      } catch (const ParseError& e) {
        fail(line, std::string("in learning formula: ") + e.what());
      }
    } else {
      fail(line, "unknown directive: " + kw);
    }
  }
  flush();
  auto issues = defs.features.validate();
  if (!issues.empty()) throw ModelError("invalid feature space: " + issues.front());
  return defs;
}

UpdateDefs load_updates_file(const std::string& path) {
  try {
    return parse_updates_text(read_file(path));
  } catch (ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0, 0);
  }
}

}  // namespace dtml
