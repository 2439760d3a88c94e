#include "dtml/model.hpp"

#include <algorithm>

#include "dtml/errors.hpp"

namespace dtml {

bool Model::has_world(const std::string& w) const {
  return std::find(worlds.begin(), worlds.end(), w) != worlds.end();
}

bool Model::has_agent(const std::string& a) const {
  return std::find(agents.begin(), agents.end(), a) != agents.end();
}

Valuation Valuation::with(const std::string& var, std::string agent) const {
  Valuation g = *this;
  g.map_[var] = std::move(agent);
  return g;
}

void Valuation::set(const std::string& var, std::string agent) {
  map_[var] = std::move(agent);
}

const std::string& Valuation::get(const std::string& var) const {
  auto it = map_.find(var);
  if (it != map_.end()) return it->second;
  if (default_) return *default_;
  throw EvalError("variable has no value: " + var);
}

std::vector<std::string> validate_model(const Model& m) {
  std::vector<std::string> out;
  if (m.agents.empty()) out.push_back("agent set is empty");
  if (m.worlds.empty()) out.push_back("world set is empty");
  for (const auto& issue : m.sig.validate()) out.push_back(issue);

  std::set<std::string> agent_set(m.agents.begin(), m.agents.end());
  std::set<std::string> world_set(m.worlds.begin(), m.worlds.end());
  if (agent_set.size() != m.agents.size()) out.push_back("duplicate agent name");
  if (world_set.size() != m.worlds.size()) out.push_back("duplicate world name");

  for (const auto& a : m.agents) {
    auto it = m.epistemic.find(a);
    if (it == m.epistemic.end()) {
      out.push_back("agent " + a + ": no epistemic partition");
      continue;
    }
    std::map<std::string, int> covered;
    for (const auto& cell : it->second) {
      if (cell.empty()) out.push_back("agent " + a + ": empty partition cell");
      for (const auto& w : cell) {
        if (!world_set.count(w))
          out.push_back("agent " + a + ": partition mentions unknown world " + w);
        else
          covered[w]++;
      }
    }
    for (const auto& w : m.worlds) {
      int n = covered.count(w) ? covered[w] : 0;
      if (n == 0) out.push_back("agent " + a + ": partition does not cover world " + w);
      if (n > 1) out.push_back("agent " + a + ": overlapping partition cells at world " + w);
    }
  }
  for (const auto& [a, cells] : m.epistemic) {
    (void)cells;
    if (!agent_set.count(a)) out.push_back("partition for unknown agent " + a);
  }

  for (const auto& w : m.worlds) {
    auto it = m.interp.find(w);
    if (it == m.interp.end()) {
      out.push_back("world " + w + ": no interpretation");
      continue;
    }
    const WorldInterp& wi = it->second;
    for (const auto& c : m.sig.constants()) {
      auto ct = wi.constants.find(c);
      if (ct == wi.constants.end())
        out.push_back("constant " + c + " undenoted at " + w);
      else if (!agent_set.count(ct->second))
        out.push_back("constant " + c + " denotes unknown agent " + ct->second + " at " + w);
    }
    for (const auto& [c, a] : wi.constants)
      if (!m.sig.is_constant(c))
        out.push_back("world " + w + ": undeclared constant " + c);
    for (const auto& [p, ext] : wi.predicates) {
      if (!m.sig.is_predicate(p))
        out.push_back("world " + w + ": undeclared predicate " + p);
      for (const auto& a : ext)
        if (!agent_set.count(a))
          out.push_back("world " + w + ": predicate " + p + " holds of unknown agent " + a);
    }
    for (const auto& [a, b] : wi.network)
      if (!agent_set.count(a) || !agent_set.count(b))
        out.push_back("world " + w + ": network edge with unknown agent (" + a + "," + b + ")");
  }
  for (const auto& [w, wi] : m.interp) {
    (void)wi;
    if (!world_set.count(w)) out.push_back("interpretation for unknown world " + w);
  }
  return out;
}

std::string extension(const Term& t, const std::string& world, const Model& m,
                      const Valuation& g) {
  if (t.is_var()) return g.get(t.name);
  auto wit = m.interp.find(world);
  if (wit == m.interp.end()) throw ModelError("unknown world: " + world);
  auto cit = wit->second.constants.find(t.name);
  if (cit == wit->second.constants.end())
    throw ModelError("constant " + t.name + " undenoted at " + world);
  return cit->second;
}

const std::vector<std::string>* cell_of(const Model& m, const std::string& agent,
                                        const std::string& world) {
  auto it = m.epistemic.find(agent);
  if (it == m.epistemic.end()) return nullptr;
  for (const auto& cell : it->second)
    if (std::find(cell.begin(), cell.end(), world) != cell.end()) return &cell;
  return nullptr;
}

bool same_cell(const Model& m, const std::string& agent, const std::string& w,
               const std::string& v) {
  const auto* cell = cell_of(m, agent, w);
  return cell && std::find(cell->begin(), cell->end(), v) != cell->end();
}

std::vector<std::string> isomorphism_violations(
    const Model& a, const Model& b, const std::map<std::string, std::string>& world_map) {
  std::vector<std::string> out;
  if (a.agents != b.agents) out.push_back("agent sets differ");
  if (a.worlds.size() != b.worlds.size()) out.push_back("world counts differ");
  std::set<std::string> targets;
  for (const auto& w : a.worlds) {
    auto it = world_map.find(w);
    if (it == world_map.end()) {
      out.push_back("world map undefined at " + w);
      continue;
    }
    if (!b.has_world(it->second)) out.push_back("world map target unknown: " + it->second);
    if (!targets.insert(it->second).second) out.push_back("world map not injective at " + w);
  }
  if (!out.empty()) return out;

  for (const auto& w : a.worlds) {
    const std::string& bw = world_map.at(w);
    const WorldInterp& ia = a.interp.at(w);
    const WorldInterp& ib = b.interp.at(bw);
    if (ia.constants != ib.constants)
      out.push_back("constant denotations differ at " + w + " / " + bw);
    for (const auto& p : a.sig.predicates()) {
      auto ea = ia.predicates.count(p) ? ia.predicates.at(p) : std::set<std::string>{};
      auto eb = ib.predicates.count(p) ? ib.predicates.at(p) : std::set<std::string>{};
      if (ea != eb) out.push_back("extension of " + p + " differs at " + w + " / " + bw);
    }
    if (ia.network != ib.network) out.push_back("network differs at " + w + " / " + bw);
  }
  for (const auto& ag : a.agents)
    for (const auto& w : a.worlds)
      for (const auto& v : a.worlds)
        if (same_cell(a, ag, w, v) != same_cell(b, ag, world_map.at(w), world_map.at(v)))
          out.push_back("agent " + ag + ": relation differs on (" + w + "," + v + ")");
  return out;
}

}  // namespace dtml
