#include "dtml/update.hpp"

#include <algorithm>

#include "dtml/errors.hpp"

namespace dtml {

namespace {

struct RawUpdate {
  UpdateResult result;
  std::vector<std::string> closure_issues;
  bool empty = false;
};

std::string combine_name(const std::string& w, const std::string& e,
                         std::set<std::string>& used) {
  std::string name = w + e;
  if (used.count(name)) name = w + "_" + e;
  while (used.count(name)) name += "'";
  used.insert(name);
  return name;
}

RawUpdate compute_update(Evaluator& ev, const Model& m, const ActionModel& d) {
  RawUpdate raw;
  Model& out = raw.result.model;
  out.sig = m.sig;
  out.agents = m.agents;

  Valuation closed;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::set<std::string> used;
  for (const auto& w : m.worlds)
    for (const auto& e : d.events)
      if (ev.satisfies(m, w, closed, d.precondition(e))) {
        std::string name = combine_name(w, e, used);
        pairs.emplace_back(w, e);
        raw.result.world_names[{w, e}] = name;
        out.worlds.push_back(name);
      }
  if (pairs.empty()) {
    raw.empty = true;
    return raw;
  }

  for (size_t k = 0; k < pairs.size(); ++k) {
    const auto& [w, e] = pairs[k];
    const WorldInterp& base = m.interp.at(w);
    WorldInterp wi = base;
    // Only explicitly overridden atoms enter the plus/minus sets; everything
    // else keeps its value.
    auto post_it = d.post.find(e);
    if (post_it != d.post.end()) {
      std::map<std::string, std::set<std::string>> pred_plus, pred_minus;
      std::set<std::pair<std::string, std::string>> net_plus, net_minus;
      for (const auto& entry : post_it->second) {
        if (entry.atom.kind() == Formula::Kind::eq) continue;
        bool value = ev.satisfies(m, w, closed, entry.value);
        if (entry.atom.kind() == Formula::Kind::pred) {
          const std::string& agent = base.constants.at(entry.atom.term1().name);
          (value ? pred_plus : pred_minus)[entry.atom.pred_name()].insert(agent);
        } else {
          std::pair<std::string, std::string> tuple = {
              base.constants.at(entry.atom.term1().name),
              base.constants.at(entry.atom.term2().name)};
          (value ? net_plus : net_minus).insert(tuple);
        }
      }
      for (const auto& [p, agents] : pred_plus)
        for (const auto& a : agents) wi.predicates[p].insert(a);
      for (const auto& [p, agents] : pred_minus)
        for (const auto& a : agents) wi.predicates[p].erase(a);
      for (const auto& t : net_plus) wi.network.insert(t);
      for (const auto& t : net_minus) wi.network.erase(t);
    }
    out.interp[out.worlds[k]] = std::move(wi);
  }

  // Updated relations: source link plus edge-condition at the source world.
  for (const auto& agent : m.agents) {
    std::set<std::pair<size_t, size_t>> rel;
    Valuation g = closed.with(kEdgeVar, agent);
    for (size_t a = 0; a < pairs.size(); ++a)
      for (size_t b = 0; b < pairs.size(); ++b) {
        if (!same_cell(m, agent, pairs[a].first, pairs[b].first)) continue;
        if (ev.satisfies(m, pairs[a].first, g,
                         d.edge_condition(pairs[a].second, pairs[b].second)))
          rel.insert({a, b});
      }

    for (size_t a = 0; a < pairs.size(); ++a)
      if (!rel.count({a, a}))
        raw.closure_issues.push_back("agent " + agent + ": reflexivity violation at " +
                                     out.worlds[a]);
    for (const auto& [a, b] : rel)
      if (!rel.count({b, a}))
        raw.closure_issues.push_back("agent " + agent + ": symmetry violation between " +
                                     out.worlds[a] + " and " + out.worlds[b]);
    for (const auto& [a, b] : rel)
      for (size_t c = 0; c < pairs.size(); ++c)
        if (rel.count({b, c}) && !rel.count({a, c}))
          raw.closure_issues.push_back("agent " + agent + ": transitivity violation on " +
                                       out.worlds[a] + ", " + out.worlds[b] + ", " +
                                       out.worlds[c]);

    // Cells in first-seen order; safe only when the closure checks passed.
    std::vector<std::vector<std::string>> cells;
    std::vector<bool> placed(pairs.size(), false);
    for (size_t a = 0; a < pairs.size(); ++a) {
      if (placed[a]) continue;
      std::vector<std::string> cell;
      for (size_t b = 0; b < pairs.size(); ++b)
        if (rel.count({a, b}) || a == b) {
          if (!placed[b]) {
            cell.push_back(out.worlds[b]);
            placed[b] = true;
          }
        }
      cells.push_back(std::move(cell));
    }
    out.epistemic[agent] = std::move(cells);
  }
  return raw;
}

}  // namespace

bool applicable(Evaluator& ev, const PointedModel& pm, const PointedAction& pa) {
  return ev.satisfies(pm.model, pm.actual, Valuation(), pa.model->precondition(pa.event));
}

bool applicable(const PointedModel& pm, const PointedAction& pa) {
  Evaluator ev;
  return applicable(ev, pm, pa);
}

UpdateResult product_update_full(Evaluator& ev, const Model& m, const ActionModel& d) {
  RawUpdate raw = compute_update(ev, m, d);
  if (raw.empty) throw ModelError("update yields empty model");
  if (!raw.closure_issues.empty()) {
    std::string msg = "update produced a non-equivalence relation: ";
    msg += raw.closure_issues.front();
    if (raw.closure_issues.size() > 1)
      msg += " (+" + std::to_string(raw.closure_issues.size() - 1) + " more)";
    throw ModelError(msg);
  }
  return std::move(raw.result);
}

Model product_update(const Model& m, const ActionModel& d) {
  Evaluator ev;
  return product_update_full(ev, m, d).model;
}

PointedModel product_update_pointed(Evaluator& ev, const PointedModel& pm,
                                    const PointedAction& pa) {
  if (!applicable(ev, pm, pa))
    throw ModelError("update undefined at actual world: precondition " +
                     to_string(pa.model->precondition(pa.event)) + " fails at " + pm.actual);
  UpdateResult up = product_update_full(ev, pm.model, *pa.model);
  return PointedModel{std::move(up.model), up.world_names.at({pm.actual, pa.event})};
}

PointedModel product_update_pointed(const PointedModel& pm, const PointedAction& pa) {
  Evaluator ev;
  return product_update_pointed(ev, pm, pa);
}

std::vector<std::string> validate_update(const Model& m, const ActionModel& d) {
  Evaluator ev;
  RawUpdate raw = compute_update(ev, m, d);
  if (raw.empty) return {"update yields empty model"};
  return raw.closure_issues;
}

}  // namespace dtml
