#include "dtml/generators.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace dtml {

namespace {

std::vector<std::string> numbered(const std::string& prefix, size_t n) {
  std::vector<std::string> out;
  for (size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

std::vector<std::vector<std::string>> random_partition(Rng& rng,
                                                       const std::vector<std::string>& worlds) {
  std::vector<std::vector<std::string>> cells;
  std::vector<size_t> cell_of(worlds.size());
  size_t max_cells = worlds.size();
  std::map<size_t, size_t> remap;
  for (size_t i = 0; i < worlds.size(); ++i) {
    size_t raw = rng.below(max_cells);
    auto it = remap.find(raw);
    if (it == remap.end()) {
      remap[raw] = cells.size();
      cells.push_back({});
    }
    cell_of[i] = remap[raw];
  }
  for (size_t i = 0; i < worlds.size(); ++i) cells[cell_of[i]].push_back(worlds[i]);
  cells.erase(std::remove_if(cells.begin(), cells.end(),
                             [](const auto& c) { return c.empty(); }),
              cells.end());
  return cells;
}

}  // namespace

Model random_model(Rng& rng, const ModelParams& params) {
  Model m;
  size_t n_agents = 1 + rng.below(params.max_agents);
  size_t n_worlds = 1 + rng.below(params.max_worlds);
  m.agents = numbered("a", n_agents);
  m.worlds = numbered("w", n_worlds);
  std::vector<std::string> constants, predicates;
  for (size_t i = 1; i <= n_agents; ++i) constants.push_back("c" + std::to_string(i) + "_");
  predicates = numbered("P", params.predicates);
  m.sig = Signature(constants, predicates);
  for (const auto& a : m.agents) m.epistemic[a] = random_partition(rng, m.worlds);
  for (const auto& w : m.worlds) {
    WorldInterp wi;
    for (const auto& c : constants) wi.constants[c] = rng.pick(m.agents);
    for (const auto& p : predicates) {
      std::set<std::string> ext;
      for (const auto& a : m.agents)
        if (rng.chance(0.5)) ext.insert(a);
      wi.predicates[p] = std::move(ext);
    }
    for (const auto& a : m.agents)
      for (const auto& b : m.agents)
        if (rng.chance(0.3)) wi.network.insert({a, b});
    m.interp[w] = std::move(wi);
  }
  return m;
}

namespace {

Term random_term(Rng& rng, const Signature& sig, const std::vector<std::string>& scope) {
  if (!scope.empty() && (sig.constants().empty() || rng.chance(0.5)))
    return Term::var(rng.pick(scope));
  return Term::con(rng.pick(sig.constants()));
}

Formula random_formula_rec(Rng& rng, const Signature& sig, int depth,
                           std::vector<std::string>& scope) {
  if (depth <= 0) {
    switch (rng.below(sig.predicates().empty() ? 3 : 4)) {
      case 0:
        return Formula::eq(random_term(rng, sig, scope), random_term(rng, sig, scope));
      case 1:
        return Formula::net(random_term(rng, sig, scope), random_term(rng, sig, scope));
      case 2:
        return rng.chance(0.5) ? Formula::top() : Formula::bottom();
      default:
        return Formula::pred(rng.pick(sig.predicates()), random_term(rng, sig, scope));
    }
  }
  switch (rng.below(7)) {
    case 0:
      return Formula::neg(random_formula_rec(rng, sig, depth - 1, scope));
    case 1:
      return Formula::conj(random_formula_rec(rng, sig, depth - 1, scope),
                           random_formula_rec(rng, sig, depth - 1, scope));
    case 2:
      return Formula::disj(random_formula_rec(rng, sig, depth - 1, scope),
                           random_formula_rec(rng, sig, depth - 1, scope));
    case 3:
      return Formula::implies(random_formula_rec(rng, sig, depth - 1, scope),
                              random_formula_rec(rng, sig, depth - 1, scope));
    case 4:
      return Formula::know(random_term(rng, sig, scope),
                           random_formula_rec(rng, sig, depth - 1, scope));
    case 5: {
      std::string var = "v" + std::to_string(scope.size() + 1);
      scope.push_back(var);
      Formula body = random_formula_rec(rng, sig, depth - 1, scope);
      scope.pop_back();
      return Formula::forall(var, body);
    }
    default: {
      std::string var = "v" + std::to_string(scope.size() + 1);
      scope.push_back(var);
      Formula body = random_formula_rec(rng, sig, depth - 1, scope);
      scope.pop_back();
      return Formula::exists(var, body);
    }
  }
}

}  // namespace

Formula random_closed_formula(Rng& rng, const Signature& sig, int depth) {
  std::vector<std::string> scope;
  return random_formula_rec(rng, sig, depth, scope);
}

HybridModel random_hybrid_model(Rng& rng, const HybridParams& params) {
  HybridModel m;
  m.agents = numbered("a", 1 + rng.below(params.max_agents));
  m.worlds = numbered("w", 1 + rng.below(params.max_worlds));
  m.propositions = numbered("p", params.propositions);
  m.nominals = numbered("i", params.nominals);
  for (const auto& n : m.nominals) m.nominal_assign[n] = rng.pick(m.agents);
  for (const auto& a : m.agents) m.epistemic[a] = random_partition(rng, m.worlds);
  for (const auto& w : m.worlds) {
    auto& net = m.networks[w];
    for (const auto& a : m.agents)
      for (const auto& b : m.agents)
        if (rng.chance(0.3)) net.insert({a, b});
  }
  for (const auto& p : m.propositions) {
    auto& ext = m.valuation[p];
    for (const auto& w : m.worlds)
      for (const auto& a : m.agents)
        if (rng.chance(0.5)) ext.insert({w, a});
  }
  return m;
}

HybridFormula random_hybrid_formula(Rng& rng, const HybridModel& hm, int depth) {
  if (depth <= 0 || rng.chance(0.2)) {
    if (!hm.nominals.empty() && rng.chance(0.3))
      return HybridFormula::nominal(rng.pick(hm.nominals));
    return HybridFormula::prop(rng.pick(hm.propositions));
  }
  switch (rng.below(7)) {
    case 0:
      return HybridFormula::neg(random_hybrid_formula(rng, hm, depth - 1));
    case 1:
      return HybridFormula::conj(random_hybrid_formula(rng, hm, depth - 1),
                                 random_hybrid_formula(rng, hm, depth - 1));
    case 2:
      if (!hm.nominals.empty())
        return HybridFormula::at(rng.pick(hm.nominals),
                                 random_hybrid_formula(rng, hm, depth - 1));
      return HybridFormula::neg(random_hybrid_formula(rng, hm, depth - 1));
    case 3:
      return HybridFormula::know(random_hybrid_formula(rng, hm, depth - 1));
    case 4:
      return HybridFormula::neighbor(random_hybrid_formula(rng, hm, depth - 1));
    case 5:
      return HybridFormula::univ(random_hybrid_formula(rng, hm, depth - 1));
    default:
      return HybridFormula::implies(random_hybrid_formula(rng, hm, depth - 1),
                                    random_hybrid_formula(rng, hm, depth - 1));
  }
}

KdlModel random_kdl_model(Rng& rng, const KdlParams& params) {
  KdlModel m;
  m.agents = numbered("a", 1 + rng.below(params.max_agents));
  m.worlds = numbered("w", 1 + rng.below(params.max_worlds));
  for (size_t i = 1; i <= params.features; ++i)
    m.features.features.emplace_back("f" + std::to_string(i),
                                     std::vector<std::string>{"0", "1"});
  m.nominals = numbered("i", params.nominals);
  for (const auto& n : m.nominals) m.nominal_assign[n] = rng.pick(m.agents);
  for (const auto& a : m.agents) m.epistemic[a] = random_partition(rng, m.worlds);

  // The network indicator of a pair {a,b} must be constant on the join of
  // the two partitions so both agents know their neighborhoods.
  for (const auto& w : m.worlds) m.networks[w];
  for (size_t i = 0; i < m.agents.size(); ++i) {
    for (size_t j = i + 1; j < m.agents.size(); ++j) {
      const auto& a = m.agents[i];
      const auto& b = m.agents[j];
      std::map<std::string, std::string> root;
      for (const auto& w : m.worlds) root[w] = w;
      std::function<std::string(const std::string&)> find = [&](const std::string& w) {
        return root.at(w) == w ? w : root[w] = find(root.at(w));
      };
      for (const auto& agent : {a, b})
        for (const auto& cell : m.epistemic.at(agent))
          for (size_t k = 1; k < cell.size(); ++k) root[find(cell[0])] = find(cell[k]);
      std::map<std::string, bool> linked;
      for (const auto& w : m.worlds) {
        std::string r = find(w);
        if (!linked.count(r)) linked[r] = rng.chance(0.4);
        if (linked[r]) {
          m.networks[w].insert({a, b});
          m.networks[w].insert({b, a});
        }
      }
    }
  }

  for (const auto& w : m.worlds)
    for (const auto& a : m.agents)
      for (const auto& [f, values] : m.features.features)
        m.values[w][a][f] = rng.pick(values);
  return m;
}

HybridFormula random_kdl_formula(Rng& rng, const KdlModel& m, int depth,
                                 const KdlParams& params) {
  if (depth > 0 && rng.chance(params.dynamic_chance)) {
    KdlParams inner = params;
    inner.dynamic_chance = 0;  // keep nested updates shallow
    if (rng.chance(0.5))
      return HybridFormula::dyn_transform(random_transformation(rng, m, inner),
                                          random_kdl_formula(rng, m, depth - 1, params));
    auto l = random_learning(rng, m, inner);
    return HybridFormula::dyn_learn(std::move(l),
                                    random_kdl_formula(rng, m, depth - 1, params));
  }
  if (depth <= 0 || rng.chance(0.25)) {
    if (!m.nominals.empty() && rng.chance(0.25))
      return HybridFormula::nominal(rng.pick(m.nominals));
    const auto& [f, values] = m.features.features[rng.below(m.features.features.size())];
    return HybridFormula::prop(FeatureSpace::prop_name(f, rng.pick(values)));
  }
  switch (rng.below(6)) {
    case 0:
      return HybridFormula::neg(random_kdl_formula(rng, m, depth - 1, params));
    case 1:
      return HybridFormula::conj(random_kdl_formula(rng, m, depth - 1, params),
                                 random_kdl_formula(rng, m, depth - 1, params));
    case 2:
      if (!m.nominals.empty())
        return HybridFormula::at(rng.pick(m.nominals),
                                 random_kdl_formula(rng, m, depth - 1, params));
      return HybridFormula::neg(random_kdl_formula(rng, m, depth - 1, params));
    case 3:
      return HybridFormula::know(random_kdl_formula(rng, m, depth - 1, params));
    case 4:
      return HybridFormula::neighbor(random_kdl_formula(rng, m, depth - 1, params));
    default:
      return HybridFormula::implies(random_kdl_formula(rng, m, depth - 1, params),
                                    random_kdl_formula(rng, m, depth - 1, params));
  }
}

std::shared_ptr<const DynamicTransformation> random_transformation(Rng& rng, const KdlModel& m,
                                                                   const KdlParams& params) {
  auto d = std::make_shared<DynamicTransformation>();
  d->name = "d";
  HybridFormula pivot = random_kdl_formula(rng, m, 2, params);
  if (rng.chance(0.5)) {
    d->conditions.push_back(pivot);
  } else {
    // Two triggers made inconsistent by construction.
    HybridFormula extra = random_kdl_formula(rng, m, 1, params);
    d->conditions.push_back(rng.chance(0.5) ? pivot : HybridFormula::conj(pivot, extra));
    d->conditions.push_back(HybridFormula::neg(pivot));
  }
  for (size_t k = 0; k < d->conditions.size(); ++k)
    for (const auto& [f, values] : m.features.features)
      if (rng.chance(0.6)) d->post[{k, f}] = rng.pick(values);
  return d;
}

std::shared_ptr<const LearningUpdate> random_learning(Rng& rng, const KdlModel& m,
                                                      const KdlParams& params) {
  auto l = std::make_shared<LearningUpdate>();
  l->name = "l";
  if (!rng.chance(0.3)) l->formulas.push_back(random_kdl_formula(rng, m, 2, params));
  return l;
}

}  // namespace dtml
