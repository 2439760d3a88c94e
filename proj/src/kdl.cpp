#include "dtml/kdl.hpp"

#include <algorithm>
#include <cstdlib>

#include "dtml/errors.hpp"
#include "dtml/eval.hpp"

namespace dtml {

const std::vector<std::string>* FeatureSpace::values_of(const std::string& f) const {
  for (const auto& [name, values] : features)
    if (name == f) return &values;
  return nullptr;
}

std::vector<std::string> FeatureSpace::all_prop_names() const {
  std::vector<std::string> out;
  for (const auto& [f, values] : features)
    for (const auto& z : values) out.push_back(prop_name(f, z));
  return out;
}

std::optional<std::pair<std::string, std::string>> FeatureSpace::split_prop(
    const std::string& name) const {
  for (const auto& [f, values] : features)
    for (const auto& z : values)
      if (prop_name(f, z) == name) return std::make_pair(f, z);
  return std::nullopt;
}

std::vector<std::string> FeatureSpace::validate() const {
  std::vector<std::string> out;
  std::set<std::string> fnames, pnames;
  for (const auto& [f, values] : features) {
    if (!fnames.insert(f).second) out.push_back("duplicate feature: " + f);
    if (values.empty()) out.push_back("feature " + f + " has no values");
    std::set<std::string> vs;
    for (const auto& z : values) {
      if (!vs.insert(z).second) out.push_back("feature " + f + ": duplicate value " + z);
      if (!pnames.insert(prop_name(f, z)).second)
        out.push_back("feature proposition name collides: " + prop_name(f, z));
    }
  }
  return out;
}

std::optional<std::string> DynamicTransformation::post_value(size_t condition,
                                                             const std::string& feature) const {
  auto it = post.find({condition, feature});
  if (it == post.end()) return std::nullopt;
  return it->second;
}

HybridModel KdlModel::as_hybrid() const {
  HybridModel hm;
  hm.agents = agents;
  hm.worlds = worlds;
  hm.epistemic = epistemic;
  hm.networks = networks;
  hm.propositions = features.all_prop_names();
  hm.nominals = nominals;
  hm.nominal_assign = nominal_assign;
  for (const auto& [f, values] : features.features)
    for (const auto& z : values) hm.valuation[FeatureSpace::prop_name(f, z)] = {};
  for (const auto& [w, per_agent] : values)
    for (const auto& [a, per_feature] : per_agent)
      for (const auto& [f, z] : per_feature)
        hm.valuation[FeatureSpace::prop_name(f, z)].insert({w, a});
  return hm;
}

std::vector<std::string> validate_kdl(const KdlModel& m) {
  std::vector<std::string> out = validate_hybrid(m.as_hybrid());
  for (const auto& issue : m.features.validate()) out.push_back(issue);

  for (const auto& w : m.worlds)
    for (const auto& a : m.agents)
      for (const auto& [f, zs] : m.features.features) {
        auto wit = m.values.find(w);
        const std::string* z = nullptr;
        if (wit != m.values.end()) {
          auto ait = wit->second.find(a);
          if (ait != wit->second.end()) {
            auto fit = ait->second.find(f);
            if (fit != ait->second.end()) z = &fit->second;
          }
        }
        if (!z) {
          out.push_back("no value for feature " + f + " at (" + w + "," + a + ")");
        } else if (std::find(zs.begin(), zs.end(), *z) == zs.end()) {
          out.push_back("feature " + f + " has unknown value " + *z + " at (" + w + "," + a +
                        ")");
        }
      }

  for (const auto& [w, net] : m.networks) {
    for (const auto& [a, b] : net) {
      if (a == b) out.push_back("network not irreflexive at " + w + ": (" + a + "," + b + ")");
      if (!net.count({b, a}))
        out.push_back("network not symmetric at " + w + ": (" + a + "," + b + ")");
    }
  }

  // Agents know their neighborhoods: an agent's neighbor row is constant
  // across each of its epistemic cells.
  for (const auto& a : m.agents) {
    auto it = m.epistemic.find(a);
    if (it == m.epistemic.end()) continue;
    for (const auto& cell : it->second) {
      for (size_t i = 1; i < cell.size(); ++i) {
        auto row = [&](const std::string& w) {
          std::set<std::string> r;
          auto nit = m.networks.find(w);
          if (nit != m.networks.end())
            for (const auto& [x, y] : nit->second)
              if (x == a) r.insert(y);
          return r;
        };
        if (row(cell[0]) != row(cell[i]))
          out.push_back("agent " + a + " does not know its neighbors across " + cell[0] +
                        " and " + cell[i]);
      }
    }
  }
  return out;
}

bool kdl_satisfies(const KdlModel& m, const std::string& world, const std::string& agent,
                   const HybridFormula& phi) {
  using Kind = HybridFormula::Kind;
  switch (phi.kind()) {
    case Kind::prop: {
      auto fz = m.features.split_prop(phi.name());
      if (!fz) throw EvalError("unknown feature proposition: " + phi.name());
      auto wit = m.values.find(world);
      if (wit == m.values.end()) throw EvalError("unknown world: " + world);
      auto ait = wit->second.find(agent);
      if (ait == wit->second.end()) throw EvalError("unknown agent: " + agent);
      auto fit = ait->second.find(fz->first);
      if (fit == ait->second.end())
        throw EvalError("no value for feature " + fz->first + " at (" + world + "," + agent +
                        ")");
      return fit->second == fz->second;
    }
    case Kind::nominal: {
      auto it = m.nominal_assign.find(phi.name());
      if (it == m.nominal_assign.end()) throw EvalError("undeclared nominal: " + phi.name());
      return it->second == agent;
    }
    case Kind::neg:
      return !kdl_satisfies(m, world, agent, phi.child());
    case Kind::conj:
      return kdl_satisfies(m, world, agent, phi.left()) &&
             kdl_satisfies(m, world, agent, phi.right());
    case Kind::at: {
      auto it = m.nominal_assign.find(phi.name());
      if (it == m.nominal_assign.end()) throw EvalError("undeclared nominal: " + phi.name());
      return kdl_satisfies(m, world, it->second, phi.child());
    }
    case Kind::know: {
      auto it = m.epistemic.find(agent);
      if (it == m.epistemic.end()) throw EvalError("agent has no partition: " + agent);
      for (const auto& cell : it->second) {
        if (std::find(cell.begin(), cell.end(), world) == cell.end()) continue;
        for (const auto& v : cell)
          if (!kdl_satisfies(m, v, agent, phi.child())) return false;
        return true;
      }
      throw EvalError("agent " + agent + " has no cell at " + world);
    }
    case Kind::neighbor: {
      auto it = m.networks.find(world);
      if (it == m.networks.end()) throw EvalError("world has no network: " + world);
      for (const auto& [a, b] : it->second)
        if (a == agent && !kdl_satisfies(m, world, b, phi.child())) return false;
      return true;
    }
    case Kind::univ:
      for (const auto& a : m.agents)
        if (!kdl_satisfies(m, world, a, phi.child())) return false;
      return true;
    case Kind::dyn_transform:
      return kdl_satisfies(apply_transformation(m, *phi.transform()), world, agent,
                           phi.child());
    case Kind::dyn_learn:
      return kdl_satisfies(apply_learning(m, *phi.learning()), world, agent, phi.child());
  }
  throw EvalError("unreachable hybrid formula kind");
}

KdlModel apply_transformation(const KdlModel& m, const DynamicTransformation& d) {
  KdlModel out = m;
  for (const auto& w : m.worlds) {
    for (const auto& a : m.agents) {
      int hit = -1;
      for (size_t k = 0; k < d.conditions.size(); ++k) {
        if (!kdl_satisfies(m, w, a, d.conditions[k])) continue;
        if (hit >= 0)
          throw EvalError("Phi not pairwise inconsistent at (" + w + "," + a + ")");
        hit = static_cast<int>(k);
      }
      if (hit < 0) continue;
      for (const auto& [f, zs] : m.features.features) {
        auto z = d.post_value(static_cast<size_t>(hit), f);
        if (!z) continue;
        if (std::find(zs.begin(), zs.end(), *z) == zs.end())
          throw ModelError("transformation sets feature " + f + " to unknown value " + *z);
        out.values[w][a][f] = *z;
      }
    }
  }
  return out;
}

KdlModel apply_learning(const KdlModel& m, const LearningUpdate& l) {
  KdlModel out = m;
  // Truth table of the update formulas at every point.
  std::vector<std::map<std::pair<std::string, std::string>, bool>> table(l.formulas.size());
  for (size_t i = 0; i < l.formulas.size(); ++i)
    for (const auto& w : m.worlds)
      for (const auto& b : m.agents)
        table[i][{w, b}] = kdl_satisfies(m, w, b, l.formulas[i]);

  for (const auto& a : m.agents) {
    auto keep = [&](const std::string& w, const std::string& v) {
      auto nit = m.networks.find(w);
      if (nit == m.networks.end()) return true;
      for (const auto& [x, b] : nit->second) {
        if (x != a) continue;
        for (size_t i = 0; i < l.formulas.size(); ++i)
          if (table[i].at({w, b}) != table[i].at({v, b})) return false;
      }
      return true;
    };
    std::vector<std::vector<std::string>> cells;
    for (const auto& cell : m.epistemic.at(a)) {
      std::vector<bool> placed(cell.size(), false);
      for (size_t i = 0; i < cell.size(); ++i) {
        if (placed[i]) continue;
        std::vector<std::string> part{cell[i]};
        placed[i] = true;
        for (size_t j = i + 1; j < cell.size(); ++j)
          if (!placed[j] && keep(cell[i], cell[j])) {
            part.push_back(cell[j]);
            placed[j] = true;
          }
        for (size_t p = 0; p < part.size(); ++p)
          for (size_t q = 0; q < part.size(); ++q)
            if (!keep(part[p], part[q]))
              throw ModelError("learning update broke an equivalence relation for agent " + a);
        cells.push_back(std::move(part));
      }
    }
    out.epistemic[a] = std::move(cells);
  }
  return out;
}

size_t default_grounding_cap() {
  if (const char* env = std::getenv("DTML_GROUNDING_CAP")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<size_t>(v);
  }
  return 16;
}

TranslationContext::TranslationContext(Signature sig, FeatureSpace features,
                                       std::map<std::string, std::string> nominal_constants,
                                       size_t grounding_cap)
    : sig_(std::move(sig)),
      features_(std::move(features)),
      nominal_constants_(std::move(nominal_constants)),
      grounding_cap_(grounding_cap) {}

TranslationContext context_for(const KdlModel& m, size_t grounding_cap) {
  Model img = tml_image(m.as_hybrid());
  std::map<std::string, std::string> noms;
  for (const auto& [n, a] : m.nominal_assign) noms[n] = agent_constant(a);
  return TranslationContext(img.sig, m.features, std::move(noms), grounding_cap);
}

Formula TranslationContext::ground(const Formula& f, const std::string& constant) const {
  Formula out = substitute(f, pivot_name(Pivot::x), Term::con(constant));
  for (const auto& v : free_variables(out)) {
    auto it = nominal_constants_.find(v);
    if (it == nominal_constants_.end())
      throw EvalError("update formula mentions unassigned nominal " + v);
    out = substitute(out, v, Term::con(it->second));
  }
  return out;
}

PointedAction TranslationContext::compile_transformation(
    std::shared_ptr<const DynamicTransformation> d) {
  auto it = transform_cache_.find(d.get());
  if (it != transform_cache_.end()) return PointedAction{it->second, "e"};

  auto am = std::make_shared<ActionModel>();
  am->name = d->name.empty() ? "d" : d->name;
  am->events = {"e"};
  am->pre["e"] = Formula::top();
  am->edges[{"e", "e"}] = Formula::top();

  std::vector<Formula> translated;
  for (const auto& cond : d->conditions) translated.push_back(translate(cond, Pivot::x, this));

  std::vector<PostEntry> entries;
  for (const auto& c : sig_.constants()) {
    for (const auto& [f, zs] : features_.features) {
      // One disjunction per value, plus the "some trigger sets f at all"
      // disjunction guarding the unchanged case.
      std::vector<Formula> setting_any;
      for (size_t k = 0; k < d->conditions.size(); ++k)
        if (d->post_value(k, f)) setting_any.push_back(translated[k]);
      Formula fired_any = Formula::disj_all(setting_any);
      for (const auto& z : zs) {
        std::vector<Formula> triggered;
        for (size_t k = 0; k < d->conditions.size(); ++k)
          if (d->post_value(k, f) == z) triggered.push_back(translated[k]);
        Formula fired = Formula::disj_all(triggered);
        Formula atom_x = Formula::pred(FeatureSpace::prop_name(f, z), Term::var("x"));
        Formula rhs = Formula::disj(fired, Formula::conj(Formula::neg(fired_any), atom_x));
        entries.push_back(PostEntry{
            Formula::pred(FeatureSpace::prop_name(f, z), Term::con(c)), ground(rhs, c)});
      }
    }
  }
  am->post["e"] = std::move(entries);
  transform_cache_[d.get()] = am;
  return PointedAction{am, "e"};
}

std::shared_ptr<const ActionModel> TranslationContext::compile_learning(
    std::shared_ptr<const LearningUpdate> l) {
  auto it = learning_cache_.find(l.get());
  if (it != learning_cache_.end()) return it->second;

  const auto& constants = sig_.constants();
  std::vector<Formula> grounding;
  std::vector<std::vector<size_t>> index(l->formulas.size(),
                                         std::vector<size_t>(constants.size(), 0));
  for (size_t i = 0; i < l->formulas.size(); ++i) {
    Formula tx = translate(l->formulas[i], Pivot::x, this);
    for (size_t j = 0; j < constants.size(); ++j) {
      Formula g = ground(tx, constants[j]);
      size_t slot = grounding.size();
      for (size_t k = 0; k < grounding.size(); ++k)
        if (grounding[k] == g) {
          slot = k;
          break;
        }
      if (slot == grounding.size()) grounding.push_back(g);
      index[i][j] = slot;
    }
  }

  if (grounding.size() > grounding_cap_ || grounding.size() >= 63)
    throw EvalError("valuation blow-up: 2^" + std::to_string(grounding.size()) +
                    " events (grounding size " + std::to_string(grounding.size()) +
                    " exceeds cap " + std::to_string(grounding_cap_) + ")");

  auto am = std::make_shared<ActionModel>();
  am->name = l->name.empty() ? "l" : l->name;
  size_t count = size_t{1} << grounding.size();
  for (size_t val = 0; val < count; ++val) {
    std::string bits;
    std::vector<Formula> parts;
    for (size_t k = 0; k < grounding.size(); ++k) {
      bool bit = (val >> k) & 1;
      bits += bit ? '1' : '0';
      parts.push_back(bit ? grounding[k] : Formula::neg(grounding[k]));
    }
    std::string name = "e" + bits;
    am->events.push_back(name);
    am->pre[name] = Formula::conj_all(parts);
  }
  auto edges = std::make_shared<LearningEdges>();
  edges->grounding = grounding;
  edges->constants = constants;
  edges->index = index;
  am->learning_edges = std::move(edges);
  learning_cache_[l.get()] = am;
  return am;
}

Formula TranslationContext::translate_box(const HybridFormula& f, Pivot pivot) {
  if (f.kind() == HybridFormula::Kind::dyn_transform) {
    PointedAction pa = compile_transformation(f.transform());
    return Formula::box(ActionRef{pa.model->name, pa.event, pa.model},
                        translate(f.child(), pivot, this));
  }
  std::shared_ptr<const ActionModel> am = compile_learning(f.learning());
  Formula body = translate(f.child(), pivot, this);
  std::vector<Formula> parts;
  for (const auto& e : am->events)
    parts.push_back(
        Formula::implies(am->precondition(e), Formula::box(ActionRef{am->name, e, am}, body)));
  return Formula::conj_all(parts);
}

Formula translate_dynamic(const HybridFormula& phi, Pivot pivot, TranslationContext& ctx) {
  return translate(phi, pivot, &ctx);
}

MorphismReport bounded_morphism_check(const Model& from, const Model& to,
                                      const std::map<std::string, std::string>& world_map) {
  MorphismReport report;
  auto violate = [&](const std::string& msg) { report.violations.push_back(msg); };

  if (from.agents != to.agents) violate("agent domains differ");
  for (const auto& w : from.worlds)
    if (!world_map.count(w)) violate("world map undefined at " + w);
  if (!report.violations.empty()) return report;
  for (const auto& [w, u] : world_map)
    if (!to.has_world(u)) violate("world map target unknown: " + u);
  if (!report.violations.empty()) return report;

  // Condition 1: mapped worlds agree on constant denotations and all ground
  // atoms.
  for (const auto& w : from.worlds) {
    const std::string& u = world_map.at(w);
    const WorldInterp& wi = from.interp.at(w);
    const WorldInterp& ui = to.interp.at(u);
    for (const auto& c : from.sig.constants()) {
      report.checks++;
      if (wi.constants.at(c) != ui.constants.at(c))
        violate("constant " + c + " denotes differently at " + w + " and " + u);
    }
    for (const auto& atom : ground_atoms(from.sig)) {
      bool a, b;
      switch (atom.kind()) {
        case Formula::Kind::pred: {
          auto ia = wi.predicates.find(atom.pred_name());
          auto ib = ui.predicates.find(atom.pred_name());
          a = ia != wi.predicates.end() &&
              ia->second.count(wi.constants.at(atom.term1().name)) > 0;
          b = ib != ui.predicates.end() &&
              ib->second.count(ui.constants.at(atom.term1().name)) > 0;
          break;
        }
        case Formula::Kind::net:
          a = wi.network.count({wi.constants.at(atom.term1().name),
                                wi.constants.at(atom.term2().name)}) > 0;
          b = ui.network.count({ui.constants.at(atom.term1().name),
                                ui.constants.at(atom.term2().name)}) > 0;
          break;
        default:
          a = wi.constants.at(atom.term1().name) == wi.constants.at(atom.term2().name);
          b = ui.constants.at(atom.term1().name) == ui.constants.at(atom.term2().name);
          break;
      }
      report.checks++;
      if (a != b)
        violate("ground atom " + to_string(atom) + " differs at " + w + " and " + u);
    }
  }

  // Condition 2 (forth): links are preserved by the map.
  for (const auto& agent : from.agents)
    for (const auto& w : from.worlds)
      for (const auto& v : from.worlds) {
        report.checks++;
        if (same_cell(from, agent, w, v) &&
            !same_cell(to, agent, world_map.at(w), world_map.at(v)))
          violate("forth fails for " + agent + " on (" + w + "," + v + ")");
      }

  // Condition 3 (back): every link out of a mapped world is matched.
  for (const auto& agent : from.agents)
    for (const auto& w : from.worlds)
      for (const auto& u : to.worlds) {
        if (!same_cell(to, agent, world_map.at(w), u)) continue;
        report.checks++;
        bool matched = false;
        for (const auto& v : from.worlds)
          if (same_cell(from, agent, w, v) && world_map.at(v) == u) {
            matched = true;
            break;
          }
        if (!matched)
          violate("back fails for " + agent + " on (" + w + " -> " + u + ")");
      }
  return report;
}

std::vector<std::pair<std::string, Formula>> FnAxioms::as_list() const {
  return {{"Named", named}, {"Rig", rigid}, {"Neigh", neigh}, {"KnowNeigh", know_neigh}};
}

FnAxioms generate_fn(size_t n, const Signature& sig) {
  if (n < 1) throw ModelError("agent count must be at least 1");
  if (sig.constants().size() != n)
    throw ModelError("signature has " + std::to_string(sig.constants().size()) +
                     " constants, expected " + std::to_string(n));
  const auto& cs = sig.constants();

  std::vector<std::string> xs;
  for (size_t i = 1; i <= n; ++i) xs.push_back("x" + std::to_string(i));

  FnAxioms fn;
  {
    std::vector<Formula> parts;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        parts.push_back(Formula::neq(Term::var(xs[i]), Term::var(xs[j])));
    {
      std::vector<Formula> any;
      for (size_t i = 0; i < n; ++i)
        any.push_back(Formula::eq(Term::var("y"), Term::var(xs[i])));
      parts.push_back(Formula::forall("y", Formula::disj_all(any)));
    }
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        parts.push_back(Formula::neq(Term::con(cs[i]), Term::con(cs[j])));
    for (size_t i = 0; i < n; ++i)
      parts.push_back(Formula::eq(Term::var(xs[i]), Term::con(cs[i])));
    Formula body = Formula::conj_all(parts);
    for (size_t i = n; i-- > 0;) body = Formula::exists(xs[i], body);
    fn.named = body;
  }
  {
    std::vector<Formula> parts;
    for (const auto& c : cs)
      parts.push_back(Formula::forall(
          "x", Formula::implies(
                   Formula::eq(Term::con(c), Term::var("x")),
                   Formula::forall("y", Formula::know(Term::var("y"),
                                                      Formula::eq(Term::con(c),
                                                                  Term::var("x")))))));
    fn.rigid = Formula::conj_all(parts);
  }
  fn.neigh = Formula::forall(
      "x", Formula::forall(
               "y", Formula::conj(
                        Formula::neg(Formula::net(Term::var("x"), Term::var("x"))),
                        Formula::iff(Formula::net(Term::var("x"), Term::var("y")),
                                     Formula::net(Term::var("y"), Term::var("x"))))));
  fn.know_neigh = Formula::forall(
      "x", Formula::forall(
               "y", Formula::iff(Formula::net(Term::var("x"), Term::var("y")),
                                 Formula::know(Term::var("x"),
                                               Formula::net(Term::var("x"), Term::var("y"))))));
  return fn;
}

std::vector<std::pair<std::string, std::string>> check_characterization(const Model& m,
                                                                        size_t n) {
  FnAxioms fn = generate_fn(n, m.sig);
  std::vector<std::pair<std::string, std::string>> failures;
  Evaluator ev;
  Valuation g;
  for (const auto& w : m.worlds)
    for (const auto& [name, axiom] : fn.as_list())
      if (!ev.satisfies(m, w, g, axiom)) failures.push_back({w, name});
  return failures;
}

}  // namespace dtml
