#include "dtml/hybrid.hpp"

#include <algorithm>

#include "dtml/errors.hpp"
#include "dtml/eval.hpp"
#include "dtml/kdl.hpp"

namespace dtml {

std::vector<std::string> validate_hybrid(const HybridModel& hm) {
  std::vector<std::string> out;
  if (hm.agents.empty()) out.push_back("agent set is empty");
  if (hm.worlds.empty()) out.push_back("world set is empty");
  std::set<std::string> agent_set(hm.agents.begin(), hm.agents.end());
  std::set<std::string> world_set(hm.worlds.begin(), hm.worlds.end());

  for (const auto& a : hm.agents) {
    auto it = hm.epistemic.find(a);
    if (it == hm.epistemic.end()) {
      out.push_back("agent " + a + ": no epistemic partition");
      continue;
    }
    std::map<std::string, int> covered;
    for (const auto& cell : it->second)
      for (const auto& w : cell) covered[w]++;
    for (const auto& w : hm.worlds) {
      int n = covered.count(w) ? covered[w] : 0;
      if (n != 1)
        out.push_back("agent " + a + ": partition covers world " + w + " " +
                      std::to_string(n) + " times");
    }
  }
  for (const auto& w : hm.worlds)
    if (!hm.networks.count(w)) out.push_back("world " + w + ": no network");
  for (const auto& [w, net] : hm.networks)
    for (const auto& [a, b] : net)
      if (!agent_set.count(a) || !agent_set.count(b))
        out.push_back("world " + w + ": network edge with unknown agent (" + a + "," + b + ")");

  std::set<std::string> names;
  for (const auto& p : hm.propositions)
    if (!names.insert(p).second) out.push_back("duplicate proposition: " + p);
  for (const auto& n : hm.nominals) {
    if (!names.insert(n).second) out.push_back("nominal clashes with another symbol: " + n);
    if (!hm.nominal_assign.count(n)) out.push_back("nominal " + n + " unassigned");
  }
  for (const auto& [n, a] : hm.nominal_assign) {
    if (std::find(hm.nominals.begin(), hm.nominals.end(), n) == hm.nominals.end())
      out.push_back("assignment for undeclared nominal " + n);
    if (!agent_set.count(a)) out.push_back("nominal " + n + " assigned to unknown agent " + a);
  }
  for (const auto& [p, ext] : hm.valuation) {
    if (std::find(hm.propositions.begin(), hm.propositions.end(), p) == hm.propositions.end())
      out.push_back("valuation for undeclared proposition " + p);
    for (const auto& [w, a] : ext)
      if (!world_set.count(w) || !agent_set.count(a))
        out.push_back("valuation of " + p + " mentions unknown point (" + w + "," + a + ")");
  }
  for (const auto& n : {std::string("x"), std::string("y"), kEdgeVar})
    for (const auto& sym : hm.nominals)
      if (sym == n) out.push_back("nominal name is reserved: " + n);
  for (const auto& a : hm.agents)
    if (!a.empty() && a.back() == '_')
      out.push_back("agent name may not end with '_': " + a);
  return out;
}

struct HybridFormula::Node {
  Kind kind;
  std::string name;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
  std::shared_ptr<const DynamicTransformation> transform;
  std::shared_ptr<const LearningUpdate> learning;
};

HybridFormula HybridFormula::prop(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::prop;
  n->name = std::move(name);
  return HybridFormula(std::move(n));
}

HybridFormula HybridFormula::nominal(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::nominal;
  n->name = std::move(name);
  return HybridFormula(std::move(n));
}

HybridFormula HybridFormula::neg(HybridFormula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::neg;
  n->lhs = f.node_;
  return HybridFormula(std::move(n));
}

HybridFormula HybridFormula::conj(HybridFormula lhs, HybridFormula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::conj;
  n->lhs = lhs.node_;
  n->rhs = rhs.node_;
  return HybridFormula(std::move(n));
}

HybridFormula HybridFormula::at(std::string nominal, HybridFormula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::at;
  n->name = std::move(nominal);
  n->lhs = f.node_;
  return HybridFormula(std::move(n));
}

HybridFormula HybridFormula::know(HybridFormula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::know;
  n->lhs = f.node_;
  return HybridFormula(std::move(n));
}

HybridFormula HybridFormula::neighbor(HybridFormula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::neighbor;
  n->lhs = f.node_;
  return HybridFormula(std::move(n));
}

HybridFormula HybridFormula::univ(HybridFormula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::univ;
  n->lhs = f.node_;
  return HybridFormula(std::move(n));
}

HybridFormula HybridFormula::dyn_transform(std::shared_ptr<const DynamicTransformation> d,
                                           HybridFormula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::dyn_transform;
  n->transform = std::move(d);
  n->lhs = f.node_;
  return HybridFormula(std::move(n));
}

HybridFormula HybridFormula::dyn_learn(std::shared_ptr<const LearningUpdate> l, HybridFormula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::dyn_learn;
  n->learning = std::move(l);
  n->lhs = f.node_;
  return HybridFormula(std::move(n));
}

HybridFormula HybridFormula::disj(HybridFormula lhs, HybridFormula rhs) {
  return neg(conj(neg(std::move(lhs)), neg(std::move(rhs))));
}

HybridFormula HybridFormula::implies(HybridFormula lhs, HybridFormula rhs) {
  return neg(conj(std::move(lhs), neg(std::move(rhs))));
}

HybridFormula HybridFormula::iff(HybridFormula lhs, HybridFormula rhs) {
  return conj(implies(lhs, rhs), implies(rhs, lhs));
}

HybridFormula::Kind HybridFormula::kind() const { return node_->kind; }
const std::string& HybridFormula::name() const { return node_->name; }
HybridFormula HybridFormula::child() const { return HybridFormula(node_->lhs); }
HybridFormula HybridFormula::left() const { return HybridFormula(node_->lhs); }
HybridFormula HybridFormula::right() const { return HybridFormula(node_->rhs); }
const std::shared_ptr<const DynamicTransformation>& HybridFormula::transform() const {
  return node_->transform;
}
const std::shared_ptr<const LearningUpdate>& HybridFormula::learning() const {
  return node_->learning;
}

namespace {

bool hnodes_equal(const HybridFormula::Node* a, const HybridFormula::Node* b);

}  // namespace

bool HybridFormula::operator==(const HybridFormula& other) const {
  return hnodes_equal(node_.get(), other.node_.get());
}

namespace {

bool hnodes_equal(const HybridFormula::Node* a, const HybridFormula::Node* b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->name != b->name) return false;
  if (a->transform != b->transform || a->learning != b->learning) return false;
  if (!hnodes_equal(a->lhs.get(), b->lhs.get())) return false;
  return hnodes_equal(a->rhs.get(), b->rhs.get());
}

std::string hprint(const HybridFormula& f, bool tight);

std::string hprint_operand(const HybridFormula& f) { return hprint(f, true); }

std::string transform_name(const HybridFormula& f) {
  return f.transform() ? f.transform()->name : "?";
}

std::string learning_name(const HybridFormula& f) {
  return f.learning() ? f.learning()->name : "?";
}

std::string hprint(const HybridFormula& f, bool tight) {
  using Kind = HybridFormula::Kind;
  switch (f.kind()) {
    case Kind::prop:
    case Kind::nominal:
      return f.name();
    case Kind::neg:
      return "!" + hprint_operand(f.child());
    case Kind::conj: {
      std::string s = hprint_operand(f.left()) + " & " + hprint_operand(f.right());
      return tight ? "(" + s + ")" : s;
    }
    case Kind::at:
      return "@" + f.name() + " " + hprint_operand(f.child());
    case Kind::know:
      return "K " + hprint_operand(f.child());
    case Kind::neighbor:
      return "N " + hprint_operand(f.child());
    case Kind::univ:
      return "U " + hprint_operand(f.child());
    case Kind::dyn_transform:
      return "[" + transform_name(f) + "] " + hprint_operand(f.child());
    case Kind::dyn_learn:
      return "[" + learning_name(f) + "] " + hprint_operand(f.child());
  }
  return "?";
}

}  // namespace

std::string to_string(const HybridFormula& f) { return hprint(f, false); }

bool hybrid_satisfies(const HybridModel& hm, const std::string& world,
                      const std::string& agent, const HybridFormula& phi) {
  using Kind = HybridFormula::Kind;
  switch (phi.kind()) {
    case Kind::prop: {
      if (std::find(hm.propositions.begin(), hm.propositions.end(), phi.name()) ==
          hm.propositions.end())
        throw EvalError("undeclared proposition: " + phi.name());
      auto it = hm.valuation.find(phi.name());
      return it != hm.valuation.end() && it->second.count({world, agent}) > 0;
    }
    case Kind::nominal: {
      auto it = hm.nominal_assign.find(phi.name());
      if (it == hm.nominal_assign.end()) throw EvalError("undeclared nominal: " + phi.name());
      return it->second == agent;
    }
    case Kind::neg:
      return !hybrid_satisfies(hm, world, agent, phi.child());
    case Kind::conj:
      return hybrid_satisfies(hm, world, agent, phi.left()) &&
             hybrid_satisfies(hm, world, agent, phi.right());
    case Kind::at: {
      auto it = hm.nominal_assign.find(phi.name());
      if (it == hm.nominal_assign.end()) throw EvalError("undeclared nominal: " + phi.name());
      return hybrid_satisfies(hm, world, it->second, phi.child());
    }
    case Kind::know: {
      auto it = hm.epistemic.find(agent);
      if (it == hm.epistemic.end()) throw EvalError("agent has no partition: " + agent);
      for (const auto& cell : it->second) {
        if (std::find(cell.begin(), cell.end(), world) == cell.end()) continue;
        for (const auto& v : cell)
          if (!hybrid_satisfies(hm, v, agent, phi.child())) return false;
        return true;
      }
      throw EvalError("agent " + agent + " has no cell at " + world);
    }
    case Kind::neighbor: {
      auto it = hm.networks.find(world);
      if (it == hm.networks.end()) throw EvalError("world has no network: " + world);
      for (const auto& [a, b] : it->second)
        if (a == agent && !hybrid_satisfies(hm, world, b, phi.child())) return false;
      return true;
    }
    case Kind::univ:
      for (const auto& a : hm.agents)
        if (!hybrid_satisfies(hm, world, a, phi.child())) return false;
      return true;
    case Kind::dyn_transform:
    case Kind::dyn_learn:
      throw EvalError("dynamic operator requires a feature-structured model");
  }
  throw EvalError("unreachable hybrid formula kind");
}

const std::string& pivot_name(Pivot p) {
  static const std::string x = "x", y = "y";
  return p == Pivot::x ? x : y;
}

Pivot other_pivot(Pivot p) { return p == Pivot::x ? Pivot::y : Pivot::x; }

namespace {

void check_pivot_collision(const HybridFormula& phi) {
  using Kind = HybridFormula::Kind;
  switch (phi.kind()) {
    case Kind::prop:
      if (phi.name() == "x" || phi.name() == "y")
        throw EvalError("pivot collision: proposition named " + phi.name());
      return;
    case Kind::nominal:
      if (phi.name() == "x" || phi.name() == "y")
        throw EvalError("pivot collision: nominal " + phi.name() + " occurs in formula");
      return;
    case Kind::at:
      if (phi.name() == "x" || phi.name() == "y")
        throw EvalError("pivot collision: nominal " + phi.name() + " occurs in formula");
      check_pivot_collision(phi.child());
      return;
    case Kind::conj:
      check_pivot_collision(phi.left());
      check_pivot_collision(phi.right());
      return;
    case Kind::neg:
    case Kind::know:
    case Kind::neighbor:
    case Kind::univ:
    case Kind::dyn_transform:
    case Kind::dyn_learn:
      check_pivot_collision(phi.child());
      return;
  }
}

Formula translate_rec(const HybridFormula& phi, Pivot pivot, DynamicCompiler* dynamics) {
  using Kind = HybridFormula::Kind;
  const std::string& pv = pivot_name(pivot);
  switch (phi.kind()) {
    case Kind::prop:
      return Formula::pred(phi.name(), Term::var(pv));
    case Kind::nominal:
      return Formula::eq(Term::var(pv), Term::var(phi.name()));
    case Kind::neg:
      return Formula::neg(translate_rec(phi.child(), pivot, dynamics));
    case Kind::conj:
      return Formula::conj(translate_rec(phi.left(), pivot, dynamics),
                           translate_rec(phi.right(), pivot, dynamics));
    case Kind::at:
      return substitute(translate_rec(phi.child(), pivot, dynamics), pv,
                        Term::var(phi.name()));
    case Kind::know:
      return Formula::know(Term::var(pv), translate_rec(phi.child(), pivot, dynamics));
    case Kind::neighbor: {
      Pivot o = other_pivot(pivot);
      return Formula::forall(
          pivot_name(o),
          Formula::implies(Formula::net(Term::var(pv), Term::var(pivot_name(o))),
                           translate_rec(phi.child(), o, dynamics)));
    }
    case Kind::univ:
      return Formula::forall(pv, translate_rec(phi.child(), pivot, dynamics));
    case Kind::dyn_transform:
    case Kind::dyn_learn:
      if (!dynamics) throw EvalError("dynamic operator in static translation");
      return dynamics->translate_box(phi, pivot);
  }
  throw EvalError("unreachable hybrid formula kind");
}

}  // namespace

Formula translate(const HybridFormula& phi, Pivot pivot, DynamicCompiler* dynamics) {
  check_pivot_collision(phi);
  return translate_rec(phi, pivot, dynamics);
}

std::string agent_constant(const std::string& agent) { return agent + "_"; }

Model tml_image(const HybridModel& hm) {
  Model m;
  std::vector<std::string> constants;
  for (const auto& a : hm.agents) constants.push_back(agent_constant(a));
  m.sig = Signature(constants, hm.propositions);
  m.agents = hm.agents;
  m.worlds = hm.worlds;
  m.epistemic = hm.epistemic;
  for (const auto& w : hm.worlds) {
    WorldInterp wi;
    for (const auto& a : hm.agents) wi.constants[agent_constant(a)] = a;
    for (const auto& p : hm.propositions) {
      std::set<std::string> ext;
      auto it = hm.valuation.find(p);
      if (it != hm.valuation.end())
        for (const auto& [vw, va] : it->second)
          if (vw == w) ext.insert(va);
      wi.predicates[p] = std::move(ext);
    }
    auto nit = hm.networks.find(w);
    if (nit != hm.networks.end()) wi.network = nit->second;
    m.interp[w] = std::move(wi);
  }
  return m;
}

Prop1Report check_prop1(const HybridModel& hm, const std::vector<HybridFormula>& corpus) {
  Prop1Report report;
  Model img = tml_image(hm);
  Evaluator ev;
  for (const auto& phi : corpus) {
    for (Pivot pivot : {Pivot::x, Pivot::y}) {
      Formula t = translate(phi, pivot);
      for (const auto& w : hm.worlds) {
        for (const auto& a : hm.agents) {
          Valuation g;
          for (const auto& [nom, ag] : hm.nominal_assign) g.set(nom, ag);
          g.set(pivot_name(pivot), a);
          bool lhs = hybrid_satisfies(hm, w, a, phi);
          bool rhs = ev.satisfies(img, w, g, t);
          report.checks++;
          if (lhs != rhs)
            report.counterexamples.push_back(
                "formula " + to_string(phi) + " at (" + w + "," + a + "), pivot " +
                pivot_name(pivot) + ": hybrid=" + (lhs ? "true" : "false") +
                " tml=" + (rhs ? "true" : "false"));
        }
      }
    }
  }
  return report;
}

}  // namespace dtml
