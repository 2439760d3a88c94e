#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "dtml/model.hpp"
#include "dtml/syntax.hpp"

namespace dtml {

struct DynamicTransformation;
struct LearningUpdate;

// Epistemic network structure with agent nominals and a two-dimensional
// valuation: a proposition holds of an agent at a world.
struct HybridModel {
  std::vector<std::string> agents;
  std::vector<std::string> worlds;
  std::map<std::string, std::vector<std::vector<std::string>>> epistemic;  // agent -> cells
  std::map<std::string, std::set<std::pair<std::string, std::string>>> networks;  // world -> N_w
  std::vector<std::string> propositions;
  std::vector<std::string> nominals;
  std::map<std::string, std::string> nominal_assign;  // nominal -> agent
  std::map<std::string, std::set<std::pair<std::string, std::string>>>
      valuation;  // proposition -> {(world, agent)}
};

std::vector<std::string> validate_hybrid(const HybridModel& hm);

// Indexical formulas over (world, agent) points. The two dynamic kinds carry
// their update and belong to the KDL extension of the language.
class HybridFormula {
 public:
  enum class Kind { prop, nominal, neg, conj, at, know, neighbor, univ, dyn_transform, dyn_learn };

  HybridFormula() = default;

  static HybridFormula prop(std::string name);
  static HybridFormula nominal(std::string name);
  static HybridFormula neg(HybridFormula f);
  static HybridFormula conj(HybridFormula lhs, HybridFormula rhs);
  static HybridFormula at(std::string nominal, HybridFormula f);
  static HybridFormula know(HybridFormula f);
  static HybridFormula neighbor(HybridFormula f);
  static HybridFormula univ(HybridFormula f);
  static HybridFormula dyn_transform(std::shared_ptr<const DynamicTransformation> d,
                                     HybridFormula f);
  static HybridFormula dyn_learn(std::shared_ptr<const LearningUpdate> l, HybridFormula f);

  static HybridFormula disj(HybridFormula lhs, HybridFormula rhs);
  static HybridFormula implies(HybridFormula lhs, HybridFormula rhs);
  static HybridFormula iff(HybridFormula lhs, HybridFormula rhs);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const;
  const std::string& name() const;  // prop / nominal / at target
  HybridFormula child() const;
  HybridFormula left() const;
  HybridFormula right() const;
  const std::shared_ptr<const DynamicTransformation>& transform() const;
  const std::shared_ptr<const LearningUpdate>& learning() const;

  bool operator==(const HybridFormula& other) const;
  bool operator!=(const HybridFormula& other) const { return !(*this == other); }

  struct Node;

 private:
  explicit HybridFormula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

std::string to_string(const HybridFormula& f);

// Direct satisfaction of the static language; dynamic operators raise
// EvalError here (they need a feature-structured model).
bool hybrid_satisfies(const HybridModel& hm, const std::string& world,
                      const std::string& agent, const HybridFormula& phi);

enum class Pivot { x, y };
const std::string& pivot_name(Pivot p);
Pivot other_pivot(Pivot p);

// Hook for translating dynamic operators; supplied by the KDL layer.
struct DynamicCompiler {
  virtual ~DynamicCompiler() = default;
  virtual Formula translate_box(const HybridFormula& f, Pivot pivot) = 0;
};

// Standard-translation of hybrid formulas into the term-modal language:
// nominals become variables, the neighbor modality becomes a guarded
// quantifier over the network relation, and the indexical knowledge operator
// becomes knowledge indexed by the pivot variable. Throws on formulas that
// mention the pivot variables x or y.
Formula translate(const HybridFormula& phi, Pivot pivot, DynamicCompiler* dynamics = nullptr);

// Term-modal companion model: same agents, worlds and relations; one rigid
// constant per agent (its name plus "_"); propositions become unary
// predicates; the network relation is copied per world.
Model tml_image(const HybridModel& hm);
std::string agent_constant(const std::string& agent);

struct Prop1Report {
  long checks = 0;
  std::vector<std::string> counterexamples;
  bool ok() const { return counterexamples.empty(); }
};

// Differential check: direct hybrid satisfaction against term-modal
// satisfaction of the translation on the image, at every world, every
// evaluation agent and both pivots.
Prop1Report check_prop1(const HybridModel& hm, const std::vector<HybridFormula>& corpus);

}  // namespace dtml
