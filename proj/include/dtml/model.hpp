#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dtml/syntax.hpp"

namespace dtml {

// Interpretation of one world: constant denotations, predicate extensions
// and the network relation.
struct WorldInterp {
  std::map<std::string, std::string> constants;             // constant -> agent
  std::map<std::string, std::set<std::string>> predicates;  // predicate -> agents
  std::set<std::pair<std::string, std::string>> network;

  bool operator==(const WorldInterp&) const = default;
};

// Finite term-modal model. Epistemic relations are stored as partitions, one
// cell list per agent; validate_model checks that each is a genuine
// partition of the world set.
struct Model {
  Signature sig;
  std::vector<std::string> agents;
  std::vector<std::string> worlds;
  std::map<std::string, std::vector<std::vector<std::string>>> epistemic;  // agent -> cells
  std::map<std::string, WorldInterp> interp;                               // world -> interp

  bool has_world(const std::string& w) const;
  bool has_agent(const std::string& a) const;

  bool operator==(const Model&) const = default;
};

struct PointedModel {
  Model model;
  std::string actual;
};

// Total variable assignment: a finite map with an optional default agent.
class Valuation {
 public:
  Valuation() = default;
  explicit Valuation(std::string default_agent) : default_(std::move(default_agent)) {}

  Valuation with(const std::string& var, std::string agent) const;
  void set(const std::string& var, std::string agent);
  // Throws EvalError when the variable is unmapped and no default is set.
  const std::string& get(const std::string& var) const;

 private:
  std::map<std::string, std::string> map_;
  std::optional<std::string> default_;
};

// One message per invariant violation; empty iff the model is valid.
std::vector<std::string> validate_model(const Model& m);

// Denotation of a term at a world.
std::string extension(const Term& t, const std::string& world, const Model& m,
                      const Valuation& g);

// Cell of `agent`'s partition containing `world`; null if none.
const std::vector<std::string>* cell_of(const Model& m, const std::string& agent,
                                        const std::string& world);
bool same_cell(const Model& m, const std::string& agent, const std::string& w,
               const std::string& v);

// Structural mismatches between `a` and `b` under the world bijection
// `world_map` (a-world -> b-world); empty iff it is an isomorphism.
std::vector<std::string> isomorphism_violations(
    const Model& a, const Model& b, const std::map<std::string, std::string>& world_map);

}  // namespace dtml
