#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dtml/action.hpp"
#include "dtml/hybrid.hpp"
#include "dtml/model.hpp"

namespace dtml {

// Finite feature vocabulary; every agent carries exactly one value per
// feature at every world. Each (feature, value) pair is exposed as a
// proposition named `<feature>_<value>`.
struct FeatureSpace {
  std::vector<std::pair<std::string, std::vector<std::string>>> features;

  static std::string prop_name(const std::string& f, const std::string& z) {
    return f + "_" + z;
  }
  const std::vector<std::string>* values_of(const std::string& f) const;
  std::vector<std::string> all_prop_names() const;
  // (feature, value) behind a proposition name, if any.
  std::optional<std::pair<std::string, std::string>> split_prop(const std::string& name) const;
  std::vector<std::string> validate() const;
};

// Feature-change instruction: a list of pairwise inconsistent trigger
// formulas and, per trigger and feature, the value to set (absent = leave
// unchanged).
struct DynamicTransformation {
  std::string name;
  std::vector<HybridFormula> conditions;  // Phi
  std::map<std::pair<size_t, std::string>, std::string> post;  // (trigger, feature) -> value

  std::optional<std::string> post_value(size_t condition, const std::string& feature) const;
};

// Link-cutting instruction: agents keep an epistemic link only when all
// their neighbors agree on every formula of the set.
struct LearningUpdate {
  std::string name;
  std::vector<HybridFormula> formulas;
};

// Hybrid network model with a functional feature valuation. Accepted models
// satisfy the class axioms: the network is irreflexive and symmetric and
// agents know their own neighborhoods.
struct KdlModel {
  FeatureSpace features;
  std::vector<std::string> agents;
  std::vector<std::string> worlds;
  std::map<std::string, std::vector<std::vector<std::string>>> epistemic;
  std::map<std::string, std::set<std::pair<std::string, std::string>>> networks;
  std::vector<std::string> nominals;
  std::map<std::string, std::string> nominal_assign;
  std::map<std::string, std::map<std::string, std::map<std::string, std::string>>>
      values;  // world -> agent -> feature -> value

  HybridModel as_hybrid() const;
};

std::vector<std::string> validate_kdl(const KdlModel& m);

// Satisfaction over KDL models, including the dynamic operators.
bool kdl_satisfies(const KdlModel& m, const std::string& world, const std::string& agent,
                   const HybridFormula& phi);

// Applies a transformation: only the feature valuation changes. Throws when
// two trigger formulas are co-satisfied at some point of this model.
KdlModel apply_transformation(const KdlModel& m, const DynamicTransformation& d);

// Applies a learning update: only the epistemic relations change, and links
// are only ever cut.
KdlModel apply_learning(const KdlModel& m, const LearningUpdate& l);

// Upper bound on the size of the grounding of a learning update (the
// compiled action model has 2^|grounding| events). Reads DTML_GROUNDING_CAP
// when set.
size_t default_grounding_cap();

// Shared state for compiling updates against a fixed signature and feature
// space. Compiled pre- and postconditions must be closed, so free nominal
// variables are resolved to the constants naming their bearers. Compilation
// results are cached per update object, so equal update references compile
// to the same action model.
class TranslationContext : public DynamicCompiler {
 public:
  TranslationContext(Signature sig, FeatureSpace features,
                     std::map<std::string, std::string> nominal_constants = {},
                     size_t grounding_cap = default_grounding_cap());

  const Signature& signature() const { return sig_; }

  // Single-event action model whose postconditions encode the
  // transformation's feature changes, grounded at every constant.
  PointedAction compile_transformation(std::shared_ptr<const DynamicTransformation> d);

  // One event per truth-value assignment to the grounded formulas; the
  // edge-conditions cut links exactly where some disagreeing constant names
  // a neighbor.
  std::shared_ptr<const ActionModel> compile_learning(std::shared_ptr<const LearningUpdate> l);

  Formula translate_box(const HybridFormula& f, Pivot pivot) override;

 private:
  Formula ground(const Formula& f, const std::string& constant) const;

  Signature sig_;
  FeatureSpace features_;
  std::map<std::string, std::string> nominal_constants_;  // nominal -> constant
  size_t grounding_cap_;
  std::map<const DynamicTransformation*, std::shared_ptr<const ActionModel>> transform_cache_;
  std::map<const LearningUpdate*, std::shared_ptr<const ActionModel>> learning_cache_;
};

// Context matching a model's image signature, feature space and nominal
// assignment.
TranslationContext context_for(const KdlModel& m,
                               size_t grounding_cap = default_grounding_cap());

// Translation extended with the dynamic clauses: a transformation becomes a
// single dynamic box, a learning update a precondition-guarded conjunction
// of boxes over its compiled events.
Formula translate_dynamic(const HybridFormula& phi, Pivot pivot, TranslationContext& ctx);

struct MorphismReport {
  long checks = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks that `world_map` is a bounded morphism from `from` into `to`:
// mapped worlds agree on all ground atoms and constant denotations, links
// are preserved forwards, and every link from a mapped world is matched
// backwards.
MorphismReport bounded_morphism_check(const Model& from, const Model& to,
                                      const std::map<std::string, std::string>& world_map);

// The four static axioms characterizing images of n-agent feature models:
// all agents are distinctly named, names are rigid across epistemic links,
// the network is irreflexive and symmetric, and agents know their
// neighborhoods.
struct FnAxioms {
  Formula named;
  Formula rigid;
  Formula neigh;
  Formula know_neigh;
  std::vector<std::pair<std::string, Formula>> as_list() const;
};

FnAxioms generate_fn(size_t n, const Signature& sig);

// Model-checks every axiom at every world; returns failing (world, axiom)
// pairs.
std::vector<std::pair<std::string, std::string>> check_characterization(const Model& m,
                                                                        size_t n);

// Named dynamic updates plus their feature space, as declared in an updates
// file.
struct UpdateDefs {
  FeatureSpace features;
  std::map<std::string, std::shared_ptr<const DynamicTransformation>> transforms;
  std::map<std::string, std::shared_ptr<const LearningUpdate>> learnings;
};

}  // namespace dtml
