#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dtml/hybrid.hpp"
#include "dtml/kdl.hpp"
#include "dtml/model.hpp"

namespace dtml {

// Deterministic source for the randomized suites; identical seeds reproduce
// identical runs.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  size_t below(size_t n) { return n == 0 ? 0 : engine_() % n; }
  bool chance(double p) { return engine_() % 1000 < static_cast<uint64_t>(p * 1000); }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 engine_;
};

struct ModelParams {
  size_t max_agents = 4;
  size_t max_worlds = 5;
  size_t predicates = 2;
};

// Random term-modal model with partition-shaped relations; always valid.
Model random_model(Rng& rng, const ModelParams& params = {});

// Random closed formula over the model's signature (quantified variables may
// occur under their binders).
Formula random_closed_formula(Rng& rng, const Signature& sig, int depth);

struct HybridParams {
  size_t max_agents = 4;
  size_t max_worlds = 5;
  size_t propositions = 2;
  size_t nominals = 2;
};

HybridModel random_hybrid_model(Rng& rng, const HybridParams& params = {});

// Random formula of the full static hybrid language, depth-bounded.
HybridFormula random_hybrid_formula(Rng& rng, const HybridModel& hm, int depth);

struct KdlParams {
  size_t max_agents = 3;
  size_t max_worlds = 4;
  size_t features = 2;  // binary features
  size_t nominals = 1;
  // Probability of a dynamic box per formula node; nested updates stay
  // small.
  double dynamic_chance = 0.05;
};

// Random feature model satisfying the class axioms: the network is
// irreflexive and symmetric and constant on the join of the two incident
// agents' partitions, so agents know their neighborhoods.
KdlModel random_kdl_model(Rng& rng, const KdlParams& params = {});

HybridFormula random_kdl_formula(Rng& rng, const KdlModel& m, int depth,
                                 const KdlParams& params = {});

// Random transformation whose triggers are pairwise inconsistent by
// construction.
std::shared_ptr<const DynamicTransformation> random_transformation(Rng& rng, const KdlModel& m,
                                                                   const KdlParams& params = {});

// Random learning update with at most one formula.
std::shared_ptr<const LearningUpdate> random_learning(Rng& rng, const KdlModel& m,
                                                      const KdlParams& params = {});

}  // namespace dtml
