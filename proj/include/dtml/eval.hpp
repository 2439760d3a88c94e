#pragma once

#include <map>
#include <memory>
#include <string>

#include "dtml/action.hpp"
#include "dtml/model.hpp"

namespace dtml {

using ActionRegistry = std::map<std::string, std::shared_ptr<const ActionModel>>;

struct EvalOptions {
  // When true, a dynamic box whose precondition fails raises an error
  // instead of being vacuously true.
  bool strict_dynamic = false;
  ActionRegistry registry;
};

// Product of one model with one action model, with the (world, event) -> new
// world name map needed to follow an update from a given world.
struct UpdateResult {
  Model model;
  std::map<std::pair<std::string, std::string>, std::string> world_names;
};

// Satisfaction engine. Product updates triggered by dynamic boxes are
// computed once per (model, action) pair and cached for the lifetime of the
// evaluator, so source models must outlive it.
class Evaluator {
 public:
  explicit Evaluator(EvalOptions opts = {});

  bool satisfies(const Model& m, const std::string& world, const Valuation& g,
                 const Formula& phi);

  const UpdateResult& product(const Model& m, const ActionModel& d);

  const EvalOptions& options() const { return opts_; }

 private:
  EvalOptions opts_;
  std::map<std::pair<const Model*, const ActionModel*>, std::unique_ptr<UpdateResult>> cache_;
  std::set<std::pair<const Model*, const ActionModel*>> in_progress_;
};

// One-shot satisfaction with a fresh evaluator.
bool satisfies(const Model& m, const std::string& world, const Valuation& g,
               const Formula& phi, EvalOptions opts = {});

}  // namespace dtml
