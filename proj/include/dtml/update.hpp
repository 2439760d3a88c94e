#pragma once

#include <string>
#include <vector>

#include "dtml/action.hpp"
#include "dtml/eval.hpp"
#include "dtml/model.hpp"

namespace dtml {

// Whether the pointed action's precondition holds at the pointed world.
bool applicable(const PointedModel& pm, const PointedAction& pa);
bool applicable(Evaluator& ev, const PointedModel& pm, const PointedAction& pa);

// Product of `m` and `d`. New worlds are the (world, event) pairs whose
// precondition holds, named by concatenation; epistemic links require the
// source link plus the edge-condition at the source world. Throws ModelError
// when no pair survives or when some updated relation fails to be an
// equivalence relation.
Model product_update(const Model& m, const ActionModel& d);
UpdateResult product_update_full(Evaluator& ev, const Model& m, const ActionModel& d);

// Pointed variant; throws ModelError when not applicable at the actual world.
PointedModel product_update_pointed(const PointedModel& pm, const PointedAction& pa);
PointedModel product_update_pointed(Evaluator& ev, const PointedModel& pm,
                                    const PointedAction& pa);

// Computes the product and reports every closure failure of the updated
// relations (agent, world pair, missing property) without throwing.
std::vector<std::string> validate_update(const Model& m, const ActionModel& d);

}  // namespace dtml
