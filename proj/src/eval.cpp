#include "dtml/eval.hpp"

#include "dtml/errors.hpp"
#include "dtml/update.hpp"

namespace dtml {

namespace {

const WorldInterp& world_interp(const Model& m, const std::string& w) {
  auto it = m.interp.find(w);
  if (it == m.interp.end()) throw ModelError("unknown world: " + w);
  return it->second;
}

}  // namespace

Evaluator::Evaluator(EvalOptions opts) : opts_(std::move(opts)) {}

const UpdateResult& Evaluator::product(const Model& m, const ActionModel& d) {
  auto key = std::make_pair(&m, &d);
  auto it = cache_.find(key);
  if (it != cache_.end()) return *it->second;
  if (!in_progress_.insert(key).second)
    throw EvalError("cyclic action-model reference involving " + d.name);
  std::unique_ptr<UpdateResult> res;
  try {
    res = std::make_unique<UpdateResult>(product_update_full(*this, m, d));
  } catch (...) {
    in_progress_.erase(key);
    throw;
  }
  in_progress_.erase(key);
  auto pos = cache_.emplace(key, std::move(res)).first;
  return *pos->second;
}

bool Evaluator::satisfies(const Model& m, const std::string& world, const Valuation& g,
                          const Formula& phi) {
  switch (phi.kind()) {
    case Formula::Kind::pred: {
      const WorldInterp& wi = world_interp(m, world);
      std::string a = extension(phi.term1(), world, m, g);
      auto it = wi.predicates.find(phi.pred_name());
      return it != wi.predicates.end() && it->second.count(a) > 0;
    }
    case Formula::Kind::net: {
      const WorldInterp& wi = world_interp(m, world);
      std::string a = extension(phi.term1(), world, m, g);
      std::string b = extension(phi.term2(), world, m, g);
      return wi.network.count({a, b}) > 0;
    }
    case Formula::Kind::eq:
      return extension(phi.term1(), world, m, g) == extension(phi.term2(), world, m, g);
    case Formula::Kind::neg:
      return !satisfies(m, world, g, phi.child());
    case Formula::Kind::conj:
      return satisfies(m, world, g, phi.left()) && satisfies(m, world, g, phi.right());
    case Formula::Kind::forall: {
      Formula body = phi.child();
      for (const auto& a : m.agents)
        if (!satisfies(m, world, g.with(phi.var(), a), body)) return false;
      return true;
    }
    case Formula::Kind::know: {
      // The indexing term is evaluated at the current world.
      std::string i = extension(phi.term1(), world, m, g);
      const auto* cell = cell_of(m, i, world);
      if (!cell) throw ModelError("agent " + i + " has no partition cell at " + world);
      Formula body = phi.child();
      for (const auto& v : *cell)
        if (!satisfies(m, v, g, body)) return false;
      return true;
    }
    case Formula::Kind::box: {
      const ActionRef& ref = phi.action();
      std::shared_ptr<const ActionModel> d = ref.model;
      if (!d) {
        auto it = opts_.registry.find(ref.model_name);
        if (it == opts_.registry.end())
          throw EvalError("unknown action model: " + ref.model_name);
        d = it->second;
      }
      if (!d->has_event(ref.event))
        throw EvalError("unknown event " + ref.event + " of action model " + d->name);
      if (!satisfies(m, world, g, d->precondition(ref.event))) {
        if (opts_.strict_dynamic)
          throw EvalError("update undefined at world " + world + ": precondition " +
                          to_string(d->precondition(ref.event)) + " fails");
        return true;
      }
      const UpdateResult& up = product(m, *d);
      return satisfies(up.model, up.world_names.at({world, ref.event}), g, phi.child());
    }
  }
  throw ModelError("unreachable formula kind");
}

bool satisfies(const Model& m, const std::string& world, const Valuation& g,
               const Formula& phi, EvalOptions opts) {
  Evaluator ev(std::move(opts));
  return ev.satisfies(m, world, g, phi);
}

}  // namespace dtml
