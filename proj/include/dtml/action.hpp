#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dtml/syntax.hpp"

namespace dtml {

struct PostEntry {
  Formula atom;   // ground atom
  Formula value;  // closed formula evaluated at the source world
};

// Edge-conditions of a compiled learning update, computed on demand from the
// valuation bits encoded in event names ("e" + 0/1 per grounding member).
struct LearningEdges {
  std::vector<Formula> grounding;               // G in enumeration order
  std::vector<std::string> constants;           // signature constants in order
  std::vector<std::vector<size_t>> index;       // [formula][constant] -> grounding slot
  Formula condition(const std::string& event, const std::string& other) const;
};

// Action model: events with preconditions, ground-atom postconditions
// (identity by default) and edge-conditions over the reserved variable x*.
// Unspecified distinct-pair edges are fully distinguishing; self edges are
// trivially true.
struct ActionModel {
  std::string name;
  std::vector<std::string> events;
  std::map<std::string, Formula> pre;
  std::map<std::string, std::vector<PostEntry>> post;
  std::map<std::pair<std::string, std::string>, Formula> edges;
  std::shared_ptr<const LearningEdges> learning_edges;

  bool has_event(const std::string& e) const;
  const Formula& precondition(const std::string& e) const;
  Formula edge_condition(const std::string& e, const std::string& e2) const;
  // Stored override for a ground atom, or null for the identity default.
  const Formula* post_override(const std::string& e, const Formula& ground_atom) const;
};

struct PointedAction {
  std::shared_ptr<const ActionModel> model;
  std::string event;
};

// One message per violated action-model invariant.
std::vector<std::string> validate_action(const ActionModel& d, const Signature& sig);

// Single event, trivial precondition, identity postconditions.
std::shared_ptr<const ActionModel> identity_action(std::string name = "id");

}  // namespace dtml
