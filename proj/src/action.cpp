#include "dtml/action.hpp"

#include <algorithm>

#include "dtml/errors.hpp"

namespace dtml {

namespace {

Formula self_edge() { return Formula::eq(Term::var(kEdgeVar), Term::var(kEdgeVar)); }
Formula distinct_edge() { return Formula::neg(self_edge()); }

std::vector<bool> decode_bits(const std::string& event, size_t expected) {
  if (event.empty() || event[0] != 'e')
    throw ModelError("not a valuation event name: " + event);
  std::string bits = event.substr(1);
  if (bits.size() != expected)
    throw ModelError("valuation event name has wrong width: " + event);
  std::vector<bool> out;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ModelError("not a valuation event name: " + event);
    out.push_back(c == '1');
  }
  return out;
}

}  // namespace

Formula LearningEdges::condition(const std::string& event, const std::string& other) const {
  if (event == other) return Formula::top();
  std::vector<bool> a = decode_bits(event, grounding.size());
  std::vector<bool> b = decode_bits(other, grounding.size());
  std::vector<Formula> parts;
  for (size_t j = 0; j < constants.size(); ++j) {
    bool disagree = false;
    for (const auto& row : index)
      if (a[row[j]] != b[row[j]]) {
        disagree = true;
        break;
      }
    if (disagree)
      parts.push_back(Formula::neg(Formula::net(Term::var(kEdgeVar), Term::con(constants[j]))));
  }
  return Formula::conj_all(parts);
}

bool ActionModel::has_event(const std::string& e) const {
  return std::find(events.begin(), events.end(), e) != events.end();
}

const Formula& ActionModel::precondition(const std::string& e) const {
  auto it = pre.find(e);
  if (it == pre.end()) throw ModelError("event " + e + " has no precondition");
  return it->second;
}

Formula ActionModel::edge_condition(const std::string& e, const std::string& e2) const {
  auto it = edges.find({e, e2});
  if (it != edges.end()) return it->second;
  if (learning_edges) return learning_edges->condition(e, e2);
  return e == e2 ? self_edge() : distinct_edge();
}

const Formula* ActionModel::post_override(const std::string& e, const Formula& ground_atom) const {
  auto it = post.find(e);
  if (it == post.end()) return nullptr;
  for (const auto& entry : it->second)
    if (entry.atom == ground_atom) return &entry.value;
  return nullptr;
}

std::vector<std::string> validate_action(const ActionModel& d, const Signature& sig) {
  std::vector<std::string> out;
  if (d.events.empty()) out.push_back("event set is empty");
  std::set<std::string> event_set(d.events.begin(), d.events.end());
  if (event_set.size() != d.events.size()) out.push_back("duplicate event name");

  for (const auto& e : d.events) {
    auto it = d.pre.find(e);
    if (it == d.pre.end()) {
      out.push_back("event " + e + ": missing precondition");
    } else if (!free_variables(it->second).empty()) {
      out.push_back("event " + e + ": precondition has free variables");
    }
  }

  for (const auto& [pair, q] : d.edges) {
    if (!event_set.count(pair.first) || !event_set.count(pair.second)) {
      out.push_back("edge-condition for unknown event pair (" + pair.first + "," +
                    pair.second + ")");
      continue;
    }
    auto fv = free_variables(q);
    fv.erase(kEdgeVar);
    if (!fv.empty())
      out.push_back("edge-condition Q(" + pair.first + "," + pair.second +
                    ") has free variables besides " + kEdgeVar);
    if (pair.first == pair.second && q != self_edge() && q != Formula::top())
      out.push_back("self edge-condition Q(" + pair.first + "," + pair.first +
                    ") must be trivially true");
  }

  for (const auto& [e, entries] : d.post) {
    if (!event_set.count(e)) {
      out.push_back("postconditions for unknown event " + e);
      continue;
    }
    std::vector<Formula> seen;
    for (const auto& entry : entries) {
      if (!is_ground_atom(entry.atom)) {
        out.push_back("event " + e + ": postcondition key is not a ground atom: " +
                      to_string(entry.atom));
        continue;
      }
      if (entry.atom.kind() == Formula::Kind::eq) {
        if (entry.atom.term1() == entry.atom.term2())
          out.push_back("event " + e + ": postcondition may not override " +
                        to_string(entry.atom));
        else
          out.push_back("event " + e + ": equality postcondition has no effect: " +
                        to_string(entry.atom));
      }
      if (entry.atom.kind() == Formula::Kind::pred && !sig.is_predicate(entry.atom.pred_name()))
        out.push_back("event " + e + ": postcondition for undeclared predicate " +
                      entry.atom.pred_name());
      if (!free_variables(entry.value).empty())
        out.push_back("event " + e + ": postcondition formula for " + to_string(entry.atom) +
                      " has free variables");
      for (const auto& prev : seen)
        if (prev == entry.atom)
          out.push_back("event " + e + ": duplicate postcondition for " + to_string(entry.atom));
      seen.push_back(entry.atom);
    }
  }
  return out;
}

std::shared_ptr<const ActionModel> identity_action(std::string name) {
  auto d = std::make_shared<ActionModel>();
  d->name = std::move(name);
  d->events = {"e"};
  d->pre["e"] = Formula::top();
  return d;
}

}  // namespace dtml
