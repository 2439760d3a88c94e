#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace dtml {

struct ActionModel;

// Reserved variable implicitly free in every edge-condition. It may never be
// bound by a quantifier.
inline const std::string kEdgeVar = "xstar";

// First-order terms: variables and (non-rigid) constants.
struct Term {
  enum class Kind { variable, constant };

  Kind kind = Kind::variable;
  std::string name;

  static Term var(std::string n) { return {Kind::variable, std::move(n)}; }
  static Term con(std::string n) { return {Kind::constant, std::move(n)}; }

  bool is_var() const { return kind == Kind::variable; }
  bool is_con() const { return kind == Kind::constant; }

  bool operator==(const Term&) const = default;
  bool operator<(const Term& o) const {
    return kind != o.kind ? kind < o.kind : name < o.name;
  }
};

std::string to_string(const Term& t);

// Constant and unary-predicate vocabulary. The binary network symbol N and
// equality are always present; variables form an open name space disjoint
// from constants and predicates.
class Signature {
 public:
  Signature() = default;
  Signature(std::vector<std::string> constants, std::vector<std::string> predicates);

  const std::vector<std::string>& constants() const { return constants_; }
  const std::vector<std::string>& predicates() const { return predicates_; }

  bool is_constant(const std::string& name) const;
  bool is_predicate(const std::string& name) const;

  // One message per name-space clash or reserved-word misuse; empty if ok.
  std::vector<std::string> validate() const;

  bool operator==(const Signature&) const = default;

 private:
  std::vector<std::string> constants_;
  std::vector<std::string> predicates_;
  std::set<std::string> constant_set_;
  std::set<std::string> predicate_set_;
};

class Formula;

// A formula-level reference to an event of an action model. `model` is the
// resolved target; `model_name` is kept for display and late lookup.
struct ActionRef {
  std::string model_name;
  std::string event;
  std::shared_ptr<const ActionModel> model;
};

// Immutable formula tree. Core connectives follow the term-modal language;
// everything else (or, ->, <->, exists, <K>, true, false) is built as an
// abbreviation and recovered by the printer.
class Formula {
 public:
  enum class Kind { pred, net, eq, neg, conj, know, forall, box };

  Formula() = default;  // empty handle; only valid after assignment

  static Formula pred(std::string predicate, Term t);
  static Formula net(Term t1, Term t2);
  static Formula eq(Term t1, Term t2);
  static Formula neg(Formula f);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula know(Term agent, Formula f);
  static Formula forall(std::string var, Formula f);  // throws on kEdgeVar
  static Formula box(ActionRef ref, Formula f);

  // Abbreviations.
  static Formula top();     // forall x. x = x
  static Formula bottom();  // !top
  static Formula disj(Formula lhs, Formula rhs);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula iff(Formula lhs, Formula rhs);
  static Formula exists(std::string var, Formula f);
  static Formula maybe_knows(Term agent, Formula f);  // dual of know
  static Formula neq(Term t1, Term t2);
  static Formula conj_all(const std::vector<Formula>& fs);  // empty -> top
  static Formula disj_all(const std::vector<Formula>& fs);  // empty -> bottom

  bool valid() const { return node_ != nullptr; }
  Kind kind() const;

  const std::string& pred_name() const;  // pred
  const Term& term1() const;             // pred / net / eq / know (agent)
  const Term& term2() const;             // net / eq
  const std::string& var() const;        // forall
  Formula child() const;                 // neg / know / forall / box body
  Formula left() const;                  // conj
  Formula right() const;                 // conj
  const ActionRef& action() const;       // box

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

  struct Node;

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Variables with at least one free occurrence.
std::set<std::string> free_variables(const Formula& f);

// Capture-avoiding substitution of `replacement` for free occurrences of
// `var`. Binders are renamed (primed) when they would capture the
// replacement.
Formula substitute(const Formula& f, const std::string& var, const Term& replacement);

// A variable name based on `base` that avoids every name in `avoid`.
std::string fresh_variable(const std::string& base, const std::set<std::string>& avoid);

bool is_atom(const Formula& f);
bool is_ground_atom(const Formula& f);

// All ground atoms of the signature: P(c), N(c,d) and c = d.
std::vector<Formula> ground_atoms(const Signature& sig);

std::string to_string(const Formula& f);

}  // namespace dtml
