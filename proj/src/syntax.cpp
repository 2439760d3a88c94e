#include "dtml/syntax.hpp"

#include <algorithm>
#include <cassert>

#include "dtml/errors.hpp"

namespace dtml {

std::string to_string(const Term& t) { return t.name; }

Signature::Signature(std::vector<std::string> constants, std::vector<std::string> predicates)
    : constants_(std::move(constants)), predicates_(std::move(predicates)) {
  constant_set_.insert(constants_.begin(), constants_.end());
  predicate_set_.insert(predicates_.begin(), predicates_.end());
}

bool Signature::is_constant(const std::string& name) const {
  return constant_set_.count(name) > 0;
}

bool Signature::is_predicate(const std::string& name) const {
  return predicate_set_.count(name) > 0;
}

std::vector<std::string> Signature::validate() const {
  std::vector<std::string> issues;
  static const std::set<std::string> reserved = {"N",      "K",     "true", "false",
                                                 "forall", "exists", kEdgeVar};
  std::set<std::string> seen;
  for (const auto& c : constants_) {
    if (reserved.count(c)) issues.push_back("constant name is reserved: " + c);
    if (!seen.insert(c).second) issues.push_back("duplicate constant: " + c);
  }
  for (const auto& p : predicates_) {
    if (reserved.count(p)) issues.push_back("predicate name is reserved: " + p);
    if (!seen.insert(p).second)
      issues.push_back("predicate name clashes with another symbol: " + p);
  }
  return issues;
}

struct Formula::Node {
  Kind kind;
  std::string name;  // predicate name (pred) or bound variable (forall)
  Term t1;
  Term t2;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
  ActionRef ref;
};

namespace {

using NodePtr = std::shared_ptr<const Formula::Node>;

}  // namespace

Formula Formula::pred(std::string predicate, Term t) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::pred;
  n->name = std::move(predicate);
  n->t1 = std::move(t);
  return Formula(std::move(n));
}

Formula Formula::net(Term t1, Term t2) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::net;
  n->t1 = std::move(t1);
  n->t2 = std::move(t2);
  return Formula(std::move(n));
}

Formula Formula::eq(Term t1, Term t2) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::eq;
  n->t1 = std::move(t1);
  n->t2 = std::move(t2);
  return Formula(std::move(n));
}

Formula Formula::neg(Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::neg;
  n->lhs = f.node_;
  return Formula(std::move(n));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::conj;
  n->lhs = lhs.node_;
  n->rhs = rhs.node_;
  return Formula(std::move(n));
}

Formula Formula::know(Term agent, Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::know;
  n->t1 = std::move(agent);
  n->lhs = f.node_;
  return Formula(std::move(n));
}

Formula Formula::forall(std::string var, Formula f) {
  if (var == kEdgeVar) throw ModelError("reserved variable " + kEdgeVar + " cannot be bound");
  auto n = std::make_shared<Node>();
  n->kind = Kind::forall;
  n->name = std::move(var);
  n->lhs = f.node_;
  return Formula(std::move(n));
}

Formula Formula::box(ActionRef ref, Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::box;
  n->ref = std::move(ref);
  n->lhs = f.node_;
  return Formula(std::move(n));
}

Formula Formula::top() {
  return forall("x", eq(Term::var("x"), Term::var("x")));
}

Formula Formula::bottom() { return neg(top()); }

Formula Formula::disj(Formula lhs, Formula rhs) {
  return neg(conj(neg(std::move(lhs)), neg(std::move(rhs))));
}

Formula Formula::implies(Formula lhs, Formula rhs) {
  return neg(conj(std::move(lhs), neg(std::move(rhs))));
}

Formula Formula::iff(Formula lhs, Formula rhs) {
  return conj(implies(lhs, rhs), implies(rhs, lhs));
}

Formula Formula::exists(std::string var, Formula f) {
  return neg(forall(std::move(var), neg(std::move(f))));
}

Formula Formula::maybe_knows(Term agent, Formula f) {
  return neg(know(std::move(agent), neg(std::move(f))));
}

Formula Formula::neq(Term t1, Term t2) { return neg(eq(std::move(t1), std::move(t2))); }

Formula Formula::conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula acc = fs.front();
  for (size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

Formula Formula::disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return bottom();
  Formula acc = fs.front();
  for (size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}

Formula::Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::pred_name() const { return node_->name; }
const Term& Formula::term1() const { return node_->t1; }
const Term& Formula::term2() const { return node_->t2; }
const std::string& Formula::var() const { return node_->name; }
Formula Formula::child() const { return Formula(node_->lhs); }
Formula Formula::left() const { return Formula(node_->lhs); }
Formula Formula::right() const { return Formula(node_->rhs); }
const ActionRef& Formula::action() const { return node_->ref; }

namespace {

bool nodes_equal(const Formula::Node* a, const Formula::Node* b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Formula::Kind::pred:
      return a->name == b->name && a->t1 == b->t1;
    case Formula::Kind::net:
    case Formula::Kind::eq:
      return a->t1 == b->t1 && a->t2 == b->t2;
    case Formula::Kind::neg:
      return nodes_equal(a->lhs.get(), b->lhs.get());
    case Formula::Kind::conj:
      return nodes_equal(a->lhs.get(), b->lhs.get()) && nodes_equal(a->rhs.get(), b->rhs.get());
    case Formula::Kind::know:
      return a->t1 == b->t1 && nodes_equal(a->lhs.get(), b->lhs.get());
    case Formula::Kind::forall:
      return a->name == b->name && nodes_equal(a->lhs.get(), b->lhs.get());
    case Formula::Kind::box:
      return a->ref.model_name == b->ref.model_name && a->ref.event == b->ref.event &&
             a->ref.model == b->ref.model && nodes_equal(a->lhs.get(), b->lhs.get());
  }
  return false;
}

}  // namespace

bool Formula::operator==(const Formula& other) const {
  return nodes_equal(node_.get(), other.node_.get());
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::pred:
      if (f.term1().is_var() && !bound.count(f.term1().name)) out.insert(f.term1().name);
      return;
    case Formula::Kind::net:
    case Formula::Kind::eq:
      if (f.term1().is_var() && !bound.count(f.term1().name)) out.insert(f.term1().name);
      if (f.term2().is_var() && !bound.count(f.term2().name)) out.insert(f.term2().name);
      return;
    case Formula::Kind::neg:
    case Formula::Kind::box:
      collect_free(f.child(), bound, out);
      return;
    case Formula::Kind::conj:
      collect_free(f.left(), bound, out);
      collect_free(f.right(), bound, out);
      return;
    case Formula::Kind::know:
      if (f.term1().is_var() && !bound.count(f.term1().name)) out.insert(f.term1().name);
      collect_free(f.child(), bound, out);
      return;
    case Formula::Kind::forall: {
      bool inserted = bound.insert(f.var()).second;
      collect_free(f.child(), bound, out);
      if (inserted) bound.erase(f.var());
      return;
    }
  }
}

}  // namespace

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

std::string fresh_variable(const std::string& base, const std::set<std::string>& avoid) {
  std::string name = base;
  do {
    name += "'";
  } while (avoid.count(name));
  return name;
}

namespace {

Term sub_term(const Term& t, const std::string& var, const Term& replacement) {
  if (t.is_var() && t.name == var) return replacement;
  return t;
}

}  // namespace

Formula substitute(const Formula& f, const std::string& var, const Term& replacement) {
  if (!free_variables(f).count(var)) return f;
  switch (f.kind()) {
    case Formula::Kind::pred:
      return Formula::pred(f.pred_name(), sub_term(f.term1(), var, replacement));
    case Formula::Kind::net:
      return Formula::net(sub_term(f.term1(), var, replacement),
                          sub_term(f.term2(), var, replacement));
    case Formula::Kind::eq:
      return Formula::eq(sub_term(f.term1(), var, replacement),
                         sub_term(f.term2(), var, replacement));
    case Formula::Kind::neg:
      return Formula::neg(substitute(f.child(), var, replacement));
    case Formula::Kind::conj:
      return Formula::conj(substitute(f.left(), var, replacement),
                           substitute(f.right(), var, replacement));
    case Formula::Kind::know:
      return Formula::know(sub_term(f.term1(), var, replacement),
                           substitute(f.child(), var, replacement));
    case Formula::Kind::box:
      return Formula::box(f.action(), substitute(f.child(), var, replacement));
    case Formula::Kind::forall: {
      // var is free in f, so the binder differs from var.
      const std::string& bound = f.var();
      if (replacement.is_var() && replacement.name == bound) {
        std::set<std::string> avoid = free_variables(f.child());
        avoid.insert(var);
        avoid.insert(replacement.name);
        std::string renamed = fresh_variable(bound, avoid);
        Formula body = substitute(f.child(), bound, Term::var(renamed));
        return Formula::forall(renamed, substitute(body, var, replacement));
      }
      return Formula::forall(bound, substitute(f.child(), var, replacement));
    }
  }
  throw ModelError("unreachable formula kind");
}

bool is_atom(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::pred:
    case Formula::Kind::net:
    case Formula::Kind::eq:
      return true;
    default:
      return false;
  }
}

bool is_ground_atom(const Formula& f) {
  if (!is_atom(f)) return false;
  if (f.kind() == Formula::Kind::pred) return f.term1().is_con();
  return f.term1().is_con() && f.term2().is_con();
}

std::vector<Formula> ground_atoms(const Signature& sig) {
  std::vector<Formula> out;
  for (const auto& p : sig.predicates())
    for (const auto& c : sig.constants()) out.push_back(Formula::pred(p, Term::con(c)));
  for (const auto& c : sig.constants())
    for (const auto& d : sig.constants())
      out.push_back(Formula::net(Term::con(c), Term::con(d)));
  for (const auto& c : sig.constants())
    for (const auto& d : sig.constants()) out.push_back(Formula::eq(Term::con(c), Term::con(d)));
  return out;
}

// ---------------------------------------------------------------------------
// Printer. Formulas are first classified into display forms so that
// abbreviations print back as the connectives they stand for.

namespace {

enum class Display {
  truth,
  falsity,
  atom,
  atom_neq,
  negation,
  conjunction,
  disjunction,
  implication,
  equivalence,
  knows,
  maybe_knows,
  universal,
  existential,
  update_box,
};

bool is_top_pattern(const Formula& f) {
  return f.kind() == Formula::Kind::forall && f.var() == "x" &&
         f.child().kind() == Formula::Kind::eq && f.child().term1() == Term::var("x") &&
         f.child().term2() == Term::var("x");
}

Display classify(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::pred:
    case Formula::Kind::net:
    case Formula::Kind::eq:
      return Display::atom;
    case Formula::Kind::know:
      return Display::knows;
    case Formula::Kind::box:
      return Display::update_box;
    case Formula::Kind::forall:
      return is_top_pattern(f) ? Display::truth : Display::universal;
    case Formula::Kind::conj: {
      // a <-> b is (a -> b) & (b -> a).
      Formula l = f.left(), r = f.right();
      if (l.kind() == Formula::Kind::neg && r.kind() == Formula::Kind::neg &&
          l.child().kind() == Formula::Kind::conj && r.child().kind() == Formula::Kind::conj &&
          l.child().right().kind() == Formula::Kind::neg &&
          r.child().right().kind() == Formula::Kind::neg &&
          l.child().left() == r.child().right().child() &&
          l.child().right().child() == r.child().left())
        return Display::equivalence;
      return Display::conjunction;
    }
    case Formula::Kind::neg: {
      Formula c = f.child();
      if (is_top_pattern(c)) return Display::falsity;
      if (c.kind() == Formula::Kind::eq) return Display::atom_neq;
      if (c.kind() == Formula::Kind::know && c.child().kind() == Formula::Kind::neg) {
        // Prefer "!K[t] ..." when the negated body itself displays as a
        // derived connective; otherwise show the dual modality.
        if (classify(c.child()) == Display::negation) return Display::maybe_knows;
        return Display::negation;
      }
      if (c.kind() == Formula::Kind::forall && c.child().kind() == Formula::Kind::neg)
        return Display::existential;
      if (c.kind() == Formula::Kind::conj) {
        if (c.left().kind() == Formula::Kind::neg && c.right().kind() == Formula::Kind::neg) {
          // !a & !b reads as a | b, except when !a displays as a compound
          // connective of its own; then a' -> b is the better reading.
          switch (classify(c.left())) {
            case Display::disjunction:
            case Display::implication:
            case Display::existential:
            case Display::maybe_knows:
              return Display::implication;
            default:
              return Display::disjunction;
          }
        }
        if (c.right().kind() == Formula::Kind::neg) return Display::implication;
      }
      return Display::negation;
    }
  }
  return Display::atom;
}

constexpr int kPrecAtom = 7;
constexpr int kPrecNeg = 5;
constexpr int kPrecAnd = 4;
constexpr int kPrecOr = 3;
constexpr int kPrecImp = 2;
constexpr int kPrecIff = 1;
constexpr int kPrecPrefix = 0;

int display_prec(Display d) {
  switch (d) {
    case Display::truth:
    case Display::falsity:
    case Display::atom:
    case Display::atom_neq:
      return kPrecAtom;
    case Display::negation:
      return kPrecNeg;
    case Display::conjunction:
      return kPrecAnd;
    case Display::disjunction:
      return kPrecOr;
    case Display::implication:
      return kPrecImp;
    case Display::equivalence:
      return kPrecIff;
    default:
      return kPrecPrefix;
  }
}

std::string print(const Formula& f, int min_prec, bool at_end);

// Prefix-operator bodies extend to the end of the enclosing scope; binary
// bodies are parenthesized for readability.
std::string print_scope_body(const Formula& f) {
  int p = display_prec(classify(f));
  if (p >= kPrecPrefix + 1 && p <= kPrecAnd) return "(" + print(f, 0, true) + ")";
  return print(f, 0, true);
}

std::string print(const Formula& f, int min_prec, bool at_end) {
  Display d = classify(f);
  int prec = display_prec(d);
  bool prefix_form = prec == kPrecPrefix;
  // Prefix forms scope to the end of the enclosing parenthesis, so they are
  // fine wherever they extend to the end and need parentheses anywhere else.
  if (prefix_form ? !at_end : prec < min_prec) return "(" + print(f, 0, true) + ")";
  switch (d) {
    case Display::truth:
      return "true";
    case Display::falsity:
      return "false";
    case Display::atom:
      switch (f.kind()) {
        case Formula::Kind::pred:
          return f.pred_name() + "(" + to_string(f.term1()) + ")";
        case Formula::Kind::net:
          return "N(" + to_string(f.term1()) + "," + to_string(f.term2()) + ")";
        default:
          return to_string(f.term1()) + " = " + to_string(f.term2());
      }
    case Display::atom_neq:
      return to_string(f.child().term1()) + " != " + to_string(f.child().term2());
    case Display::negation:
      return "!" + print(f.child(), kPrecNeg, at_end);
    case Display::conjunction:
      return print(f.left(), kPrecAnd, false) + " & " + print(f.right(), kPrecAnd + 1, at_end);
    case Display::disjunction:
      return print(f.child().left().child(), kPrecOr, false) + " | " +
             print(f.child().right().child(), kPrecOr + 1, at_end);
    case Display::implication:
      return print(f.child().left(), kPrecOr, false) + " -> " +
             print(f.child().right().child(), kPrecImp, at_end);
    case Display::equivalence:
      return print(f.left().child().left(), kPrecIff, false) + " <-> " +
             print(f.left().child().right().child(), kPrecIff + 1, at_end);
    case Display::knows:
      return "K[" + to_string(f.term1()) + "] " + print_scope_body(f.child());
    case Display::maybe_knows:
      return "<K[" + to_string(f.child().term1()) + "]> " +
             print_scope_body(f.child().child().child());
    case Display::universal:
      return "forall " + f.var() + ". " + print_scope_body(f.child());
    case Display::existential:
      return "exists " + f.child().var() + ". " + print_scope_body(f.child().child().child());
    case Display::update_box: {
      const ActionRef& r = f.action();
      std::string name = r.model_name.empty() ? "?" : r.model_name;
      return "[" + name + ":" + r.event + "] " + print_scope_body(f.child());
    }
  }
  return "?";
}

}  // namespace

std::string to_string(const Formula& f) { return print(f, 0, true); }

}  // namespace dtml
