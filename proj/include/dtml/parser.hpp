#pragma once

#include <set>
#include <string>

#include "dtml/eval.hpp"
#include "dtml/hybrid.hpp"
#include "dtml/kdl.hpp"
#include "dtml/syntax.hpp"

namespace dtml {

// Term-modal formula grammar (ASCII):
//   atoms        P(t)   N(t1,t2)   t1 = t2   t1 != t2
//   connectives  ! & | -> <->        (-> right-associative)
//   modalities   K[t] phi   <K[t]> phi   [model:event] phi
//   quantifiers  forall x. phi   exists x. phi
//   constants    true false
// Quantifier and modality scope extends to the end of the enclosing
// parenthesis; ! binds tightest among the connectives. Identifiers are
// classified by the signature; anything undeclared is a variable, and
// `xstar` is the reserved edge-condition variable.
Formula parse_formula(const std::string& text, const Signature& sig,
                      const ActionRegistry* registry = nullptr);

// Hybrid formulas: prefix operators ! @i K N U [update] bind tightest, then
// & | -> <->. Identifiers in `nominals` (or used after @) are nominals, the
// rest are propositions.
HybridFormula parse_hybrid_formula(const std::string& text,
                                   const std::set<std::string>& nominals);

// The feature-model dialect: propositions must name feature propositions, U
// is not available, and [name] resolves against the named updates.
HybridFormula parse_kdl_formula(const std::string& text, const FeatureSpace& features,
                                const std::set<std::string>& nominals,
                                const UpdateDefs* updates = nullptr);

}  // namespace dtml
