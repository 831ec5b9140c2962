#pragma once

#include "pch/ast.hpp"

namespace pch {

// Checks dummy scoping, intervention consistency, propositional conditions,
// declared variables and value ranges. Fills sig.dummies with the binder
// names encountered. Throws PchError naming the offending node.
void validate(const FormulaPtr& formula, Signature& sig);

// Least fragment whose grammar generates the (validated) formula.
FragmentTag classify_fragment(const FormulaPtr& formula);
FragmentTag classify_term(const TermPtr& term);

// PCH layer of a single event (1 propositional, 2 post-interventional,
// 3 counterfactual).
int event_layer(const EventPtr& e);
bool event_propositional(const EventPtr& e);

// Rewrites Eq/Lt/Ge/Gt/Ne/Or/Implies into the Le/Not/And core. Idempotent
// and value-preserving; Const nodes are retained.
FormulaPtr desugar(const FormulaPtr& formula);
bool is_desugared(const FormulaPtr& formula);

// t[v/x]: replaces free occurrences of dummy x with the constant v.
// Inner Sum binders that shadow x are left untouched.
TermPtr substitute_dummy(const TermPtr& term, const std::string& dummy, int value);
EventPtr substitute_dummy(const EventPtr& event, const std::string& dummy, int value);

}  // namespace pch
