#pragma once

#include <map>
#include <vector>

#include "pch/model.hpp"

namespace pch {

// Term value: an exact rational, or Undefined (zero-probability condition).
struct Valuation {
  bool defined = false;
  Rat value;

  static Valuation undef() { return {}; }
  static Valuation of(Rat v) { return {true, std::move(v)}; }
  bool operator==(const Valuation&) const = default;
};

enum class Truth { True, False, Undefined };
const char* truth_name(Truth t);

// Endogenous values computed from u in causal order (x_i = F_i(pa_i, u_i)).
std::vector<int> determine_values(const Scm& scm, const std::vector<int>& u);

// Mechanisms of intervened variables replaced by constant tables; everything
// else shared unchanged. Intervention values must be constants.
Scm apply_intervention(const Scm& scm, const Intervention& alpha);

// The recursive satisfaction relation F,u |= psi. psi must be closed.
bool satisfies(const Scm& scm, const std::vector<int>& u, const EventPtr& psi);

// Exact rational valuation; sums expand syntactically over Val; conditionals
// are Undefined when the condition has probability zero; Undefined
// propagates through all operators.
Valuation eval_term(const Scm& scm, const TermPtr& term);

// Three-valued semantics (strong Kleene): comparisons of Undefined values
// are Undefined; a SAT witness must evaluate to definite True.
Truth eval_formula(const Scm& scm, const FormulaPtr& formula);

// Algorithm 1 path for lin<S> formulas of layer <= 2: evaluates every
// maximal sum / primitive atom by enumerating worlds and interventions in
// causal-order positions, incrementing matched counters by p_u. Throws
// FragmentError when a primitive nests interventions (layer 3) or the term
// structure is outside lin<S>.
std::map<const Term*, Rat> eval_l2_sums_by_interventions(const Scm& scm,
                                                         const FormulaPtr& formula);

}  // namespace pch
