#pragma once

#include <optional>

#include "pch/analysis.hpp"
#include "pch/eval.hpp"
#include "pch/linear.hpp"

namespace pch {

// Caps for the bounded engines. Every verdict echoes the bounds it ran with.
struct Bounds {
  std::optional<int> support_m;    // small-model support size; default #atoms+1
  long column_cap = 4096;          // max c^n columns for the L1 matrix
  long support_enum_cap = 500000;  // support subsets tried per DNF branch
  long dummy_enum_cap = 1 << 20;   // dummy tuples per count_satisfying call
  long dnf_branch_cap = 4096;
  long fm_constraint_cap = 200000;
  long profile_cap = 1 << 21;     // deterministic profiles scanned per causal order
  long csp_node_cap = 4000000;    // lazy-table search nodes per causal order
  long order_cap = 40320;         // causal orders tried (8!)
  long grid_cap = 2000000;        // mixture weight vectors tried
  int denom_cap = 8;              // denominator cap for the poly grid search
  int jobs = 1;

  std::string describe() const;
};

struct Verdict {
  enum class Kind { Sat, UnsatWithinBounds, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<Scm> witness;  // Sat only; re-verified by eval_formula
  Bounds bounds;
  std::string reason;  // Unknown only

  static Verdict sat(Scm witness, Bounds bounds);
  static Verdict unsat(Bounds bounds);
  static Verdict unknown(Bounds bounds, std::string reason);
};

struct ValidityVerdict {
  enum class Kind { ValidWithinBounds, NotValid, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<Scm> counterexample;
  Bounds bounds;
  std::string reason;
};

// Fact 1: a layer-1 sum over a primitive decomposes into per-assignment
// integer counts; the term's value is sum_xhat p_xhat * count[xhat] for every
// distribution. Column order is mixed-radix over sig.endogenous (last
// variable fastest).
std::vector<Int> decompose_sum_l1(const TermPtr& sum_term, const Signature& sig,
                                  const Bounds& bounds);

// Number of dummy substitutions making delta true under the full assignment
// xhat (brute force over c^|dummies|; the #P oracle at desk scale).
Int count_satisfying(const EventPtr& delta, const std::vector<int>& xhat,
                     const std::vector<std::string>& dummies, const Signature& sig,
                     const Bounds& bounds);

// Same counts by the negation-free closed form: constant mismatch -> 0,
// consistent bindings -> 1 scaled by c per unused dummy. FragmentError when
// a negation occurs inside delta.
Int count_satisfying_negfree(const EventPtr& delta, const std::vector<int>& xhat,
                             const std::vector<std::string>& dummies, const Signature& sig);

// Bounded satisfiability, layer 1 base/lin (with or without sums): Fact 1
// rows over all c^n columns, DNF branches, support sets of <= m columns,
// exact Fourier-Motzkin. Complete when every cap holds; Unknown otherwise.
Verdict check_sat_l1(const FormulaPtr& formula, const Signature& sig, const Bounds& bounds);

// Proposition-4 fast path: identical pipeline without the #SAT oracle;
// FragmentError if any primitive contains a negation.
Verdict check_sat_l1_negfree(const FormulaPtr& formula, const Signature& sig,
                             const Bounds& bounds);

// Layers 2 and 3 (base/lin, and poly via the grid fallback): causal orders x
// deterministic-profile mixtures. Extreme-pinned branches use a lazy-table
// single-profile search; linear branches enumerate profiles and solve
// exactly; poly/conditional formulas search a denominator-capped grid.
Verdict check_sat_causal(const FormulaPtr& formula, const Signature& sig, const Bounds& bounds);

// Fragment-dispatching entry point used by the CLI.
Verdict check_sat(const FormulaPtr& formula, const Signature& sig, const Bounds& bounds,
                  const std::string& engine = "auto");

// Validity via the dual: check_sat(!phi) with the verdict mapped.
ValidityVerdict check_validity(const FormulaPtr& formula, const Signature& sig,
                               const Bounds& bounds, const std::string& engine = "auto");

// A variable name not colliding with anything declared in sig.
std::string fresh_name(const Signature& sig, const std::string& base);

}  // namespace pch
