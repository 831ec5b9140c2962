#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pch/ast.hpp"

namespace pch {

// --- source problem structures ---------------------------------------------

// Propositional formula over variable ids (used by the E-MajSat family).
struct PropForm;
using PropPtr = std::shared_ptr<const PropForm>;
struct PropForm {
  enum class Kind { Var, Not, And, Or };
  Kind kind = Kind::Var;
  int var = 0;
  PropPtr left, right;
};
PropPtr p_var(int id);
PropPtr p_not(PropPtr a);
PropPtr p_and(PropPtr a, PropPtr b);
PropPtr p_or(PropPtr a, PropPtr b);
bool prop_eval(const PropPtr& f, const std::vector<bool>& values);

// CNF with DIMACS-style literals (1-based, negative = negated).
struct Cnf {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
};

// exists x_1..x_n : #y_1..y_n phi >= 2^(n-1); phi over ids 0..n-1 (x) and
// n..2n-1 (y).
struct EMajSatInstance {
  int n = 0;
  PropPtr phi;
};

struct Qbf {
  std::vector<std::pair<bool, int>> prefix;  // (is_forall, 1-based var)
  Cnf matrix;
};

// Schoenfinkel-Bernays sentences: exists x* forall y* matrix, function-free,
// over equalities and relation atoms; binary domain.
struct EprForm;
using EprPtr = std::shared_ptr<const EprForm>;
struct EprForm {
  enum class Kind { Rel, Equal, Not, And, Or };
  Kind kind = Kind::Rel;
  std::string rel;                // Rel
  std::vector<std::string> args;  // Rel (quantified variables); Equal uses args[0], args[1]
  EprPtr left, right;
};
EprPtr epr_rel(std::string rel, std::vector<std::string> args);
EprPtr epr_equal(std::string a, std::string b);
EprPtr epr_not(EprPtr a);
EprPtr epr_and(EprPtr a, EprPtr b);
EprPtr epr_or(EprPtr a, EprPtr b);

struct EprSentence {
  std::vector<std::string> exists_vars;
  std::vector<std::string> forall_vars;
  EprPtr matrix;
};

// --- reduction compilers -----------------------------------------------------

struct Reduction {
  Signature sig;
  FormulaPtr formula;
  std::string provenance;  // goes into the #!pch header comment
};

// Clause-for-clause encoding: Boolean x becomes P(X=1) > 0.
Reduction reduce_sat3_to_l1(const Cnf& cnf);

// sum_y P(phi') >= sum_{x_1..x_{n-1}} P(T), with x_i -> X_i = 0 and
// y_i -> Y_i = y_i. Binary domain.
Reduction reduce_emajsat_to_l1(const EMajSatInstance& inst);

// Eq.-3 shape plus the causal-ordering gadget: sum_y P([C=0, y] psi') = 2^k.
// With unary_weights the right side is the P(T)-sum encoding.
Reduction reduce_qbf_to_l2(const Qbf& qbf, bool unary_weights = false);

struct CausalOrderGadget {
  std::string control_var;              // fresh variable C; every original
                                        // primitive gains the prefix [C=0]
  std::vector<FormulaPtr> equations;    // c * (|vars|-1) unit equations
};
CausalOrderGadget encode_causal_order(const std::vector<std::string>& vars, int domain_size,
                                      const std::string& control_var, bool unary_weights);

// Eqs. (5)-(9) instantiated for every relation, occurrence, and existential
// variable; binary domain only.
Reduction reduce_epr_to_l3(const EprSentence& sentence, bool unary_weights = false);

// --- formula transformations --------------------------------------------------

// Replaces every Sum node by an explicit Add chain. Output size is capped.
FormulaPtr expand_sums(const FormulaPtr& formula, int domain_size, long node_cap = 250000);
TermPtr expand_sums_term(const TermPtr& term, int domain_size, long node_cap = 250000);

// Replaces P(d|d') by a fresh unknown z with z*P(d') = P(d,d') and
// P(d') != 0. Input must be Sum-free.
struct ConditionalElimination {
  FormulaPtr formula;
  Signature sig;  // input signature plus the fresh unknowns
  bool changed = false;
};
ConditionalElimination eliminate_conditionals(const FormulaPtr& formula, const Signature& sig);

long formula_node_count(const FormulaPtr& formula);

// --- source-format parsers ----------------------------------------------------

Cnf parse_dimacs(const std::string& text);
// DIMACS plus one `x <ids> 0` line listing the existential variables
// (1..n); variables n+1..2n are the counting block.
EMajSatInstance parse_emajsat_dimacs(const std::string& text);
Qbf parse_qdimacs(const std::string& text);
// `exists x1 .. . forall y1 .. . <matrix>` with &, |, !, parentheses,
// R(args) and v = w atoms.
EprSentence parse_epr(const std::string& text);

// Brute-force oracles for the source problems (desk scale; used by the CLI
// for provenance sanity and by the test suites as independent oracles).
bool emajsat_truth(const EMajSatInstance& inst);
bool qbf_truth(const Qbf& qbf);
bool epr_truth(const EprSentence& sentence);

}  // namespace pch
