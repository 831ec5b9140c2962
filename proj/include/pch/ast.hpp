#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pch/errors.hpp"
#include "pch/rational.hpp"

namespace pch {

// Shared value set Val = {0..c-1} plus the declared endogenous variables.
// Dummy (summation) names are collected during validation; they live in a
// separate namespace and may never collide with variable names.
struct Signature {
  int domain_size = 2;
  std::vector<std::string> endogenous;
  std::vector<std::string> dummies;   // binder names seen anywhere
  std::vector<std::string> unknowns;  // free real unknowns (transform outputs)

  int var_index(const std::string& name) const;  // -1 when absent
  bool is_var(const std::string& name) const { return var_index(name) >= 0; }
  bool is_unknown(const std::string& name) const;
  void check() const;  // invariants: c >= 2, unique names, disjoint namespaces
};

// An atom value is either a domain constant or a reference to a dummy.
struct ValueRef {
  int value = 0;
  std::string dummy;  // nonempty => dummy reference

  bool is_dummy() const { return !dummy.empty(); }
  static ValueRef constant(int v) { return {v, {}}; }
  static ValueRef of_dummy(std::string d) { return {0, std::move(d)}; }
  bool operator==(const ValueRef&) const = default;
};

struct Event;
using EventPtr = std::shared_ptr<const Event>;
using Intervention = std::vector<std::pair<std::string, ValueRef>>;

// Tagged tree for propositional / post-interventional / counterfactual
// events. PostInt bodies are propositional by construction (validated).
struct Event {
  enum class Kind { True, Atom, Not, And, PostInt };

  Kind kind = Kind::True;
  std::string var;       // Atom
  ValueRef value;        // Atom
  EventPtr child;        // Not body, PostInt body
  EventPtr left, right;  // And
  Intervention intervention;  // PostInt ([] is the empty list)
  SourceSpan span{};
};

EventPtr ev_true();
EventPtr ev_atom(std::string var, ValueRef value, SourceSpan span = {});
EventPtr ev_atom(std::string var, int value);
EventPtr ev_not(EventPtr e, SourceSpan span = {});
EventPtr ev_and(EventPtr a, EventPtr b, SourceSpan span = {});
// Event-level disjunction is sugar: a | b  ==>  !(!a & !b).
EventPtr ev_or(EventPtr a, EventPtr b, SourceSpan span = {});
EventPtr ev_post_int(Intervention alpha, EventPtr body, SourceSpan span = {});

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Probability terms: P(.), P(.|.), sum binders, +, unary -, *, rational
// constants, and free unknowns introduced by conditional elimination.
struct Term {
  enum class Kind { Prob, CondProb, Sum, Add, Neg, Mul, Const, Unknown };

  Kind kind = Kind::Const;
  EventPtr event;            // Prob, CondProb body
  EventPtr condition;        // CondProb (propositional)
  std::string dummy;         // Sum binder
  TermPtr left, right;       // Sum: left=body; Add/Mul: both; Neg: left
  Rat value;                 // Const
  std::string unknown_name;  // Unknown
  SourceSpan span{};
};

TermPtr t_prob(EventPtr e, SourceSpan span = {});
TermPtr t_cond(EventPtr e, EventPtr given, SourceSpan span = {});
TermPtr t_sum(std::string dummy, TermPtr body, SourceSpan span = {});
TermPtr t_add(TermPtr a, TermPtr b, SourceSpan span = {});
TermPtr t_neg(TermPtr a, SourceSpan span = {});
TermPtr t_mul(TermPtr a, TermPtr b, SourceSpan span = {});
TermPtr t_const(Rat v, SourceSpan span = {});
TermPtr t_unknown(std::string name, SourceSpan span = {});

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Boolean combinations of term inequalities. Le/Not/And is the core;
// the remaining kinds are sugar removed by desugar().
struct Formula {
  enum class Kind { Le, Lt, Eq, Ge, Gt, Ne, Not, And, Or, Implies };

  Kind kind = Kind::Le;
  TermPtr tl, tr;        // comparisons
  FormulaPtr left, right;  // connectives (Not uses left)
  SourceSpan span{};
};

FormulaPtr f_cmp(Formula::Kind kind, TermPtr a, TermPtr b, SourceSpan span = {});
FormulaPtr f_le(TermPtr a, TermPtr b);
FormulaPtr f_eq(TermPtr a, TermPtr b);
FormulaPtr f_not(FormulaPtr a, SourceSpan span = {});
FormulaPtr f_and(FormulaPtr a, FormulaPtr b, SourceSpan span = {});
FormulaPtr f_or(FormulaPtr a, FormulaPtr b, SourceSpan span = {});
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b, SourceSpan span = {});
FormulaPtr f_and_all(std::vector<FormulaPtr> conjuncts);

bool structurally_equal(const EventPtr& a, const EventPtr& b);
bool structurally_equal(const TermPtr& a, const TermPtr& b);
bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);

// Language fragment of a formula: PCH layer, term class, Sigma presence.
struct FragmentTag {
  int layer = 1;  // 1 observational, 2 interventional, 3 counterfactual
  enum class Terms { Base, Lin, Poly } terms = Terms::Base;
  bool has_sigma = false;

  bool operator==(const FragmentTag&) const = default;
};

const char* terms_name(FragmentTag::Terms t);
std::string fragment_to_string(const FragmentTag& tag);

}  // namespace pch
