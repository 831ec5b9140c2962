#include "pch/reduce.hpp"

#include <map>
#include <set>

#include "pch/analysis.hpp"
#include "pch/solve.hpp"

namespace pch {

PropPtr p_var(int id) {
  auto p = std::make_shared<PropForm>();
  p->kind = PropForm::Kind::Var;
  p->var = id;
  return p;
}

PropPtr p_not(PropPtr a) {
  auto p = std::make_shared<PropForm>();
  p->kind = PropForm::Kind::Not;
  p->left = std::move(a);
  return p;
}

static PropPtr p_bin(PropForm::Kind k, PropPtr a, PropPtr b) {
  auto p = std::make_shared<PropForm>();
  p->kind = k;
  p->left = std::move(a);
  p->right = std::move(b);
  return p;
}

PropPtr p_and(PropPtr a, PropPtr b) { return p_bin(PropForm::Kind::And, std::move(a), std::move(b)); }
PropPtr p_or(PropPtr a, PropPtr b) { return p_bin(PropForm::Kind::Or, std::move(a), std::move(b)); }

bool prop_eval(const PropPtr& f, const std::vector<bool>& values) {
  switch (f->kind) {
    case PropForm::Kind::Var: return values[f->var];
    case PropForm::Kind::Not: return !prop_eval(f->left, values);
    case PropForm::Kind::And: return prop_eval(f->left, values) && prop_eval(f->right, values);
    case PropForm::Kind::Or: return prop_eval(f->left, values) || prop_eval(f->right, values);
  }
  return false;
}

EprPtr epr_rel(std::string rel, std::vector<std::string> args) {
  auto e = std::make_shared<EprForm>();
  e->kind = EprForm::Kind::Rel;
  e->rel = std::move(rel);
  e->args = std::move(args);
  return e;
}

EprPtr epr_equal(std::string a, std::string b) {
  auto e = std::make_shared<EprForm>();
  e->kind = EprForm::Kind::Equal;
  e->args = {std::move(a), std::move(b)};
  return e;
}

EprPtr epr_not(EprPtr a) {
  auto e = std::make_shared<EprForm>();
  e->kind = EprForm::Kind::Not;
  e->left = std::move(a);
  return e;
}

static EprPtr epr_bin(EprForm::Kind k, EprPtr a, EprPtr b) {
  auto e = std::make_shared<EprForm>();
  e->kind = k;
  e->left = std::move(a);
  e->right = std::move(b);
  return e;
}

EprPtr epr_and(EprPtr a, EprPtr b) { return epr_bin(EprForm::Kind::And, std::move(a), std::move(b)); }
EprPtr epr_or(EprPtr a, EprPtr b) { return epr_bin(EprForm::Kind::Or, std::move(a), std::move(b)); }

namespace {

// 0 encoded as an in-domain contradiction, 1 as P(T); integer thresholds as
// sums of P(T) when unary encodings are requested.
TermPtr zero_term(const std::string& var) {
  return t_prob(ev_and(ev_atom(var, 0), ev_atom(var, 1)));
}

TermPtr one_term() { return t_prob(ev_true()); }

TermPtr power_of_c_term(int exponent, int domain_size, bool unary, const std::string& dummy_stem) {
  if (!unary) {
    Rat v = 1;
    for (int i = 0; i < exponent; ++i) v *= domain_size;
    return t_const(v);
  }
  TermPtr t = one_term();
  for (int i = exponent; i >= 1; --i) t = t_sum(dummy_stem + std::to_string(i), t);
  return t;
}

EventPtr clause_event(const std::vector<int>& clause, const std::string& var_stem,
                      const std::vector<std::string>& names) {
  EventPtr acc;
  for (int lit : clause) {
    int v = std::abs(lit) - 1;
    EventPtr atom = ev_atom(names.empty() ? var_stem + std::to_string(v + 1) : names[v],
                            lit > 0 ? 1 : 0);
    acc = acc ? ev_or(acc, atom) : atom;
  }
  if (!acc) acc = ev_and(ev_atom(names.empty() ? var_stem + "1" : names[0], 0),
                         ev_atom(names.empty() ? var_stem + "1" : names[0], 1));
  return acc;
}

}  // namespace

// ---------------------------------------------------------------------------

Reduction reduce_sat3_to_l1(const Cnf& cnf) {
  Reduction out;
  out.sig.domain_size = 2;
  for (int i = 1; i <= cnf.num_vars; ++i) out.sig.endogenous.push_back("X" + std::to_string(i));

  std::vector<FormulaPtr> conjuncts;
  for (const auto& clause : cnf.clauses) {
    FormulaPtr acc;
    for (int lit : clause) {
      if (lit == 0 || std::abs(lit) > cnf.num_vars)
        throw PchError(ErrorCode::DomainError, "literal out of range in CNF");
      std::string var = "X" + std::to_string(std::abs(lit));
      // Boolean x  ==>  P(X=1) > 0
      FormulaPtr atom = f_cmp(Formula::Kind::Gt, t_prob(ev_atom(var, 1)), zero_term(var));
      if (lit < 0) atom = f_not(atom);
      acc = acc ? f_or(acc, atom) : atom;
    }
    if (!acc) {  // empty clause is unsatisfiable
      std::string var = out.sig.endogenous.empty() ? "X1" : out.sig.endogenous[0];
      if (out.sig.endogenous.empty()) out.sig.endogenous.push_back(var);
      acc = f_cmp(Formula::Kind::Gt, zero_term(var), zero_term(var));
    }
    conjuncts.push_back(acc);
  }
  if (out.sig.endogenous.empty()) out.sig.endogenous.push_back("X1");
  out.formula = conjuncts.empty() ? f_le(one_term(), one_term()) : f_and_all(conjuncts);
  out.provenance = "reduce=sat3 vars=" + std::to_string(cnf.num_vars) +
                   " clauses=" + std::to_string(cnf.clauses.size());
  validate(out.formula, out.sig);
  return out;
}

namespace {

EventPtr emajsat_event(const PropPtr& phi, int n) {
  switch (phi->kind) {
    case PropForm::Kind::Var:
      if (phi->var < n) return ev_atom("X" + std::to_string(phi->var + 1), 0);
      return ev_atom("Y" + std::to_string(phi->var - n + 1),
                     ValueRef::of_dummy("y" + std::to_string(phi->var - n + 1)));
    case PropForm::Kind::Not:
      return ev_not(emajsat_event(phi->left, n));
    case PropForm::Kind::And:
      return ev_and(emajsat_event(phi->left, n), emajsat_event(phi->right, n));
    case PropForm::Kind::Or:
      return ev_or(emajsat_event(phi->left, n), emajsat_event(phi->right, n));
  }
  throw PchError(ErrorCode::Internal, "bad PropForm");
}

}  // namespace

Reduction reduce_emajsat_to_l1(const EMajSatInstance& inst) {
  if (inst.n < 1) throw PchError(ErrorCode::DomainError, "E-MajSat instance needs n >= 1");
  Reduction out;
  out.sig.domain_size = 2;
  for (int i = 1; i <= inst.n; ++i) out.sig.endogenous.push_back("X" + std::to_string(i));
  for (int i = 1; i <= inst.n; ++i) out.sig.endogenous.push_back("Y" + std::to_string(i));

  TermPtr lhs = t_prob(emajsat_event(inst.phi, inst.n));
  for (int i = inst.n; i >= 1; --i) lhs = t_sum("y" + std::to_string(i), lhs);
  // Threshold 2^(n-1) in the sum-of-P(T) encoding.
  TermPtr rhs = power_of_c_term(inst.n - 1, 2, true, "x");
  out.formula = f_cmp(Formula::Kind::Ge, lhs, rhs);
  out.provenance = "reduce=emajsat n=" + std::to_string(inst.n);
  validate(out.formula, out.sig);
  return out;
}

// ---------------------------------------------------------------------------

CausalOrderGadget encode_causal_order(const std::vector<std::string>& vars, int domain_size,
                                      const std::string& control_var, bool unary_weights) {
  CausalOrderGadget out;
  out.control_var = control_var;
  for (std::size_t j = 1; j < vars.size(); ++j) {
    for (int k = 0; k < domain_size; ++k) {
      Intervention alpha{{control_var, ValueRef::constant(1)},
                         {vars[j - 1], ValueRef::constant(k)}};
      TermPtr lhs = t_prob(ev_post_int(std::move(alpha), ev_atom(vars[j], k)));
      TermPtr one = unary_weights ? one_term() : t_const(Rat(1));
      out.equations.push_back(f_eq(lhs, one));
    }
  }
  return out;
}

Reduction reduce_qbf_to_l2(const Qbf& qbf, bool unary_weights) {
  int n = static_cast<int>(qbf.prefix.size());
  if (n < 1) throw PchError(ErrorCode::DomainError, "QBF needs at least one variable");
  std::set<int> seen;
  for (const auto& [q, v] : qbf.prefix) {
    if (v < 1 || v > n || !seen.insert(v).second)
      throw PchError(ErrorCode::DomainError, "QBF prefix must name each variable 1..n once");
  }

  Reduction out;
  out.sig.domain_size = 2;
  std::vector<std::string> names(n + 1);
  for (int i = 1; i <= n; ++i) {
    names[i] = "V" + std::to_string(i);
    out.sig.endogenous.push_back(names[i]);
  }

  bool gadget = n >= 2;
  std::string control = "C";
  std::vector<FormulaPtr> conjuncts;
  if (gadget) {
    out.sig.endogenous.push_back(control);
    std::vector<std::string> ordered;
    for (const auto& [q, v] : qbf.prefix) ordered.push_back(names[v]);
    auto g = encode_causal_order(ordered, 2, control, unary_weights);
    conjuncts.insert(conjuncts.end(), g.equations.begin(), g.equations.end());
  }

  // psi' with positive literals as V=1, negative as V=0.
  std::vector<std::string> clause_names(names.begin() + 1, names.end());
  EventPtr psi;
  for (const auto& clause : qbf.matrix.clauses) {
    EventPtr ce = clause_event(clause, "V", clause_names);
    psi = psi ? ev_and(psi, ce) : ce;
  }
  if (!psi) psi = ev_true();

  Intervention alpha;
  if (gadget) alpha.emplace_back(control, ValueRef::constant(0));
  int k = 0;
  for (const auto& [is_forall, v] : qbf.prefix) {
    if (!is_forall) continue;
    ++k;
    alpha.emplace_back(names[v], ValueRef::of_dummy("v" + std::to_string(v)));
  }
  TermPtr lhs = t_prob(ev_post_int(std::move(alpha), psi));
  for (auto it = qbf.prefix.rbegin(); it != qbf.prefix.rend(); ++it)
    if (it->first) lhs = t_sum("v" + std::to_string(it->second), lhs);

  TermPtr rhs = power_of_c_term(k, 2, unary_weights, "w");
  conjuncts.push_back(f_eq(lhs, rhs));
  out.formula = f_and_all(std::move(conjuncts));
  out.provenance = "reduce=qbf n=" + std::to_string(n) +
                   " clauses=" + std::to_string(qbf.matrix.clauses.size()) +
                   " foralls=" + std::to_string(k);
  validate(out.formula, out.sig);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct EprOccurrence {
  std::string rel;
  std::string var;                // the occurrence's random variable O_<rel>_<j>
  std::vector<std::string> args;  // quantified source variables
};

struct EprContext {
  const EprSentence& s;
  std::map<std::string, std::string> var_name;  // quantified var -> X_/Y_ name
  std::map<std::string, int> arity;             // relation -> arity
  std::map<std::string, int> occ_count;
  std::vector<EprOccurrence> occurrences;  // in matrix walk order
  std::vector<std::string> endo;           // full endogenous list
  std::vector<std::string> forall_names;

  std::string slot_name(const std::string& rel, int l) const {
    return "Z_" + rel + "_" + std::to_string(l + 1);
  }
  std::string rel_name(const std::string& rel) const { return "R_" + rel; }
};

void epr_scan(const EprPtr& e, EprContext& ctx) {
  switch (e->kind) {
    case EprForm::Kind::Rel: {
      auto [it, fresh] = ctx.arity.emplace(e->rel, static_cast<int>(e->args.size()));
      if (!fresh && it->second != static_cast<int>(e->args.size()))
        throw PchError(ErrorCode::ArityError,
                       "relation '" + e->rel + "' used with inconsistent arities");
      std::set<std::string> distinct(e->args.begin(), e->args.end());
      if (distinct.size() != e->args.size())
        throw PchError(ErrorCode::ArityError,
                       "occurrence of '" + e->rel +
                           "' repeats an argument variable; the construction needs distinct slots");
      for (const auto& a : e->args)
        if (!ctx.var_name.count(a))
          throw PchError(ErrorCode::UnknownVariable, "unquantified variable '" + a + "'");
      int j = ++ctx.occ_count[e->rel];
      ctx.occurrences.push_back({e->rel, "O_" + e->rel + "_" + std::to_string(j), e->args});
      return;
    }
    case EprForm::Kind::Equal:
      for (const auto& a : e->args)
        if (!ctx.var_name.count(a))
          throw PchError(ErrorCode::UnknownVariable, "unquantified variable '" + a + "'");
      return;
    case EprForm::Kind::Not:
      epr_scan(e->left, ctx);
      return;
    case EprForm::Kind::And:
    case EprForm::Kind::Or:
      epr_scan(e->left, ctx);
      epr_scan(e->right, ctx);
      return;
  }
}

// X=Y over binary values: (X=0 & Y=0) | (X=1 & Y=1), with each side under
// its own intervention.
EventPtr equal_event(const Intervention& a1, const std::string& v1, const Intervention& a2,
                     const std::string& v2) {
  auto side = [&](int k) {
    return ev_and(ev_post_int(a1, ev_atom(v1, k)), ev_post_int(a2, ev_atom(v2, k)));
  };
  return ev_or(side(0), side(1));
}

EventPtr neq_event(const Intervention& a1, const std::string& v1, const Intervention& a2,
                   const std::string& v2) {
  return ev_not(equal_event(a1, v1, a2, v2));
}

// Wraps a term in sums over the given (dummy, _) list, innermost last.
TermPtr sum_over(TermPtr t, const std::vector<std::string>& dummies) {
  for (auto it = dummies.rbegin(); it != dummies.rend(); ++it) t = t_sum(*it, std::move(t));
  return t;
}

EventPtr epr_matrix_event(const EprPtr& e, const EprContext& ctx, std::size_t& occ_index) {
  switch (e->kind) {
    case EprForm::Kind::Rel:
      return ev_atom(ctx.occurrences[occ_index++].var, 1);
    case EprForm::Kind::Equal: {
      const std::string& a = ctx.var_name.at(e->args[0]);
      const std::string& b = ctx.var_name.at(e->args[1]);
      return ev_or(ev_and(ev_atom(a, 0), ev_atom(b, 0)), ev_and(ev_atom(a, 1), ev_atom(b, 1)));
    }
    case EprForm::Kind::Not:
      return ev_not(epr_matrix_event(e->left, ctx, occ_index));
    case EprForm::Kind::And:
      return ev_and(epr_matrix_event(e->left, ctx, occ_index),
                    epr_matrix_event(e->right, ctx, occ_index));
    case EprForm::Kind::Or:
      return ev_or(epr_matrix_event(e->left, ctx, occ_index),
                   epr_matrix_event(e->right, ctx, occ_index));
  }
  throw PchError(ErrorCode::Internal, "bad EprForm");
}

}  // namespace

Reduction reduce_epr_to_l3(const EprSentence& sentence, bool unary_weights) {
  EprContext ctx{sentence, {}, {}, {}, {}, {}, {}};
  std::set<std::string> declared;
  for (const auto& v : sentence.exists_vars) {
    if (!declared.insert(v).second)
      throw PchError(ErrorCode::DuplicateName, "variable '" + v + "' quantified twice");
    ctx.var_name[v] = "X_" + v;
  }
  for (const auto& v : sentence.forall_vars) {
    if (!declared.insert(v).second)
      throw PchError(ErrorCode::DuplicateName, "variable '" + v + "' quantified twice");
    ctx.var_name[v] = "Y_" + v;
    ctx.forall_names.push_back("Y_" + v);
  }
  if (!sentence.matrix) throw PchError(ErrorCode::DomainError, "EPR sentence has no matrix");

  epr_scan(sentence.matrix, ctx);

  // Endogenous order: existential, universal, slots, relations, occurrences.
  for (const auto& v : sentence.exists_vars) ctx.endo.push_back(ctx.var_name[v]);
  for (const auto& v : sentence.forall_vars) ctx.endo.push_back(ctx.var_name[v]);
  for (const auto& [rel, k] : ctx.arity)
    for (int l = 0; l < k; ++l) ctx.endo.push_back(ctx.slot_name(rel, l));
  for (const auto& [rel, k] : ctx.arity) ctx.endo.push_back(ctx.rel_name(rel));
  for (const auto& occ : ctx.occurrences) ctx.endo.push_back(occ.var);

  Reduction out;
  out.sig.domain_size = 2;
  out.sig.endogenous = ctx.endo;
  {
    std::set<std::string> unique(ctx.endo.begin(), ctx.endo.end());
    if (unique.size() != ctx.endo.size())
      throw PchError(ErrorCode::DuplicateName, "generated variable names collide");
  }

  const std::size_t n_endo = ctx.endo.size();
  std::vector<std::string> v_dummies;  // one per endogenous variable
  for (std::size_t i = 0; i < n_endo; ++i) v_dummies.push_back("v" + std::to_string(i + 1));
  auto v_dummy_of = [&](const std::string& var) {
    for (std::size_t i = 0; i < n_endo; ++i)
      if (ctx.endo[i] == var) return v_dummies[i];
    throw PchError(ErrorCode::Internal, "unknown endogenous variable " + var);
  };

  auto everything_except = [&](const std::set<std::string>& excluded) {
    Intervention alpha;
    for (const auto& var : ctx.endo)
      if (!excluded.count(var)) alpha.emplace_back(var, ValueRef::of_dummy(v_dummy_of(var)));
    return alpha;
  };

  std::vector<FormulaPtr> conjuncts;
  TermPtr zero = unary_weights ? zero_term(ctx.endo[0]) : t_const(Rat(0));

  // Relation functionality: each relation responds only to its slots.
  for (const auto& [rel, k] : ctx.arity) {
    Intervention slots;
    for (int l = 0; l < k; ++l)
      slots.emplace_back(ctx.slot_name(rel, l), ValueRef::of_dummy(v_dummy_of(ctx.slot_name(rel, l))));
    Intervention rest = everything_except({ctx.rel_name(rel)});
    TermPtr body = t_prob(neq_event(slots, ctx.rel_name(rel), rest, ctx.rel_name(rel)));
    conjuncts.push_back(f_eq(sum_over(body, v_dummies), zero));
  }

  // Occurrence functionality: occurrence variables respond only to their arguments.
  for (const auto& occ : ctx.occurrences) {
    Intervention arg_ivn;
    for (const auto& a : occ.args)
      arg_ivn.emplace_back(ctx.var_name.at(a), ValueRef::of_dummy(v_dummy_of(ctx.var_name.at(a))));
    Intervention rest = everything_except({occ.var});
    TermPtr body = t_prob(neq_event(arg_ivn, occ.var, rest, occ.var));
    conjuncts.push_back(f_eq(sum_over(body, v_dummies), zero));

    // Consistency: the occurrence agrees with its relation on equal arguments.
    std::vector<std::string> t_dummies;
    for (std::size_t l = 0; l < occ.args.size(); ++l)
      t_dummies.push_back("t" + std::to_string(l + 1));
    Intervention occ_args, rel_slots;
    for (std::size_t l = 0; l < occ.args.size(); ++l) {
      occ_args.emplace_back(ctx.var_name.at(occ.args[l]), ValueRef::of_dummy(t_dummies[l]));
      rel_slots.emplace_back(ctx.slot_name(occ.rel, static_cast<int>(l)),
                             ValueRef::of_dummy(t_dummies[l]));
    }
    TermPtr body7 = t_prob(neq_event(occ_args, occ.var, rel_slots, ctx.rel_name(occ.rel)));
    conjuncts.push_back(f_eq(sum_over(body7, t_dummies), zero));
  }

  // Independence: existential variables are unaffected by the universal block.
  std::vector<std::string> yprime;
  for (std::size_t j = 0; j < ctx.forall_names.size(); ++j)
    yprime.push_back("w" + std::to_string(j + 1));
  for (const auto& v : sentence.exists_vars) {
    const std::string xv = ctx.var_name[v];
    Intervention first = everything_except({xv});
    std::set<std::string> excluded{xv};
    for (const auto& yn : ctx.forall_names) excluded.insert(yn);
    Intervention second = everything_except(excluded);
    for (std::size_t j = 0; j < ctx.forall_names.size(); ++j)
      second.emplace_back(ctx.forall_names[j], ValueRef::of_dummy(yprime[j]));
    TermPtr body = t_prob(neq_event(first, xv, second, xv));
    std::vector<std::string> all_dummies = v_dummies;
    all_dummies.insert(all_dummies.end(), yprime.begin(), yprime.end());
    conjuncts.push_back(f_eq(sum_over(body, all_dummies), zero));
  }

  // Main condition: sum_y P([y] psi') = 2^n over the universal block.
  std::vector<std::string> y_dummies;
  for (std::size_t j = 0; j < ctx.forall_names.size(); ++j)
    y_dummies.push_back("y" + std::to_string(j + 1));
  Intervention y_ivn;
  for (std::size_t j = 0; j < ctx.forall_names.size(); ++j)
    y_ivn.emplace_back(ctx.forall_names[j], ValueRef::of_dummy(y_dummies[j]));
  std::size_t occ_index = 0;
  EventPtr psi = epr_matrix_event(sentence.matrix, ctx, occ_index);
  TermPtr main_lhs = sum_over(t_prob(ev_post_int(y_ivn, psi)), y_dummies);
  TermPtr main_rhs =
      power_of_c_term(static_cast<int>(ctx.forall_names.size()), 2, unary_weights, "u");
  conjuncts.push_back(f_eq(main_lhs, main_rhs));

  out.formula = f_and_all(std::move(conjuncts));
  out.provenance = "reduce=epr exists=" + std::to_string(sentence.exists_vars.size()) +
                   " foralls=" + std::to_string(sentence.forall_vars.size()) +
                   " relations=" + std::to_string(ctx.arity.size());
  validate(out.formula, out.sig);
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force source oracles.

bool emajsat_truth(const EMajSatInstance& inst) {
  int n = inst.n;
  long threshold = 1L << (n - 1);
  for (long x = 0; x < (1L << n); ++x) {
    long count = 0;
    for (long y = 0; y < (1L << n); ++y) {
      std::vector<bool> values(2 * n);
      for (int i = 0; i < n; ++i) values[i] = (x >> i) & 1;
      for (int i = 0; i < n; ++i) values[n + i] = (y >> i) & 1;
      if (prop_eval(inst.phi, values)) ++count;
    }
    if (count >= threshold) return true;
  }
  return false;
}

namespace {

bool qbf_rec(const Qbf& qbf, std::size_t level, std::vector<bool>& values) {
  if (level == qbf.prefix.size()) {
    for (const auto& clause : qbf.matrix.clauses) {
      bool sat = false;
      for (int lit : clause)
        if (values[std::abs(lit) - 1] == (lit > 0)) {
          sat = true;
          break;
        }
      if (!sat) return false;
    }
    return true;
  }
  auto [is_forall, v] = qbf.prefix[level];
  bool r0, r1;
  values[v - 1] = false;
  r0 = qbf_rec(qbf, level + 1, values);
  if (is_forall && !r0) return false;
  if (!is_forall && r0) return true;
  values[v - 1] = true;
  r1 = qbf_rec(qbf, level + 1, values);
  return is_forall ? (r0 && r1) : (r0 || r1);
}

bool epr_eval(const EprPtr& e, const std::map<std::string, bool>& env,
              const std::map<std::string, std::vector<bool>>& rels,
              const std::map<std::string, int>& arity) {
  switch (e->kind) {
    case EprForm::Kind::Rel: {
      int idx = 0;
      for (const auto& a : e->args) idx = idx * 2 + (env.at(a) ? 1 : 0);
      (void)arity;
      return rels.at(e->rel)[idx];
    }
    case EprForm::Kind::Equal:
      return env.at(e->args[0]) == env.at(e->args[1]);
    case EprForm::Kind::Not:
      return !epr_eval(e->left, env, rels, arity);
    case EprForm::Kind::And:
      return epr_eval(e->left, env, rels, arity) && epr_eval(e->right, env, rels, arity);
    case EprForm::Kind::Or:
      return epr_eval(e->left, env, rels, arity) || epr_eval(e->right, env, rels, arity);
  }
  return false;
}

void epr_arities(const EprPtr& e, std::map<std::string, int>& arity) {
  switch (e->kind) {
    case EprForm::Kind::Rel:
      arity.emplace(e->rel, static_cast<int>(e->args.size()));
      return;
    case EprForm::Kind::Equal:
      return;
    case EprForm::Kind::Not:
      epr_arities(e->left, arity);
      return;
    case EprForm::Kind::And:
    case EprForm::Kind::Or:
      epr_arities(e->left, arity);
      epr_arities(e->right, arity);
      return;
  }
}

}  // namespace

bool qbf_truth(const Qbf& qbf) {
  std::vector<bool> values(qbf.prefix.size());
  return qbf_rec(qbf, 0, values);
}

bool epr_truth(const EprSentence& s) {
  std::map<std::string, int> arity;
  epr_arities(s.matrix, arity);
  // Enumerate relation interpretations over the binary domain.
  std::vector<std::pair<std::string, int>> rel_list(arity.begin(), arity.end());
  long total_bits = 0;
  for (const auto& [r, k] : rel_list) total_bits += 1L << k;
  if (total_bits > 24) throw PchError(ErrorCode::CapExceeded, "EPR oracle instance too large");

  for (long code = 0; code < (1L << total_bits); ++code) {
    std::map<std::string, std::vector<bool>> rels;
    long offset = 0;
    for (const auto& [r, k] : rel_list) {
      std::vector<bool> table(1L << k);
      for (long i = 0; i < (1L << k); ++i) table[i] = (code >> (offset + i)) & 1;
      rels[r] = std::move(table);
      offset += 1L << k;
    }
    // exists x: for all y: matrix
    long nx = static_cast<long>(s.exists_vars.size());
    long ny = static_cast<long>(s.forall_vars.size());
    for (long xs = 0; xs < (1L << nx); ++xs) {
      bool all_y = true;
      for (long ys = 0; ys < (1L << ny) && all_y; ++ys) {
        std::map<std::string, bool> env;
        for (long i = 0; i < nx; ++i) env[s.exists_vars[i]] = (xs >> i) & 1;
        for (long i = 0; i < ny; ++i) env[s.forall_vars[i]] = (ys >> i) & 1;
        if (!epr_eval(s.matrix, env, rels, arity)) all_y = false;
      }
      if (all_y) return true;
    }
  }
  return false;
}

}  // namespace pch
