#pragma once

// Shared fixtures, deterministic generators, and independent oracles for the
// test suites. Everything here is test-only and stays independent of the
// implementation paths it checks.

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "pch/analysis.hpp"
#include "pch/eval.hpp"
#include "pch/parser.hpp"
#include "pch/reduce.hpp"
#include "pch/solve.hpp"

namespace pchtest {

using namespace pch;

inline std::string data_path(const std::string& name) {
  return std::string(PCH_DATA_DIR) + "/" + name;
}

inline Scm load_appb() { return parse_model_file(data_path("appb.scm")); }
inline Scm load_sec3_m() { return parse_model_file(data_path("sec3-m.scm")); }
inline Scm load_sec3_mprime() { return parse_model_file(data_path("sec3-mprime.scm")); }

inline Signature make_sig(std::vector<std::string> vars, int c = 2) {
  Signature sig;
  sig.domain_size = c;
  sig.endogenous = std::move(vars);
  return sig;
}

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); }

// A model whose joint endogenous distribution is an explicit table: one
// selector exogenous variable, one constant-mechanism column per assignment.
inline Scm scm_from_distribution(const Signature& sig, const std::vector<Rat>& weights) {
  std::size_t n = sig.endogenous.size();
  long cells = 1;
  for (std::size_t i = 0; i < n; ++i) cells *= sig.domain_size;
  if (static_cast<long>(weights.size()) != cells) throw std::runtime_error("bad weight count");
  Scm scm;
  scm.sig.domain_size = sig.domain_size;
  scm.sig.endogenous = sig.endogenous;
  scm.exo_vars.emplace_back("W", static_cast<int>(cells));
  for (long j = 0; j < cells; ++j) scm.exo_dist.push_back({{static_cast<int>(j)}, weights[j]});
  for (std::size_t i = 0; i < n; ++i) {
    Mechanism m;
    m.exo_parents = {"W"};
    for (long j = 0; j < cells; ++j) {
      long div = 1;
      for (std::size_t q = i + 1; q < n; ++q) div *= sig.domain_size;
      m.table.push_back(static_cast<int>((j / div) % sig.domain_size));
    }
    scm.mechanisms.push_back(std::move(m));
  }
  scm.check();
  return scm;
}

inline std::vector<Rat> random_distribution(Rng& rng, long cells) {
  std::vector<Int> raw(cells);
  Int total = 0;
  for (long j = 0; j < cells; ++j) {
    raw[j] = pick(rng, 5);  // zeros allowed
    total += raw[j];
  }
  if (total == 0) {
    raw[pick(rng, static_cast<int>(cells))] = 1;
    total = 1;
  }
  std::vector<Rat> out;
  for (long j = 0; j < cells; ++j) out.emplace_back(raw[j], total);
  return out;
}

// Random SCM with real mechanism structure (full tables over preceding
// variables, one exogenous variable).
inline Scm random_scm(Rng& rng, int n_endo, int c = 2, int exo_domain = 4) {
  Scm scm;
  scm.sig.domain_size = c;
  for (int i = 1; i <= n_endo; ++i) scm.sig.endogenous.push_back("V" + std::to_string(i));
  scm.exo_vars.emplace_back("U", exo_domain);
  std::vector<Int> raw(exo_domain);
  Int total = 0;
  for (int j = 0; j < exo_domain; ++j) {
    raw[j] = pick(rng, 6) + 1;
    total += raw[j];
  }
  for (int j = 0; j < exo_domain; ++j) scm.exo_dist.push_back({{j}, Rat(raw[j], total)});
  for (int i = 0; i < n_endo; ++i) {
    Mechanism m;
    for (int q = 0; q < i; ++q) m.endo_parents.push_back(scm.sig.endogenous[q]);
    m.exo_parents = {"U"};
    long entries = exo_domain;
    for (int q = 0; q < i; ++q) entries *= c;
    for (long k = 0; k < entries; ++k) m.table.push_back(pick(rng, c));
    scm.mechanisms.push_back(std::move(m));
  }
  scm.check();
  return scm;
}

// Renames the endogenous variables of a generated model, consistently with
// every mechanism's parent references.
inline Scm rename_vars(Scm scm, const std::vector<std::string>& names) {
  if (names.size() != scm.sig.endogenous.size()) throw std::runtime_error("bad rename");
  std::map<std::string, std::string> map;
  for (std::size_t i = 0; i < names.size(); ++i) map[scm.sig.endogenous[i]] = names[i];
  scm.sig.endogenous = names;
  for (auto& m : scm.mechanisms)
    for (auto& p : m.endo_parents) p = map.at(p);
  scm.check();
  return scm;
}

// Propositional event over the given variables; atom values may reference
// the given dummies.
inline EventPtr random_event(Rng& rng, const std::vector<std::string>& vars,
                             const std::vector<std::string>& dummies, int c, int depth,
                             bool allow_negation = true) {
  int roll = pick(rng, depth <= 0 ? 2 : (allow_negation ? 8 : 6));
  if (roll < 2) {
    const std::string& var = vars[pick(rng, static_cast<int>(vars.size()))];
    bool use_dummy = !dummies.empty() && pick(rng, 2) == 0;
    ValueRef v = use_dummy ? ValueRef::of_dummy(dummies[pick(rng, static_cast<int>(dummies.size()))])
                           : ValueRef::constant(pick(rng, c));
    return ev_atom(var, v);
  }
  if (roll < 6)
    return ev_and(random_event(rng, vars, dummies, c, depth - 1, allow_negation),
                  random_event(rng, vars, dummies, c, depth - 1, allow_negation));
  return ev_not(random_event(rng, vars, dummies, c, depth - 1, allow_negation));
}

// Layer-1 sum term: up to max_sums nested binders over one primitive.
inline TermPtr random_l1_sum_term(Rng& rng, const std::vector<std::string>& vars, int c,
                                  int max_sums) {
  int n_sums = pick(rng, max_sums + 1);
  std::vector<std::string> binders;
  for (int i = 0; i < n_sums; ++i) binders.push_back("d" + std::to_string(i + 1));
  TermPtr t = t_prob(random_event(rng, vars, binders, c, 3));
  for (auto it = binders.rbegin(); it != binders.rend(); ++it) t = t_sum(*it, t);
  return t;
}

// Layer-2 primitive under sums: [alpha] body with at most one prefix.
inline TermPtr random_l2_sum_term(Rng& rng, const std::vector<std::string>& vars, int c,
                                  int max_sums) {
  int n_sums = pick(rng, max_sums + 1);
  std::vector<std::string> binders;
  for (int i = 0; i < n_sums; ++i) binders.push_back("s" + std::to_string(i + 1));

  Intervention alpha;
  for (const auto& var : vars) {
    int roll = pick(rng, 3);
    if (roll == 0) continue;
    if (roll == 1 || binders.empty())
      alpha.emplace_back(var, ValueRef::constant(pick(rng, c)));
    else
      alpha.emplace_back(var, ValueRef::of_dummy(binders[pick(rng, static_cast<int>(binders.size()))]));
  }
  EventPtr body = random_event(rng, vars, binders, c, 2);
  TermPtr t = t_prob(alpha.empty() && pick(rng, 2) == 0 ? body : ev_post_int(alpha, body));
  for (auto it = binders.rbegin(); it != binders.rend(); ++it) t = t_sum(*it, t);
  return t;
}

// Grammar-driven random formulas for round-trip and solver property tests.
inline TermPtr random_term(Rng& rng, const std::vector<std::string>& vars,
                           std::vector<std::string> bound, int c, int depth, bool allow_poly,
                           int layer) {
  int roll = pick(rng, depth <= 0 ? 3 : (allow_poly ? 12 : 9));
  if (roll < 2) {
    EventPtr ev = random_event(rng, vars, bound, c, 2);
    if (layer >= 2 && pick(rng, 2) == 0) {
      Intervention alpha;
      for (const auto& var : vars)
        if (pick(rng, 3) == 0) alpha.emplace_back(var, ValueRef::constant(pick(rng, c)));
      ev = ev_post_int(alpha, ev);
      if (layer >= 3 && pick(rng, 2) == 0) ev = ev_not(ev);
    }
    return t_prob(ev);
  }
  if (roll == 2) return t_const(Rat(pick(rng, 7) - 2, pick(rng, 4) + 1));
  if (roll < 5) {
    std::string d = "b" + std::to_string(bound.size() + 1);
    bound.push_back(d);
    return t_sum(d, random_term(rng, vars, bound, c, depth - 1, allow_poly, layer));
  }
  if (roll < 7)
    return t_add(random_term(rng, vars, bound, c, depth - 1, allow_poly, layer),
                 random_term(rng, vars, bound, c, depth - 1, allow_poly, layer));
  if (roll < 9) return t_neg(random_term(rng, vars, bound, c, depth - 1, allow_poly, layer));
  if (roll < 11)
    return t_mul(random_term(rng, vars, bound, c, depth - 1, allow_poly, layer),
                 random_term(rng, vars, bound, c, depth - 1, allow_poly, layer));
  return t_cond(random_event(rng, vars, bound, c, 2), random_event(rng, vars, bound, c, 2));
}

inline FormulaPtr random_formula(Rng& rng, const std::vector<std::string>& vars, int c, int depth,
                                 bool allow_poly = false, int layer = 1) {
  if (depth <= 0 || pick(rng, 3) == 0) {
    static const Formula::Kind kinds[] = {Formula::Kind::Le, Formula::Kind::Lt,
                                          Formula::Kind::Eq, Formula::Kind::Ge,
                                          Formula::Kind::Gt, Formula::Kind::Ne};
    return f_cmp(kinds[pick(rng, 6)], random_term(rng, vars, {}, c, 2, allow_poly, layer),
                 random_term(rng, vars, {}, c, 2, allow_poly, layer));
  }
  switch (pick(rng, 4)) {
    case 0:
      return f_not(random_formula(rng, vars, c, depth - 1, allow_poly, layer));
    case 1:
      return f_and(random_formula(rng, vars, c, depth - 1, allow_poly, layer),
                   random_formula(rng, vars, c, depth - 1, allow_poly, layer));
    case 2:
      return f_or(random_formula(rng, vars, c, depth - 1, allow_poly, layer),
                  random_formula(rng, vars, c, depth - 1, allow_poly, layer));
    default:
      return f_implies(random_formula(rng, vars, c, depth - 1, allow_poly, layer),
                       random_formula(rng, vars, c, depth - 1, allow_poly, layer));
  }
}

// --- enumerated source-problem families (desk-scale oracles) -----------------

// All E-MajSat instances with phi a conjunction or disjunction of <= 3
// distinct literals over x_1..x_n, y_1..y_n.
inline std::vector<EMajSatInstance> emajsat_family(int max_n) {
  std::vector<EMajSatInstance> out;
  for (int n = 1; n <= max_n; ++n) {
    int lits = 4 * n;  // 2n variables, two polarities
    std::vector<std::vector<int>> sets;
    for (int a = 0; a < lits; ++a) {
      sets.push_back({a});
      for (int b = a + 1; b < lits; ++b) {
        sets.push_back({a, b});
        for (int d = b + 1; d < lits; ++d) sets.push_back({a, b, d});
      }
    }
    for (const auto& ids : sets)
      for (int conj = 0; conj < 2; ++conj) {
        PropPtr phi;
        for (int lit : ids) {
          PropPtr p = p_var(lit / 2);
          if (lit % 2) p = p_not(p);
          phi = !phi ? p : (conj ? p_and(phi, p) : p_or(phi, p));
        }
        out.push_back({n, phi});
      }
  }
  return out;
}

// All QBFs with n variables and clause sets of size 1..3 drawn from the
// nonempty sign patterns.
inline std::vector<Qbf> qbf_family(int n) {
  std::vector<std::vector<int>> clauses;
  int patterns = 1;
  for (int i = 0; i < n; ++i) patterns *= 3;
  for (int code = 1; code < patterns; ++code) {
    std::vector<int> clause;
    int rest = code;
    for (int v = 1; v <= n; ++v) {
      int s = rest % 3;
      rest /= 3;
      if (s == 1) clause.push_back(v);
      if (s == 2) clause.push_back(-v);
    }
    if (!clause.empty()) clauses.push_back(clause);
  }

  std::vector<Qbf> out;
  int m = static_cast<int>(clauses.size());
  std::vector<std::vector<int>> sets;
  for (int a = 0; a < m; ++a) {
    sets.push_back({a});
    for (int b = a + 1; b < m; ++b) {
      sets.push_back({a, b});
      for (int d = b + 1; d < m; ++d) sets.push_back({a, b, d});
    }
  }
  for (int prefix_code = 0; prefix_code < (1 << n); ++prefix_code) {
    for (const auto& set : sets) {
      Qbf q;
      for (int v = 1; v <= n; ++v) q.prefix.emplace_back((prefix_code >> (v - 1)) & 1, v);
      q.matrix.num_vars = n;
      for (int idx : set) q.matrix.clauses.push_back(clauses[idx]);
      out.push_back(std::move(q));
    }
  }
  return out;
}

// Fixed EPR suite (shipped under data/sources/epr/): <= 2 quantified
// variables, <= 1 unary relation.
inline std::vector<std::pair<std::string, EprSentence>> epr_suite() {
  std::vector<std::pair<std::string, EprSentence>> out;
  for (int i = 1; i <= 14; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "sources/epr/epr%02d.epr", i);
    std::string text = read_text_file(data_path(name));
    out.emplace_back(text, parse_epr(text));
  }
  return out;
}

// Replaces declared unknowns by rational constants (transform equisat checks).
inline TermPtr substitute_unknown_term(const TermPtr& t, const std::string& name, const Rat& v) {
  switch (t->kind) {
    case Term::Kind::Unknown:
      return t->unknown_name == name ? t_const(v) : t;
    case Term::Kind::Sum:
      return t_sum(t->dummy, substitute_unknown_term(t->left, name, v));
    case Term::Kind::Add:
      return t_add(substitute_unknown_term(t->left, name, v),
                   substitute_unknown_term(t->right, name, v));
    case Term::Kind::Mul:
      return t_mul(substitute_unknown_term(t->left, name, v),
                   substitute_unknown_term(t->right, name, v));
    case Term::Kind::Neg:
      return t_neg(substitute_unknown_term(t->left, name, v));
    default:
      return t;
  }
}

inline FormulaPtr substitute_unknown(const FormulaPtr& f, const std::string& name, const Rat& v) {
  switch (f->kind) {
    case Formula::Kind::Not:
      return f_not(substitute_unknown(f->left, name, v));
    case Formula::Kind::And:
      return f_and(substitute_unknown(f->left, name, v), substitute_unknown(f->right, name, v));
    case Formula::Kind::Or:
      return f_or(substitute_unknown(f->left, name, v), substitute_unknown(f->right, name, v));
    case Formula::Kind::Implies:
      return f_implies(substitute_unknown(f->left, name, v),
                       substitute_unknown(f->right, name, v));
    default:
      return f_cmp(f->kind, substitute_unknown_term(f->tl, name, v),
                   substitute_unknown_term(f->tr, name, v));
  }
}

}  // namespace pchtest
