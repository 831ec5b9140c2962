#include "pch/analysis.hpp"
#include "pch/reduce.hpp"
#include "pch/solve.hpp"

namespace pch {

namespace {

long term_nodes(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Prob:
    case Term::Kind::CondProb:
    case Term::Kind::Const:
    case Term::Kind::Unknown:
      return 1;
    case Term::Kind::Sum:
    case Term::Kind::Neg:
      return 1 + term_nodes(t->left);
    case Term::Kind::Add:
    case Term::Kind::Mul:
      return 1 + term_nodes(t->left) + term_nodes(t->right);
  }
  return 1;
}

TermPtr expand_term(const TermPtr& t, int c, long cap, long& budget) {
  if (--budget < 0) throw PchError(ErrorCode::CapExceeded, "expand_sums size cap exceeded");
  switch (t->kind) {
    case Term::Kind::Sum: {
      TermPtr acc;
      for (int v = 0; v < c; ++v) {
        TermPtr inst = expand_term(substitute_dummy(t->left, t->dummy, v), c, cap, budget);
        acc = acc ? t_add(acc, inst) : inst;
      }
      return acc;
    }
    case Term::Kind::Add:
      return t_add(expand_term(t->left, c, cap, budget), expand_term(t->right, c, cap, budget),
                   t->span);
    case Term::Kind::Mul:
      return t_mul(expand_term(t->left, c, cap, budget), expand_term(t->right, c, cap, budget),
                   t->span);
    case Term::Kind::Neg:
      return t_neg(expand_term(t->left, c, cap, budget), t->span);
    default:
      return t;
  }
}

FormulaPtr expand_formula(const FormulaPtr& f, int c, long cap, long& budget) {
  switch (f->kind) {
    case Formula::Kind::Not:
      return f_not(expand_formula(f->left, c, cap, budget), f->span);
    case Formula::Kind::And:
      return f_and(expand_formula(f->left, c, cap, budget),
                   expand_formula(f->right, c, cap, budget), f->span);
    case Formula::Kind::Or:
      return f_or(expand_formula(f->left, c, cap, budget),
                  expand_formula(f->right, c, cap, budget), f->span);
    case Formula::Kind::Implies:
      return f_implies(expand_formula(f->left, c, cap, budget),
                       expand_formula(f->right, c, cap, budget), f->span);
    default:
      return f_cmp(f->kind, expand_term(f->tl, c, cap, budget),
                   expand_term(f->tr, c, cap, budget), f->span);
  }
}

}  // namespace

TermPtr expand_sums_term(const TermPtr& term, int domain_size, long node_cap) {
  long budget = node_cap;
  return expand_term(term, domain_size, node_cap, budget);
}

FormulaPtr expand_sums(const FormulaPtr& formula, int domain_size, long node_cap) {
  long budget = node_cap;
  return expand_formula(formula, domain_size, node_cap, budget);
}

long formula_node_count(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Not:
      return 1 + formula_node_count(f->left);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      return 1 + formula_node_count(f->left) + formula_node_count(f->right);
    default:
      return 1 + term_nodes(f->tl) + term_nodes(f->tr);
  }
}

namespace {

struct CondEliminator {
  Signature sig;
  std::vector<FormulaPtr> side_constraints;
  int counter = 0;
  bool changed = false;

  TermPtr term(const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::CondProb: {
        std::string z = fresh_name(sig, "z" + std::to_string(counter++));
        sig.unknowns.push_back(z);
        changed = true;
        // P(d, d') = z * P(d')  and  P(d') != 0
        side_constraints.push_back(f_eq(t_prob(ev_and(t->event, t->condition)),
                                        t_mul(t_unknown(z), t_prob(t->condition))));
        side_constraints.push_back(
            f_cmp(Formula::Kind::Ne, t_prob(t->condition), t_const(Rat(0))));
        return t_unknown(z, t->span);
      }
      case Term::Kind::Sum:
        throw PchError(ErrorCode::FragmentError,
                       "eliminate_conditionals expects a Sum-free formula (expand sums first)",
                       t->span);
      case Term::Kind::Add:
        return t_add(term(t->left), term(t->right), t->span);
      case Term::Kind::Mul:
        return t_mul(term(t->left), term(t->right), t->span);
      case Term::Kind::Neg:
        return t_neg(term(t->left), t->span);
      default:
        return t;
    }
  }

  FormulaPtr formula(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Not:
        return f_not(formula(f->left), f->span);
      case Formula::Kind::And:
        return f_and(formula(f->left), formula(f->right), f->span);
      case Formula::Kind::Or:
        return f_or(formula(f->left), formula(f->right), f->span);
      case Formula::Kind::Implies:
        return f_implies(formula(f->left), formula(f->right), f->span);
      default:
        return f_cmp(f->kind, term(f->tl), term(f->tr), f->span);
    }
  }
};

}  // namespace

ConditionalElimination eliminate_conditionals(const FormulaPtr& formula, const Signature& sig) {
  CondEliminator elim{sig, {}, 0, false};
  FormulaPtr main = elim.formula(formula);
  ConditionalElimination out;
  out.changed = elim.changed;
  out.sig = elim.sig;
  if (!elim.changed) {
    out.formula = formula;
    return out;
  }
  std::vector<FormulaPtr> all{main};
  all.insert(all.end(), elim.side_constraints.begin(), elim.side_constraints.end());
  out.formula = f_and_all(std::move(all));
  validate(out.formula, out.sig);
  return out;
}

}  // namespace pch
