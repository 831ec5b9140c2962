#include "pch/analysis.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pch {

bool event_propositional(const EventPtr& e) {
  switch (e->kind) {
    case Event::Kind::True:
    case Event::Kind::Atom:
      return true;
    case Event::Kind::Not:
      return event_propositional(e->child);
    case Event::Kind::And:
      return event_propositional(e->left) && event_propositional(e->right);
    case Event::Kind::PostInt:
      return false;
  }
  return false;
}

int event_layer(const EventPtr& e) {
  if (event_propositional(e)) return 1;
  if (e->kind == Event::Kind::PostInt) return 2;  // body is propositional by validation
  return 3;
}

namespace {

class Validator {
 public:
  Validator(Signature& sig) : sig_(sig) {}

  void formula(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Not:
        formula(f->left);
        return;
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Implies:
        formula(f->left);
        formula(f->right);
        return;
      default:
        term(f->tl);
        term(f->tr);
        return;
    }
  }

  const std::set<std::string>& binders() const { return binders_; }

 private:
  void term(const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Prob:
        event(t->event, false);
        return;
      case Term::Kind::CondProb:
        event(t->event, false);
        if (!event_propositional(t->condition))
          throw PchError(ErrorCode::NonPropositionalCondition,
                         "conditional probability condition must be propositional",
                         t->condition->span);
        event(t->condition, false);
        return;
      case Term::Kind::Sum: {
        if (sig_.is_var(t->dummy))
          throw PchError(ErrorCode::DuplicateName,
                         "summation binder '" + t->dummy + "' collides with a variable name",
                         t->span);
        binders_.insert(t->dummy);
        bool outer = scope_.insert(t->dummy).second;
        term(t->left);
        if (outer) scope_.erase(t->dummy);
        return;
      }
      case Term::Kind::Add:
      case Term::Kind::Mul:
        term(t->left);
        term(t->right);
        return;
      case Term::Kind::Neg:
        term(t->left);
        return;
      case Term::Kind::Const:
        return;
      case Term::Kind::Unknown:
        if (!sig_.is_unknown(t->unknown_name))
          throw PchError(ErrorCode::UnknownVariable,
                         "undeclared unknown '" + t->unknown_name + "'", t->span);
        return;
    }
  }

  void value(const ValueRef& v, const SourceSpan& span) {
    if (v.is_dummy()) {
      if (!scope_.count(v.dummy))
        throw PchError(ErrorCode::UnboundDummy,
                       "dummy '" + v.dummy + "' is not bound by an enclosing sum", span);
    } else if (v.value < 0 || v.value >= sig_.domain_size) {
      throw PchError(ErrorCode::DomainError,
                     "value " + std::to_string(v.value) + " outside Val = {0.." +
                         std::to_string(sig_.domain_size - 1) + "}",
                     span);
    }
  }

  void event(const EventPtr& e, bool inside_post_int) {
    switch (e->kind) {
      case Event::Kind::True:
        return;
      case Event::Kind::Atom:
        if (!sig_.is_var(e->var))
          throw PchError(ErrorCode::UnknownVariable, "undeclared variable '" + e->var + "'",
                         e->span);
        value(e->value, e->span);
        return;
      case Event::Kind::Not:
        event(e->child, inside_post_int);
        return;
      case Event::Kind::And:
        event(e->left, inside_post_int);
        event(e->right, inside_post_int);
        return;
      case Event::Kind::PostInt: {
        if (inside_post_int)
          throw PchError(ErrorCode::NonPropositionalCondition,
                         "post-interventional body must be propositional (nested intervention)",
                         e->span);
        // A single intervention may repeat a variable with the same value but
        // never assign two distinct constants to it.
        std::map<std::string, const ValueRef*> assigned;
        for (const auto& [var, val] : e->intervention) {
          if (!sig_.is_var(var))
            throw PchError(ErrorCode::UnknownVariable,
                           "undeclared variable '" + var + "' in intervention", e->span);
          value(val, e->span);
          auto [it, fresh] = assigned.emplace(var, &val);
          if (!fresh && !(*it->second == val))
            throw PchError(ErrorCode::InconsistentIntervention,
                           "intervention assigns '" + var + "' two different values", e->span);
        }
        event(e->child, true);
        return;
      }
    }
  }

  Signature& sig_;
  std::set<std::string> scope_;
  std::set<std::string> binders_;
};

}  // namespace

void validate(const FormulaPtr& formula, Signature& sig) {
  sig.check();
  Validator v(sig);
  v.formula(formula);
  sig.dummies.assign(v.binders().begin(), v.binders().end());
  sig.check();
}

namespace {

struct FragmentAcc {
  int layer = 1;
  bool has_add = false, has_neg = false, has_mul = false, has_const = false;
  bool has_cond = false;
  bool has_sigma = false;

  void event(const EventPtr& e) { layer = std::max(layer, event_layer(e)); }

  void term(const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Prob:
        event(t->event);
        return;
      case Term::Kind::CondProb:
        // Conditionals live in the polynomial calculus (their semantics is a
        // quotient); an interventional body conditioned on facts compares two
        // mechanism regimes, which is counterfactual.
        has_cond = true;
        if (!event_propositional(t->event)) layer = 3;
        return;
      case Term::Kind::Sum:
        has_sigma = true;
        term(t->left);
        return;
      case Term::Kind::Add:
        has_add = true;
        term(t->left);
        term(t->right);
        return;
      case Term::Kind::Neg:
        has_neg = true;
        term(t->left);
        return;
      case Term::Kind::Mul:
        has_mul = true;
        term(t->left);
        term(t->right);
        return;
      case Term::Kind::Const:
        has_const = true;
        return;
      case Term::Kind::Unknown:
        has_mul = true;  // free unknowns only arise in the polynomial calculus
        return;
    }
  }

  void formula(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Not:
        formula(f->left);
        return;
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Implies:
        formula(f->left);
        formula(f->right);
        return;
      default:
        term(f->tl);
        term(f->tr);
        return;
    }
  }

  FragmentTag tag() const {
    FragmentTag out;
    out.layer = layer;
    if (has_mul || has_cond)
      out.terms = FragmentTag::Terms::Poly;
    else if (has_add || has_neg || has_const)
      out.terms = FragmentTag::Terms::Lin;
    else
      out.terms = FragmentTag::Terms::Base;
    out.has_sigma = has_sigma;
    return out;
  }
};

}  // namespace

FragmentTag classify_fragment(const FormulaPtr& formula) {
  FragmentAcc acc;
  acc.formula(formula);
  return acc.tag();
}

FragmentTag classify_term(const TermPtr& term) {
  FragmentAcc acc;
  acc.term(term);
  return acc.tag();
}

FormulaPtr desugar(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Le: {
      auto a = f->tl, b = f->tr;
      return f_cmp(Formula::Kind::Le, a, b, f->span);
    }
    case Formula::Kind::Lt:
      // t < t'  ==>  !(t' <= t)
      return f_not(f_le(f->tr, f->tl), f->span);
    case Formula::Kind::Gt:
      return f_not(f_le(f->tl, f->tr), f->span);
    case Formula::Kind::Ge:
      return f_le(f->tr, f->tl);
    case Formula::Kind::Eq:
      // Equality is greater-or-equal in both directions.
      return f_and(f_le(f->tl, f->tr), f_le(f->tr, f->tl), f->span);
    case Formula::Kind::Ne:
      return f_not(f_and(f_le(f->tl, f->tr), f_le(f->tr, f->tl)), f->span);
    case Formula::Kind::Not:
      return f_not(desugar(f->left), f->span);
    case Formula::Kind::And:
      return f_and(desugar(f->left), desugar(f->right), f->span);
    case Formula::Kind::Or:
      return f_not(f_and(f_not(desugar(f->left)), f_not(desugar(f->right))), f->span);
    case Formula::Kind::Implies:
      return f_not(f_and(desugar(f->left), f_not(desugar(f->right))), f->span);
  }
  return f;
}

bool is_desugared(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Le:
      return true;
    case Formula::Kind::Not:
      return is_desugared(f->left);
    case Formula::Kind::And:
      return is_desugared(f->left) && is_desugared(f->right);
    default:
      return false;
  }
}

EventPtr substitute_dummy(const EventPtr& e, const std::string& dummy, int value) {
  switch (e->kind) {
    case Event::Kind::True:
      return e;
    case Event::Kind::Atom:
      if (e->value.is_dummy() && e->value.dummy == dummy)
        return ev_atom(e->var, ValueRef::constant(value), e->span);
      return e;
    case Event::Kind::Not: {
      auto c = substitute_dummy(e->child, dummy, value);
      return c == e->child ? e : ev_not(c, e->span);
    }
    case Event::Kind::And: {
      auto l = substitute_dummy(e->left, dummy, value);
      auto r = substitute_dummy(e->right, dummy, value);
      return (l == e->left && r == e->right) ? e : ev_and(l, r, e->span);
    }
    case Event::Kind::PostInt: {
      Intervention alpha = e->intervention;
      bool changed = false;
      for (auto& [var, val] : alpha) {
        if (val.is_dummy() && val.dummy == dummy) {
          val = ValueRef::constant(value);
          changed = true;
        }
      }
      auto body = substitute_dummy(e->child, dummy, value);
      if (!changed && body == e->child) return e;
      return ev_post_int(std::move(alpha), body, e->span);
    }
  }
  return e;
}

TermPtr substitute_dummy(const TermPtr& t, const std::string& dummy, int value) {
  switch (t->kind) {
    case Term::Kind::Prob: {
      auto e = substitute_dummy(t->event, dummy, value);
      return e == t->event ? t : t_prob(e, t->span);
    }
    case Term::Kind::CondProb: {
      auto e = substitute_dummy(t->event, dummy, value);
      auto c = substitute_dummy(t->condition, dummy, value);
      return (e == t->event && c == t->condition) ? t : t_cond(e, c, t->span);
    }
    case Term::Kind::Sum: {
      if (t->dummy == dummy) return t;  // inner binder shadows
      auto b = substitute_dummy(t->left, dummy, value);
      return b == t->left ? t : t_sum(t->dummy, b, t->span);
    }
    case Term::Kind::Add:
    case Term::Kind::Mul: {
      auto l = substitute_dummy(t->left, dummy, value);
      auto r = substitute_dummy(t->right, dummy, value);
      if (l == t->left && r == t->right) return t;
      return t->kind == Term::Kind::Add ? t_add(l, r, t->span) : t_mul(l, r, t->span);
    }
    case Term::Kind::Neg: {
      auto l = substitute_dummy(t->left, dummy, value);
      return l == t->left ? t : t_neg(l, t->span);
    }
    case Term::Kind::Const:
    case Term::Kind::Unknown:
      return t;
  }
  return t;
}

}  // namespace pch
