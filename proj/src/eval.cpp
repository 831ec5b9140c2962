#include "pch/eval.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "pch/analysis.hpp"

namespace pch {

const char* truth_name(Truth t) {
  switch (t) {
    case Truth::True: return "true";
    case Truth::False: return "false";
    case Truth::Undefined: return "undefined";
  }
  return "?";
}

std::vector<int> determine_values(const Scm& scm, const std::vector<int>& u) {
  std::vector<int> x(scm.sig.endogenous.size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = scm.mechanism_output(static_cast<int>(i), x, u);
  return x;
}

Scm apply_intervention(const Scm& scm, const Intervention& alpha) {
  Scm out = scm;
  for (const auto& [var, val] : alpha) {
    if (val.is_dummy())
      throw PchError(ErrorCode::UnboundDummy,
                     "intervention value for '" + var + "' is an unsubstituted dummy");
    int i = scm.sig.var_index(var);
    if (i < 0) throw PchError(ErrorCode::UnknownVariable, "unknown variable '" + var + "'");
    Mechanism constant;
    constant.table = {val.value};
    out.mechanisms[i] = std::move(constant);
  }
  return out;
}

namespace {

// Endogenous values under a sparse intervention (index -> value, -1 free).
std::vector<int> values_under(const Scm& scm, const std::vector<int>& u,
                              const std::vector<int>& forced) {
  std::vector<int> x(scm.sig.endogenous.size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = forced[i] >= 0 ? forced[i] : scm.mechanism_output(static_cast<int>(i), x, u);
  return x;
}

bool prop_holds(const EventPtr& e, const Scm& scm, const std::vector<int>& x) {
  switch (e->kind) {
    case Event::Kind::True:
      return true;
    case Event::Kind::Atom:
      return x[scm.sig.var_index(e->var)] == e->value.value;
    case Event::Kind::Not:
      return !prop_holds(e->child, scm, x);
    case Event::Kind::And:
      return prop_holds(e->left, scm, x) && prop_holds(e->right, scm, x);
    case Event::Kind::PostInt:
      throw PchError(ErrorCode::Internal, "nested intervention in propositional context");
  }
  return false;
}

}  // namespace

bool satisfies(const Scm& scm, const std::vector<int>& u, const EventPtr& psi) {
  switch (psi->kind) {
    case Event::Kind::True:
      return true;
    case Event::Kind::Not:
      return !satisfies(scm, u, psi->child);
    case Event::Kind::And:
      return satisfies(scm, u, psi->left) && satisfies(scm, u, psi->right);
    case Event::Kind::Atom: {
      auto x = determine_values(scm, u);
      return x[scm.sig.var_index(psi->var)] == psi->value.value;
    }
    case Event::Kind::PostInt: {
      std::vector<int> forced(scm.sig.endogenous.size(), -1);
      for (const auto& [var, val] : psi->intervention) {
        if (val.is_dummy())
          throw PchError(ErrorCode::UnboundDummy,
                         "event is not closed: dummy '" + val.dummy + "'");
        forced[scm.sig.var_index(var)] = val.value;
      }
      auto x = values_under(scm, u, forced);
      return prop_holds(psi->child, scm, x);
    }
  }
  return false;
}

namespace {

Rat prob_of_event(const Scm& scm, const EventPtr& e) {
  Rat total = 0;
  for (const auto& [u, w] : scm.exo_dist) {
    if (w == 0) continue;
    if (satisfies(scm, u, e)) total += w;
  }
  return total;
}

}  // namespace

Valuation eval_term(const Scm& scm, const TermPtr& term) {
  switch (term->kind) {
    case Term::Kind::Prob:
      return Valuation::of(prob_of_event(scm, term->event));
    case Term::Kind::CondProb: {
      Rat den = prob_of_event(scm, term->condition);
      if (den == 0) return Valuation::undef();
      Rat num = prob_of_event(scm, ev_and(term->event, term->condition));
      return Valuation::of(num / den);
    }
    case Term::Kind::Sum: {
      Rat total = 0;
      for (int v = 0; v < scm.sig.domain_size; ++v) {
        auto inst = eval_term(scm, substitute_dummy(term->left, term->dummy, v));
        if (!inst.defined) return Valuation::undef();
        total += inst.value;
      }
      return Valuation::of(std::move(total));
    }
    case Term::Kind::Add: {
      auto a = eval_term(scm, term->left), b = eval_term(scm, term->right);
      if (!a.defined || !b.defined) return Valuation::undef();
      return Valuation::of(a.value + b.value);
    }
    case Term::Kind::Neg: {
      auto a = eval_term(scm, term->left);
      return a.defined ? Valuation::of(-a.value) : Valuation::undef();
    }
    case Term::Kind::Mul: {
      auto a = eval_term(scm, term->left), b = eval_term(scm, term->right);
      if (!a.defined || !b.defined) return Valuation::undef();
      return Valuation::of(a.value * b.value);
    }
    case Term::Kind::Const:
      return Valuation::of(term->value);
    case Term::Kind::Unknown:
      return Valuation::undef();  // free unknowns have no model value
  }
  return Valuation::undef();
}

namespace {

Truth truth_not(Truth t) {
  if (t == Truth::Undefined) return Truth::Undefined;
  return t == Truth::True ? Truth::False : Truth::True;
}

Truth truth_and(Truth a, Truth b) {
  if (a == Truth::False || b == Truth::False) return Truth::False;
  if (a == Truth::True && b == Truth::True) return Truth::True;
  return Truth::Undefined;
}

}  // namespace

Truth eval_formula(const Scm& scm, const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Not:
      return truth_not(eval_formula(scm, f->left));
    case Formula::Kind::And:
      return truth_and(eval_formula(scm, f->left), eval_formula(scm, f->right));
    case Formula::Kind::Or:
      return truth_not(
          truth_and(truth_not(eval_formula(scm, f->left)), truth_not(eval_formula(scm, f->right))));
    case Formula::Kind::Implies:
      return truth_not(
          truth_and(eval_formula(scm, f->left), truth_not(eval_formula(scm, f->right))));
    default: {
      auto a = eval_term(scm, f->tl), b = eval_term(scm, f->tr);
      if (!a.defined || !b.defined) return Truth::Undefined;
      bool holds = false;
      switch (f->kind) {
        case Formula::Kind::Le: holds = a.value <= b.value; break;
        case Formula::Kind::Lt: holds = a.value < b.value; break;
        case Formula::Kind::Eq: holds = a.value == b.value; break;
        case Formula::Kind::Ge: holds = a.value >= b.value; break;
        case Formula::Kind::Gt: holds = a.value > b.value; break;
        case Formula::Kind::Ne: holds = a.value != b.value; break;
        default: throw PchError(ErrorCode::Internal, "bad comparison kind");
      }
      return holds ? Truth::True : Truth::False;
    }
  }
}

// ---------------------------------------------------------------------------
// Algorithm-1 path: evaluate sums by enumerating interventions.

namespace {

struct SumGroup {
  std::vector<std::string> binders;  // enclosing Sum binders, outermost first
  EventPtr prob_event;               // the primitive's event
  Rat coeff;                         // sign/coefficient from Neg nesting
  const Term* root;                  // maximal atom node this group belongs to
};

struct Instance {
  std::vector<int> alpha;  // per endo index, -1 = not intervened
  EventPtr body;           // propositional, dummies substituted
};

class InterventionEnumerator {
 public:
  InterventionEnumerator(const Scm& scm, const FormulaPtr& formula) : scm_(scm) {
    collect_formula(formula);
    for (auto& g : groups_) build_instances(g);
  }

  std::map<const Term*, Rat> run() {
    counters_.assign(groups_.size(), Rat(0));
    for (const auto& [u, w] : scm_.exo_dist) {
      if (w == 0) continue;
      p_u_ = w;
      u_ = u;
      auto x = determine_values(scm_, u);
      std::vector<int> alpha(scm_.sig.endogenous.size(), -1);
      simulate(0, alpha, x);
    }
    std::map<const Term*, Rat> out;
    for (const auto& [node, value] : const_parts_) out[node] = value;
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      auto [it, fresh] = out.emplace(groups_[g].root, Rat(0));
      (void)fresh;
      it->second += groups_[g].coeff * counters_[g];
    }
    return out;
  }

 private:
  void collect_formula(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Not:
        collect_formula(f->left);
        return;
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Implies:
        collect_formula(f->left);
        collect_formula(f->right);
        return;
      default:
        collect_atom_roots(f->tl);
        collect_atom_roots(f->tr);
        return;
    }
  }

  // Maximal atoms are Sum chains and bare primitives; Add/Neg combine them.
  void collect_atom_roots(const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Add:
        collect_atom_roots(t->left);
        collect_atom_roots(t->right);
        return;
      case Term::Kind::Neg:
        collect_atom_roots(t->left);
        return;
      case Term::Kind::Const:
        return;
      case Term::Kind::Sum:
      case Term::Kind::Prob:
        if (!seen_roots_.insert(t.get()).second) return;
        flatten(t, t.get(), {}, Rat(1));
        return;
      default:
        throw PchError(ErrorCode::FragmentError,
                       "intervention enumeration needs a lin<S> layer-2 term", t->span);
    }
  }

  void flatten(const TermPtr& t, const Term* root, std::vector<std::string> binders, Rat coeff) {
    switch (t->kind) {
      case Term::Kind::Sum: {
        auto b = binders;
        b.push_back(t->dummy);
        flatten(t->left, root, std::move(b), coeff);
        return;
      }
      case Term::Kind::Add:
        flatten(t->left, root, binders, coeff);
        flatten(t->right, root, binders, coeff);
        return;
      case Term::Kind::Neg:
        flatten(t->left, root, binders, -coeff);
        return;
      case Term::Kind::Const: {
        // Each enclosing binder duplicates the constant c times.
        Rat scale = coeff * t->value;
        for (std::size_t i = 0; i < binders.size(); ++i) scale *= scm_.sig.domain_size;
        const_parts_[root] += scale;
        return;
      }
      case Term::Kind::Prob:
        groups_.push_back({std::move(binders), t->event, coeff, root});
        return;
      default:
        throw PchError(ErrorCode::FragmentError,
                       "intervention enumeration needs a lin<S> layer-2 term", t->span);
    }
  }

  void build_instances(SumGroup& g) {
    instances_.emplace_back();
    auto& list = instances_.back();
    std::vector<int> tuple(g.binders.size(), 0);
    while (true) {
      EventPtr inst = g.prob_event;
      for (std::size_t i = 0; i < g.binders.size(); ++i)
        inst = substitute_dummy(inst, g.binders[i], tuple[i]);
      list.push_back(make_instance(inst));
      int pos = static_cast<int>(tuple.size()) - 1;
      while (pos >= 0 && ++tuple[pos] == scm_.sig.domain_size) tuple[pos--] = 0;
      if (pos < 0) break;
    }
  }

  Instance make_instance(const EventPtr& e) {
    Instance inst;
    inst.alpha.assign(scm_.sig.endogenous.size(), -1);
    if (e->kind == Event::Kind::PostInt) {
      for (const auto& [var, val] : e->intervention) {
        if (val.is_dummy())
          throw PchError(ErrorCode::UnboundDummy, "unsubstituted dummy in intervention");
        inst.alpha[scm_.sig.var_index(var)] = val.value;
      }
      if (!event_propositional(e->child))
        throw PchError(ErrorCode::FragmentError,
                       "primitive nests interventions (layer 3)", e->span);
      inst.body = e->child;
    } else {
      if (!event_propositional(e))
        throw PchError(ErrorCode::FragmentError,
                       "primitive nests interventions (layer 3)", e->span);
      inst.body = e;
    }
    return inst;
  }

  void simulate(std::size_t i, std::vector<int>& alpha, const std::vector<int>& x) {
    const std::size_t n = scm_.sig.endogenous.size();
    if (i == n) {
      for (std::size_t g = 0; g < groups_.size(); ++g)
        for (const auto& inst : instances_[g])
          if (inst.alpha == alpha && prop_holds(inst.body, scm_, x)) counters_[g] += p_u_;
      return;
    }
    simulate(i + 1, alpha, x);  // leave X_i untouched
    for (int v = 0; v < scm_.sig.domain_size; ++v) {
      std::vector<int> forced = alpha;
      forced[i] = v;
      // Downstream variables re-derive from their mechanisms.
      std::vector<int> xv = x;
      xv[i] = v;
      for (std::size_t j = i + 1; j < n; ++j)
        if (forced[j] < 0) xv[j] = scm_.mechanism_output(static_cast<int>(j), xv, u_);
      simulate(i + 1, forced, xv);
    }
  }

  const Scm& scm_;
  std::vector<SumGroup> groups_;
  std::vector<std::vector<Instance>> instances_;
  std::map<const Term*, Rat> const_parts_;
  std::set<const Term*> seen_roots_;
  std::vector<Rat> counters_;
  Rat p_u_;
  std::vector<int> u_;
};

}  // namespace

std::map<const Term*, Rat> eval_l2_sums_by_interventions(const Scm& scm,
                                                         const FormulaPtr& formula) {
  return InterventionEnumerator(scm, formula).run();
}

}  // namespace pch
