#include "solve_internal.hpp"

namespace pch {

namespace detail {

namespace {

void flatten_into(const TermPtr& t, int c, AtomRegistry& reg, std::vector<std::string>& binders,
                  const Rat& coeff, LinearForm& out) {
  switch (t->kind) {
    case Term::Kind::Sum: {
      binders.push_back(t->dummy);
      flatten_into(t->left, c, reg, binders, coeff, out);
      binders.pop_back();
      return;
    }
    case Term::Kind::Add:
      flatten_into(t->left, c, reg, binders, coeff, out);
      flatten_into(t->right, c, reg, binders, coeff, out);
      return;
    case Term::Kind::Neg:
      flatten_into(t->left, c, reg, binders, -coeff, out);
      return;
    case Term::Kind::Const: {
      Rat scaled = coeff * t->value;
      for (std::size_t i = 0; i < binders.size(); ++i) scaled *= c;
      out.constant += scaled;
      return;
    }
    case Term::Kind::Prob: {
      if (t->event->kind == Event::Kind::True) {
        Rat scaled = coeff;
        for (std::size_t i = 0; i < binders.size(); ++i) scaled *= c;
        out.constant += scaled;
        return;
      }
      AtomGroup g;
      g.binders = binders;
      g.event = t->event;
      TermPtr canon = t_prob(t->event);
      for (auto it = binders.rbegin(); it != binders.rend(); ++it) canon = t_sum(*it, canon);
      g.canonical = canon;
      g.key = print_term(canon);
      g.instance_count = 1;
      for (std::size_t i = 0; i < binders.size(); ++i) g.instance_count *= c;
      out.add_atom(reg.intern(std::move(g)), coeff);
      return;
    }
    case Term::Kind::CondProb:
      throw PchError(ErrorCode::FragmentError,
                     "conditional probabilities are outside the base/lin fragments", t->span);
    case Term::Kind::Mul:
      throw PchError(ErrorCode::FragmentError, "products are outside the base/lin fragments",
                     t->span);
    case Term::Kind::Unknown:
      throw PchError(ErrorCode::FragmentError, "free unknowns are outside the base/lin fragments",
                     t->span);
  }
}

}  // namespace

LinearForm flatten_linear(const TermPtr& term, int domain_size, AtomRegistry& reg) {
  LinearForm out;
  std::vector<std::string> binders;
  flatten_into(term, domain_size, reg, binders, Rat(1), out);
  return out;
}

namespace {

Literal make_literal(const TermPtr& small, const TermPtr& big, bool strict, int c,
                     AtomRegistry& reg) {
  // small <= big  ==>  small - big <= 0
  LinearForm expr = flatten_linear(small, c, reg);
  LinearForm neg = flatten_linear(big, c, reg);
  for (const auto& [id, coef] : neg.atom_coeffs) expr.add_atom(id, -coef);
  expr.constant -= neg.constant;
  return Literal{std::move(expr), strict};
}

void cross(std::vector<Branch>& into, const std::vector<Branch>& more, long cap) {
  std::vector<Branch> out;
  for (const auto& a : into)
    for (const auto& b : more) {
      Branch merged = a;
      merged.insert(merged.end(), b.begin(), b.end());
      out.push_back(std::move(merged));
      if (static_cast<long>(out.size()) > cap)
        throw PchError(ErrorCode::CapExceeded, "DNF branch cap exceeded");
    }
  into = std::move(out);
}

std::vector<Branch> dnf_rec(const FormulaPtr& f, bool positive, int c, AtomRegistry& reg,
                            long cap) {
  switch (f->kind) {
    case Formula::Kind::Le:
      if (positive) return {{make_literal(f->tl, f->tr, false, c, reg)}};
      // !(a <= b)  ==>  b < a
      return {{make_literal(f->tr, f->tl, true, c, reg)}};
    case Formula::Kind::Not:
      return dnf_rec(f->left, !positive, c, reg, cap);
    case Formula::Kind::And: {
      auto l = dnf_rec(f->left, positive, c, reg, cap);
      auto r = dnf_rec(f->right, positive, c, reg, cap);
      if (positive) {
        cross(l, r, cap);
        return l;
      }
      l.insert(l.end(), r.begin(), r.end());
      if (static_cast<long>(l.size()) > cap)
        throw PchError(ErrorCode::CapExceeded, "DNF branch cap exceeded");
      return l;
    }
    default:
      throw PchError(ErrorCode::Internal, "dnf_branches expects a desugared formula");
  }
}

}  // namespace

std::vector<Branch> dnf_branches(const FormulaPtr& desugared, int domain_size, AtomRegistry& reg,
                                 long cap) {
  return dnf_rec(desugared, true, domain_size, reg, cap);
}

std::vector<EventPtr> atom_instances(const AtomGroup& g, int c) {
  std::vector<EventPtr> out;
  std::vector<int> tuple(g.binders.size(), 0);
  while (true) {
    EventPtr inst = g.event;
    for (std::size_t i = 0; i < g.binders.size(); ++i)
      inst = substitute_dummy(inst, g.binders[i], tuple[i]);
    out.push_back(std::move(inst));
    int pos = static_cast<int>(tuple.size()) - 1;
    while (pos >= 0 && ++tuple[pos] == c) tuple[pos--] = 0;
    if (pos < 0) break;
  }
  return out;
}

std::vector<int> column_assignment(long col, std::size_t n, int domain_size) {
  std::vector<int> x(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    x[i] = static_cast<int>(col % domain_size);
    col /= domain_size;
  }
  return x;
}

Scm point_mixture_scm(const Signature& sig, const std::vector<std::vector<int>>& assignments,
                      const std::vector<Rat>& weights) {
  Scm scm;
  scm.sig.domain_size = sig.domain_size;
  scm.sig.endogenous = sig.endogenous;
  std::string sel = fresh_name(sig, "SEL");
  scm.exo_vars.emplace_back(sel, static_cast<int>(assignments.size()));
  for (std::size_t j = 0; j < assignments.size(); ++j)
    scm.exo_dist.push_back({{static_cast<int>(j)}, weights[j]});
  for (std::size_t i = 0; i < sig.endogenous.size(); ++i) {
    Mechanism m;
    m.exo_parents = {sel};
    for (const auto& a : assignments) m.table.push_back(a[i]);
    scm.mechanisms.push_back(std::move(m));
  }
  scm.check();
  return scm;
}

bool next_combination(std::vector<long>& idx, long n) {
  int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < n - (k - i)) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

using detail::AtomGroup;
using detail::AtomRegistry;
using detail::Branch;

namespace {

bool event_has_negation(const EventPtr& e) {
  switch (e->kind) {
    case Event::Kind::True:
    case Event::Kind::Atom:
      return false;
    case Event::Kind::Not:
      return true;
    case Event::Kind::And:
      return event_has_negation(e->left) || event_has_negation(e->right);
    case Event::Kind::PostInt:
      return event_has_negation(e->child);
  }
  return false;
}

bool prop_event_holds(const EventPtr& e, const Signature& sig, const std::vector<int>& xhat) {
  switch (e->kind) {
    case Event::Kind::True:
      return true;
    case Event::Kind::Atom:
      return xhat[sig.var_index(e->var)] == e->value.value;
    case Event::Kind::Not:
      return !prop_event_holds(e->child, sig, xhat);
    case Event::Kind::And:
      return prop_event_holds(e->left, sig, xhat) && prop_event_holds(e->right, sig, xhat);
    case Event::Kind::PostInt:
      throw PchError(ErrorCode::FragmentError, "layer-1 decomposition on an interventional event",
                     e->span);
  }
  return false;
}

}  // namespace

Int count_satisfying(const EventPtr& delta, const std::vector<int>& xhat,
                     const std::vector<std::string>& dummies, const Signature& sig,
                     const Bounds& bounds) {
  long total = 1;
  for (std::size_t i = 0; i < dummies.size(); ++i) {
    if (total > bounds.dummy_enum_cap / sig.domain_size)
      throw PchError(ErrorCode::CapExceeded, "dummy enumeration cap exceeded");
    total *= sig.domain_size;
  }
  Int count = 0;
  std::vector<int> tuple(dummies.size(), 0);
  while (true) {
    EventPtr inst = delta;
    for (std::size_t i = 0; i < dummies.size(); ++i)
      inst = substitute_dummy(inst, dummies[i], tuple[i]);
    if (prop_event_holds(inst, sig, xhat)) ++count;
    int pos = static_cast<int>(tuple.size()) - 1;
    while (pos >= 0 && ++tuple[pos] == sig.domain_size) tuple[pos--] = 0;
    if (pos < 0) break;
  }
  return count;
}

namespace {

void collect_negfree_atoms(const EventPtr& e, std::vector<const Event*>& atoms) {
  switch (e->kind) {
    case Event::Kind::True:
      return;
    case Event::Kind::Atom:
      atoms.push_back(e.get());
      return;
    case Event::Kind::And:
      collect_negfree_atoms(e->left, atoms);
      collect_negfree_atoms(e->right, atoms);
      return;
    case Event::Kind::Not:
      throw PchError(ErrorCode::FragmentError, "negation inside a negation-free primitive",
                     e->span);
    case Event::Kind::PostInt:
      throw PchError(ErrorCode::FragmentError, "layer-1 decomposition on an interventional event",
                     e->span);
  }
}

}  // namespace

Int count_satisfying_negfree(const EventPtr& delta, const std::vector<int>& xhat,
                             const std::vector<std::string>& dummies, const Signature& sig) {
  std::vector<const Event*> atoms;
  collect_negfree_atoms(delta, atoms);

  std::map<std::string, int> forced;  // dummy -> value required by bindings
  for (const Event* a : atoms) {
    int actual = xhat[sig.var_index(a->var)];
    if (a->value.is_dummy()) {
      auto [it, fresh] = forced.emplace(a->value.dummy, actual);
      if (!fresh && it->second != actual) return 0;  // contradictory bindings
    } else if (actual != a->value.value) {
      return 0;  // constant mismatch
    }
  }
  // Unused dummies are free: each scales the count by c.
  Int count = 1;
  for (const auto& d : dummies)
    if (!forced.count(d)) count *= sig.domain_size;
  return count;
}

std::vector<Int> decompose_sum_l1(const TermPtr& sum_term, const Signature& sig,
                                  const Bounds& bounds) {
  std::vector<std::string> binders;
  TermPtr body = sum_term;
  while (body->kind == Term::Kind::Sum) {
    binders.push_back(body->dummy);
    body = body->left;
  }
  if (body->kind != Term::Kind::Prob)
    throw PchError(ErrorCode::FragmentError, "decompose_sum_l1 expects sums over one primitive",
                   sum_term->span);

  long columns = 1;
  for (std::size_t i = 0; i < sig.endogenous.size(); ++i) {
    columns *= sig.domain_size;
    if (columns > bounds.column_cap)
      throw PchError(ErrorCode::CapExceeded, "column cap exceeded in decomposition");
  }
  std::vector<Int> counts(static_cast<std::size_t>(columns));
  for (long col = 0; col < columns; ++col) {
    auto xhat = detail::column_assignment(col, sig.endogenous.size(), sig.domain_size);
    counts[col] = count_satisfying(body->event, xhat, binders, sig, bounds);
  }
  return counts;
}

namespace {

struct L1Engine {
  const Signature& sig;
  const Bounds& bounds;
  bool negfree;
  AtomRegistry reg;
  std::map<int, std::vector<Int>> rows;  // atom id -> counts per column
  bool capped = false;
  std::string cap_reason;

  const std::vector<Int>& row(int atom_id) {
    auto it = rows.find(atom_id);
    if (it != rows.end()) return it->second;
    const AtomGroup& g = reg.atoms()[atom_id];
    long columns = column_count();
    std::vector<Int> counts(static_cast<std::size_t>(columns));
    for (long col = 0; col < columns; ++col) {
      auto xhat = detail::column_assignment(col, sig.endogenous.size(), sig.domain_size);
      counts[col] = negfree ? count_satisfying_negfree(g.event, xhat, g.binders, sig)
                            : count_satisfying(g.event, xhat, g.binders, sig, bounds);
    }
    return rows.emplace(atom_id, std::move(counts)).first->second;
  }

  long column_count() const {
    long columns = 1;
    for (std::size_t i = 0; i < sig.endogenous.size(); ++i) columns *= sig.domain_size;
    return columns;
  }

  std::optional<Scm> solve_branch(const Branch& branch, const FormulaPtr& original) {
    long columns = column_count();
    // Dense per-column coefficients for every literal.
    struct RowLit {
      std::vector<Rat> col_coeffs;
      bool strict;
      Rat rhs;
    };
    std::vector<RowLit> lits;
    for (const auto& lit : branch) {
      RowLit rl;
      rl.col_coeffs.assign(static_cast<std::size_t>(columns), Rat(0));
      rl.strict = lit.strict;
      rl.rhs = -lit.expr.constant;
      bool any = false;
      for (const auto& [atom_id, coef] : lit.expr.atom_coeffs) {
        const auto& counts = row(atom_id);
        for (long col = 0; col < columns; ++col)
          if (counts[col] != 0) rl.col_coeffs[col] += coef * Rat(counts[col]);
        any = true;
      }
      if (!any) {  // constant literal: decide immediately
        bool holds = rl.strict ? Rat(0) < rl.rhs : Rat(0) <= rl.rhs;
        if (!holds) return std::nullopt;
        continue;
      }
      lits.push_back(std::move(rl));
    }

    int m = static_cast<int>(reg.size()) + 1;
    if (bounds.support_m && *bounds.support_m > m) m = *bounds.support_m;
    m = static_cast<int>(std::min<long>(m, columns));

    long systems_tried = 0;
    for (int s = 1; s <= m; ++s) {
      std::vector<long> support(s);
      for (int i = 0; i < s; ++i) support[i] = i;
      while (true) {
        if (++systems_tried > bounds.support_enum_cap) {
          capped = true;
          cap_reason = "support enumeration cap exceeded";
          return std::nullopt;
        }
        LinearSystem sys;
        for (int i = 0; i < s; ++i) sys.var_names.push_back("p" + std::to_string(support[i]));
        for (const auto& rl : lits) {
          std::vector<Rat> coeffs(s);
          for (int i = 0; i < s; ++i) coeffs[i] = rl.col_coeffs[support[i]];
          sys.add(std::move(coeffs), rl.strict ? Rel::Lt : Rel::Le, rl.rhs);
        }
        sys.add(std::vector<Rat>(s, Rat(1)), Rel::Eq, Rat(1));
        for (int i = 0; i < s; ++i) {
          std::vector<Rat> coeffs(s, Rat(0));
          coeffs[i] = Rat(-1);
          sys.add(std::move(coeffs), Rel::Le, Rat(0));
        }
        std::optional<std::vector<Rat>> w;
        try {
          w = solve_linear_feasibility(sys, bounds.fm_constraint_cap);
        } catch (const PchError& e) {
          if (e.code() == ErrorCode::CapExceeded) {
            capped = true;
            cap_reason = "Fourier-Motzkin constraint cap exceeded";
            return std::nullopt;
          }
          throw;
        }
        if (w) {
          std::vector<std::vector<int>> assignments;
          for (int i = 0; i < s; ++i)
            assignments.push_back(
                detail::column_assignment(support[i], sig.endogenous.size(), sig.domain_size));
          Scm witness = detail::point_mixture_scm(sig, assignments, *w);
          if (eval_formula(witness, original) != Truth::True)
            throw PchError(ErrorCode::Internal, "witness failed re-verification");
          return witness;
        }
        if (!detail::next_combination(support, columns)) break;
      }
    }
    return std::nullopt;
  }
};

Verdict check_sat_l1_impl(const FormulaPtr& formula, const Signature& sig, const Bounds& bounds,
                          bool negfree) {
  FragmentTag tag = classify_fragment(formula);
  if (tag.layer != 1)
    throw PchError(ErrorCode::FragmentError, "check_sat_l1 handles layer-1 formulas only");

  long columns = 1;
  for (std::size_t i = 0; i < sig.endogenous.size(); ++i) {
    columns *= sig.domain_size;
    if (columns > bounds.column_cap)
      return Verdict::unknown(bounds, "column cap exceeded (c^n too large)");
  }

  L1Engine engine{sig, bounds, negfree, {}, {}, false, {}};
  auto desugared = desugar(formula);
  std::vector<Branch> branches;
  try {
    branches = detail::dnf_branches(desugared, sig.domain_size, engine.reg, bounds.dnf_branch_cap);
  } catch (const PchError& e) {
    if (e.code() == ErrorCode::CapExceeded) return Verdict::unknown(bounds, e.raw_message());
    throw;
  }

  for (const auto& branch : branches) {
    try {
      if (auto witness = engine.solve_branch(branch, formula))
        return Verdict::sat(std::move(*witness), bounds);
    } catch (const PchError& e) {
      if (e.code() == ErrorCode::CapExceeded) {
        engine.capped = true;
        engine.cap_reason = e.raw_message();
        continue;
      }
      throw;
    }
  }
  if (engine.capped) return Verdict::unknown(bounds, engine.cap_reason);
  return Verdict::unsat(bounds);
}

}  // namespace

Verdict check_sat_l1(const FormulaPtr& formula, const Signature& sig, const Bounds& bounds) {
  return check_sat_l1_impl(formula, sig, bounds, false);
}

Verdict check_sat_l1_negfree(const FormulaPtr& formula, const Signature& sig,
                             const Bounds& bounds) {
  return check_sat_l1_impl(formula, sig, bounds, true);
}

}  // namespace pch
