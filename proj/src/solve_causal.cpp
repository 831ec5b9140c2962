#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <numeric>

#include "solve_internal.hpp"

namespace pch {

using detail::AtomGroup;
using detail::AtomRegistry;
using detail::Branch;

namespace {

struct CapHit {
  std::string reason;
};

long long ipow(long long base, int exp) {
  long long r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

// Deterministic first-hit search over [0, count): blocks of `jobs` items run
// concurrently; the lowest index with a result wins regardless of timing.
template <typename Fn>
auto parallel_first(long count, int jobs, Fn fn) -> decltype(fn(0L)) {
  if (jobs <= 1) {
    for (long i = 0; i < count; ++i)
      if (auto r = fn(i)) return r;
    return std::nullopt;
  }
  for (long start = 0; start < count; start += jobs) {
    long end = std::min(count, start + jobs);
    std::vector<std::future<decltype(fn(0L))>> futs;
    for (long i = start; i < end; ++i)
      futs.push_back(std::async(std::launch::async, [&fn, i] { return fn(i); }));
    decltype(fn(0L)) hit = std::nullopt;
    for (auto& f : futs) {
      auto r = f.get();
      if (r && !hit) hit = std::move(r);
    }
    if (hit) return hit;
  }
  return std::nullopt;
}

std::vector<std::vector<int>> causal_orders(std::size_t n, long cap, bool& capped) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    if (static_cast<long>(out.size()) >= cap) {
      capped = true;
      break;
    }
    out.push_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

// ---------------------------------------------------------------------------
// Events compiled to integer variable indices with precomputed intervention
// vectors; the solver loops evaluate these millions of times.

struct CEvent {
  enum class K { True, Atom, Not, And, PostInt };
  K kind = K::True;
  int var = -1;
  int value = 0;
  std::unique_ptr<CEvent> a, b;  // Not/PostInt body in a; And in a,b
  std::vector<int> forced;       // PostInt: per var index, -1 free
  int intervention_weight = 0;   // total forced vars underneath (sort heuristic)
};

CEvent compile_event(const EventPtr& e, const Signature& sig) {
  CEvent out;
  switch (e->kind) {
    case Event::Kind::True:
      out.kind = CEvent::K::True;
      return out;
    case Event::Kind::Atom:
      out.kind = CEvent::K::Atom;
      out.var = sig.var_index(e->var);
      out.value = e->value.value;
      return out;
    case Event::Kind::Not:
      out.kind = CEvent::K::Not;
      out.a = std::make_unique<CEvent>(compile_event(e->child, sig));
      out.intervention_weight = out.a->intervention_weight;
      return out;
    case Event::Kind::And:
      out.kind = CEvent::K::And;
      out.a = std::make_unique<CEvent>(compile_event(e->left, sig));
      out.b = std::make_unique<CEvent>(compile_event(e->right, sig));
      out.intervention_weight = out.a->intervention_weight + out.b->intervention_weight;
      return out;
    case Event::Kind::PostInt: {
      out.kind = CEvent::K::PostInt;
      out.forced.assign(sig.endogenous.size(), -1);
      for (const auto& [var, val] : e->intervention) {
        if (val.is_dummy())
          throw PchError(ErrorCode::UnboundDummy, "event not closed: dummy '" + val.dummy + "'");
        out.forced[sig.var_index(var)] = val.value;
        ++out.intervention_weight;
      }
      out.a = std::make_unique<CEvent>(compile_event(e->child, sig));
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Deterministic profile w.r.t. a causal order: one full mechanism table per
// position over all preceding variables. Entries are filled lazily (CSP) or
// read off a function index (exhaustive scan / grid).

class ProfileState {
 public:
  ProfileState(const Signature& sig, const std::vector<int>& order)
      : c_(sig.domain_size), n_(sig.endogenous.size()), order_(order), sig_(sig) {
    tables_.assign(n_, {});
    x_.assign(n_, 0);
    no_forced_.assign(n_, -1);
  }

  struct Missing {
    int pos;
    long key;
  };

  std::optional<bool> eval(const CEvent& e) {
    switch (e.kind) {
      case CEvent::K::True:
        return true;
      case CEvent::K::Not: {
        auto v = eval(*e.a);
        if (!v) return std::nullopt;
        return !*v;
      }
      case CEvent::K::And: {
        auto l = eval(*e.a);
        if (!l) return std::nullopt;
        if (!*l) return false;
        return eval(*e.b);
      }
      case CEvent::K::Atom:
        if (!fill_values(no_forced_)) return std::nullopt;
        return x_[e.var] == e.value;
      case CEvent::K::PostInt:
        if (!fill_values(e.forced)) return std::nullopt;
        return prop_holds(*e.a);
    }
    return false;
  }

  Missing last_missing() const { return missing_; }
  void assign(int pos, long key, int value) { tables_[pos][key] = value; }
  void unassign(int pos, long key) { tables_[pos].erase(key); }
  bool assigned(int pos, long key) const { return tables_[pos].count(key) != 0; }

  // Mechanisms over all preceding variables; unconstrained entries get 0.
  std::vector<Mechanism> materialize() const {
    std::vector<Mechanism> mechs(n_);
    for (std::size_t p = 0; p < n_; ++p) {
      Mechanism m;
      for (std::size_t q = 0; q < p; ++q) m.endo_parents.push_back(sig_.endogenous[order_[q]]);
      m.table.assign(ipow(c_, static_cast<int>(p)), 0);
      for (const auto& [key, value] : tables_[p]) m.table[key] = value;
      mechs[p] = std::move(m);
    }
    return mechs;
  }

 private:
  bool fill_values(const std::vector<int>& forced) {
    long key = 0;
    for (std::size_t p = 0; p < n_; ++p) {
      int var = order_[p];
      int v = forced[var];
      if (v < 0) {
        auto it = tables_[p].find(key);
        if (it == tables_[p].end()) {
          missing_ = {static_cast<int>(p), key};
          return false;
        }
        v = it->second;
      }
      x_[var] = v;
      key = key * c_ + v;
    }
    return true;
  }

  bool prop_holds(const CEvent& e) const {
    switch (e.kind) {
      case CEvent::K::True:
        return true;
      case CEvent::K::Atom:
        return x_[e.var] == e.value;
      case CEvent::K::Not:
        return !prop_holds(*e.a);
      case CEvent::K::And:
        return prop_holds(*e.a) && prop_holds(*e.b);
      case CEvent::K::PostInt:
        throw PchError(ErrorCode::Internal, "nested intervention in propositional body");
    }
    return false;
  }

  int c_;
  std::size_t n_;
  const std::vector<int>& order_;
  const Signature& sig_;
  std::vector<std::map<long, int>> tables_;
  std::vector<int> x_;
  std::vector<int> no_forced_;
  Missing missing_{};
};

// Same evaluation against a profile fixed by per-position function indices.
class IndexedProfile {
 public:
  IndexedProfile(const Signature& sig, const std::vector<int>& order)
      : c_(sig.domain_size), n_(sig.endogenous.size()), order_(order), sig_(sig) {
    x_.assign(n_, 0);
    no_forced_.assign(n_, -1);
  }

  void set_functions(const std::vector<long long>* f) { funcs_ = f; }

  bool eval(const CEvent& e) {
    switch (e.kind) {
      case CEvent::K::True:
        return true;
      case CEvent::K::Not:
        return !eval(*e.a);
      case CEvent::K::And:
        return eval(*e.a) && eval(*e.b);
      case CEvent::K::Atom:
        fill_values(no_forced_);
        return x_[e.var] == e.value;
      case CEvent::K::PostInt:
        fill_values(e.forced);
        return prop_holds(*e.a);
    }
    return false;
  }

  Mechanism mechanism(std::size_t p) const {
    Mechanism m;
    for (std::size_t q = 0; q < p; ++q) m.endo_parents.push_back(sig_.endogenous[order_[q]]);
    long entries = ipow(c_, static_cast<int>(p));
    m.table.assign(entries, 0);
    for (long key = 0; key < entries; ++key) m.table[key] = digit(p, key);
    return m;
  }

  int digit(std::size_t pos, long key) const {
    long long f = (*funcs_)[pos];
    for (long i = 0; i < key; ++i) f /= c_;
    return static_cast<int>(f % c_);
  }

 private:
  void fill_values(const std::vector<int>& forced) {
    long key = 0;
    for (std::size_t p = 0; p < n_; ++p) {
      int var = order_[p];
      int v = forced[var];
      if (v < 0) v = digit(p, key);
      x_[var] = v;
      key = key * c_ + v;
    }
  }

  bool prop_holds(const CEvent& e) const {
    switch (e.kind) {
      case CEvent::K::True:
        return true;
      case CEvent::K::Atom:
        return x_[e.var] == e.value;
      case CEvent::K::Not:
        return !prop_holds(*e.a);
      case CEvent::K::And:
        return prop_holds(*e.a) && prop_holds(*e.b);
      case CEvent::K::PostInt:
        throw PchError(ErrorCode::Internal, "nested intervention in propositional body");
    }
    return false;
  }

  int c_;
  std::size_t n_;
  const std::vector<int>& order_;
  const Signature& sig_;
  const std::vector<long long>* funcs_ = nullptr;
  std::vector<int> x_;
  std::vector<int> no_forced_;
};

// ---------------------------------------------------------------------------
// Extreme branches: every mentioned atom is pinned to 0 or to its instance
// count by the branch literals. Any support world of a satisfying mixture
// must itself satisfy every pinned instance, so searching one deterministic
// profile (lazy tables, all causal orders) is complete for such branches.

struct RatBound {
  Rat value;
  bool strict = false;
};

void merge_upper(std::optional<RatBound>& cur, const Rat& value, bool strict) {
  if (!cur || value < cur->value)
    cur = RatBound{value, strict};
  else if (value == cur->value)
    cur->strict = cur->strict || strict;
}

void merge_lower(std::optional<RatBound>& cur, const Rat& value, bool strict) {
  if (!cur || value > cur->value)
    cur = RatBound{value, strict};
  else if (value == cur->value)
    cur->strict = cur->strict || strict;
}

struct BranchAnalysis {
  bool infeasible = false;
  bool extreme = false;
  std::vector<std::pair<int, bool>> pins;  // atom id -> must_hold
};

BranchAnalysis analyze_extreme(const Branch& branch, const AtomRegistry& reg) {
  BranchAnalysis out;
  std::map<int, std::optional<RatBound>> lower, upper;
  std::set<int> mentioned;
  for (const auto& lit : branch) {
    if (lit.expr.atom_coeffs.empty()) {
      bool holds = lit.strict ? lit.expr.constant < 0 : lit.expr.constant <= 0;
      if (!holds) {
        out.infeasible = true;
        return out;
      }
      continue;
    }
    if (lit.expr.atom_coeffs.size() != 1) return out;  // not a single-atom bound
    const auto& [atom_id, coef] = *lit.expr.atom_coeffs.begin();
    mentioned.insert(atom_id);
    Rat bound = -lit.expr.constant / coef;
    if (coef > 0)
      merge_upper(upper[atom_id], bound, lit.strict);
    else
      merge_lower(lower[atom_id], bound, lit.strict);
  }

  for (int id : mentioned) {
    Rat count(reg.atoms()[id].instance_count);
    std::optional<RatBound> lo{RatBound{Rat(0), false}};
    std::optional<RatBound> hi{RatBound{count, false}};
    if (auto it = lower.find(id); it != lower.end() && it->second)
      merge_lower(lo, it->second->value, it->second->strict);
    if (auto it = upper.find(id); it != upper.end() && it->second)
      merge_upper(hi, it->second->value, it->second->strict);
    if (lo->value > hi->value || (lo->value == hi->value && (lo->strict || hi->strict))) {
      out.infeasible = true;
      return out;
    }
    bool pin_true = lo->value == count && !lo->strict;
    bool pin_false = hi->value == 0 && !hi->strict;
    if (!pin_true && !pin_false) return out;  // interval leaves slack
    out.pins.emplace_back(id, pin_true);
  }
  out.extreme = true;
  return out;
}

struct CspConstraint {
  std::shared_ptr<CEvent> event;
  bool must_hold;
  int weight = 0;  // intervention footprint, for ordering
};

// Expands pins into per-instance constraints. Returns nullopt when the same
// instance is pinned both ways (branch unsatisfiable outright).
std::optional<std::vector<CspConstraint>> build_pin_constraints(
    const std::vector<std::pair<int, bool>>& pins, const AtomRegistry& reg, const Signature& sig) {
  std::vector<CspConstraint> out;
  std::map<std::string, bool> seen;
  for (const auto& [id, must] : pins) {
    for (auto& inst : detail::atom_instances(reg.atoms()[id], sig.domain_size)) {
      std::string key = print_event(inst);
      auto [it, fresh] = seen.emplace(key, must);
      if (!fresh) {
        if (it->second != must) return std::nullopt;
        continue;
      }
      auto compiled = std::make_shared<CEvent>(compile_event(inst, sig));
      out.push_back({compiled, must, compiled->intervention_weight});
    }
  }
  // Must-hold constraints pin table entries directly; process them first.
  std::stable_sort(out.begin(), out.end(), [](const CspConstraint& a, const CspConstraint& b) {
    return a.must_hold > b.must_hold;
  });
  return out;
}

// Backtracking over lazily created table entries. Each pending constraint
// remembers the entry that blocked its last evaluation; a constraint is only
// re-evaluated once that entry exists (a blocked evaluation stays blocked:
// entries read before the blocker are already assigned on this path, and an
// unassigned blocker can only move the block earlier after backtracking).
class CspSearch {
 public:
  CspSearch(const Signature& sig, const std::vector<int>& order,
            const std::vector<CspConstraint>& constraints, long node_cap)
      : c_(sig.domain_size), state_(sig, order), constraints_(constraints), node_cap_(node_cap) {
    blocker_.resize(constraints.size());
  }

  bool run() {
    std::vector<char> satisfied(constraints_.size(), 0);
    return dfs(satisfied);
  }
  const ProfileState& state() const { return state_; }

 private:
  struct Blocker {
    int pos = 0;
    long key = 0;
    bool valid = false;
  };

  bool dfs(std::vector<char>& satisfied) {
    if (++nodes_ > node_cap_) throw CapHit{"profile search node cap exceeded"};
    std::vector<std::size_t> flipped;
    bool failed = false;

    bool progress = true;
    while (progress && !failed) {
      progress = false;
      for (std::size_t i = 0; i < constraints_.size(); ++i) {
        if (satisfied[i]) continue;
        auto v = state_.eval(*constraints_[i].event);
        if (v) {
          if (*v != constraints_[i].must_hold) {
            failed = true;
            break;
          }
          satisfied[i] = 1;
          flipped.push_back(i);
          blocker_[i].valid = false;
          progress = true;
        } else {
          auto m = state_.last_missing();
          blocker_[i] = {m.pos, m.key, true};
        }
      }
    }

    if (!failed) {
      // Branch on the blocker shared by the most pending constraints.
      std::map<std::pair<int, long>, int> votes;
      bool any_pending = false;
      for (std::size_t i = 0; i < constraints_.size(); ++i) {
        if (satisfied[i]) continue;
        any_pending = true;
        ++votes[{blocker_[i].pos, blocker_[i].key}];
      }
      if (!any_pending) return true;
      std::pair<int, long> entry = votes.begin()->first;
      int best = 0;
      for (const auto& [candidate, count] : votes)
        if (count > best) {
          best = count;
          entry = candidate;
        }
      for (int value = 0; value < c_; ++value) {
        state_.assign(entry.first, entry.second, value);
        if (dfs(satisfied)) return true;
        state_.unassign(entry.first, entry.second);
      }
    }
    for (std::size_t i : flipped) satisfied[i] = 0;
    return false;
  }

  int c_;
  ProfileState state_;
  const std::vector<CspConstraint>& constraints_;
  std::vector<Blocker> blocker_;
  long node_cap_;
  long nodes_ = 0;
};

Scm single_profile_scm(const Signature& sig, const std::vector<int>& order,
                       std::vector<Mechanism> mechs) {
  Scm scm;
  scm.sig.domain_size = sig.domain_size;
  for (int var : order) scm.sig.endogenous.push_back(sig.endogenous[var]);
  std::string sel = fresh_name(sig, "SEL");
  scm.exo_vars.emplace_back(sel, 1);
  scm.exo_dist.push_back({{0}, Rat(1)});
  scm.mechanisms = std::move(mechs);
  scm.check();
  return scm;
}

// ---------------------------------------------------------------------------
// Non-extreme linear branches: enumerate every deterministic profile of the
// order, dedupe by atom values, and solve the mixture weights exactly.

bool profiles_enumerable(int c, std::size_t n, long cap) {
  long double estimate = 1;
  for (std::size_t p = 0; p < n; ++p) {
    estimate *= std::pow(static_cast<long double>(c),
                         std::pow(static_cast<long double>(c), static_cast<long double>(p)));
    if (estimate > static_cast<long double>(cap)) return false;
  }
  return true;
}

struct MixtureProblem {
  std::vector<std::vector<Rat>> columns;     // per distinct column: atom values
  std::vector<std::vector<long long>> reps;  // representative function indices
};

std::optional<MixtureProblem> scan_profiles(
    const Signature& sig, const std::vector<int>& order,
    const std::vector<std::vector<std::shared_ptr<CEvent>>>& instances, long profile_cap) {
  const int c = sig.domain_size;
  const std::size_t n = sig.endogenous.size();
  if (!profiles_enumerable(c, n, profile_cap)) return std::nullopt;

  std::vector<long long> func_count(n), func(n, 0);
  for (std::size_t p = 0; p < n; ++p) func_count[p] = ipow(c, static_cast<int>(ipow(c, p)));

  MixtureProblem out;
  std::map<std::vector<Rat>, std::size_t> seen;
  IndexedProfile profile(sig, order);
  profile.set_functions(&func);
  while (true) {
    std::vector<Rat> column(instances.size(), Rat(0));
    for (std::size_t a = 0; a < instances.size(); ++a) {
      long sat = 0;
      for (const auto& inst : instances[a])
        if (profile.eval(*inst)) ++sat;
      column[a] = Rat(sat);
    }
    if (seen.emplace(column, out.columns.size()).second) {
      out.columns.push_back(std::move(column));
      out.reps.push_back(func);
    }
    std::size_t p = 0;
    while (p < n && ++func[p] == func_count[p]) func[p++] = 0;
    if (p == n || n == 0) break;
  }
  return out;
}

Scm mixture_scm(const Signature& sig, const std::vector<int>& order,
                const std::vector<std::vector<long long>>& reps, const std::vector<Rat>& weights) {
  Scm scm;
  scm.sig.domain_size = sig.domain_size;
  for (int var : order) scm.sig.endogenous.push_back(sig.endogenous[var]);
  std::string sel = fresh_name(sig, "SEL");
  int r = static_cast<int>(reps.size());
  scm.exo_vars.emplace_back(sel, r);
  for (int s = 0; s < r; ++s) scm.exo_dist.push_back({{s}, weights[s]});

  IndexedProfile profile(sig, order);
  for (std::size_t p = 0; p < sig.endogenous.size(); ++p) {
    Mechanism merged;
    for (std::size_t q = 0; q < p; ++q) merged.endo_parents.push_back(sig.endogenous[order[q]]);
    merged.exo_parents.push_back(sel);
    long entries = ipow(sig.domain_size, static_cast<int>(p));
    merged.table.assign(entries * r, 0);
    for (int s = 0; s < r; ++s) {
      profile.set_functions(&reps[s]);
      for (long key = 0; key < entries; ++key)
        merged.table[key * r + s] = profile.digit(p, key);
    }
    scm.mechanisms.push_back(std::move(merged));
  }
  scm.check();
  return scm;
}

std::optional<std::pair<std::vector<long>, std::vector<Rat>>> solve_mixture(
    const std::vector<std::vector<Rat>>& columns, const Branch& branch, int m,
    const Bounds& bounds, std::atomic<bool>& capped) {
  long num_cols = static_cast<long>(columns.size());
  if (num_cols == 0) return std::nullopt;
  m = static_cast<int>(std::min<long>(m, num_cols));

  std::vector<std::vector<Rat>> lit_coeffs(branch.size(), std::vector<Rat>(num_cols, Rat(0)));
  for (std::size_t l = 0; l < branch.size(); ++l)
    for (long j = 0; j < num_cols; ++j) {
      Rat v = 0;
      for (const auto& [id, coef] : branch[l].expr.atom_coeffs) v += coef * columns[j][id];
      lit_coeffs[l][j] = std::move(v);
    }

  long tried = 0;
  for (int s = 1; s <= m; ++s) {
    std::vector<long> support(s);
    for (int i = 0; i < s; ++i) support[i] = i;
    while (true) {
      if (++tried > bounds.support_enum_cap) {
        capped = true;
        return std::nullopt;
      }
      LinearSystem sys;
      for (int i = 0; i < s; ++i) sys.var_names.push_back("w" + std::to_string(support[i]));
      for (std::size_t l = 0; l < branch.size(); ++l) {
        std::vector<Rat> coeffs(s);
        for (int i = 0; i < s; ++i) coeffs[i] = lit_coeffs[l][support[i]];
        sys.add(std::move(coeffs), branch[l].strict ? Rel::Lt : Rel::Le,
                -branch[l].expr.constant);
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
          return std::nullopt;
        }
        throw;
      }
      if (w) return std::make_pair(support, std::move(*w));
      if (!detail::next_combination(support, num_cols)) break;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Poly / conditional formulas: denominator-capped grid over mixtures of
// deduplicated profiles, judged by eval_formula itself. Incomplete by design.

void collect_instances_term(const TermPtr& t, int c, std::vector<EventPtr>& out) {
  switch (t->kind) {
    case Term::Kind::Prob:
      out.push_back(t->event);
      return;
    case Term::Kind::CondProb:
      out.push_back(t->event);
      out.push_back(t->condition);
      return;
    case Term::Kind::Sum:
      for (int v = 0; v < c; ++v)
        collect_instances_term(substitute_dummy(t->left, t->dummy, v), c, out);
      return;
    case Term::Kind::Add:
    case Term::Kind::Mul:
      collect_instances_term(t->left, c, out);
      collect_instances_term(t->right, c, out);
      return;
    case Term::Kind::Neg:
      collect_instances_term(t->left, c, out);
      return;
    case Term::Kind::Const:
    case Term::Kind::Unknown:
      return;
  }
}

void collect_instances(const FormulaPtr& f, int c, std::vector<EventPtr>& out) {
  switch (f->kind) {
    case Formula::Kind::Not:
      collect_instances(f->left, c, out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      collect_instances(f->left, c, out);
      collect_instances(f->right, c, out);
      return;
    default:
      collect_instances_term(f->tl, c, out);
      collect_instances_term(f->tr, c, out);
      return;
  }
}

// Weight vectors k/D over r parts with gcd(k..., D) = 1.
class CompositionIter {
 public:
  CompositionIter(int parts, int total) : k_(parts, 0), total_(total) {
    if (parts > 0) k_[0] = total;
  }

  const std::vector<int>& current() const { return k_; }

  bool next() {
    int r = static_cast<int>(k_.size());
    if (r <= 1) return false;
    int i = r - 2;
    while (i >= 0 && k_[i] == 0) --i;
    if (i < 0) return false;
    --k_[i];
    int rest = k_[r - 1] + 1;
    k_[r - 1] = 0;
    k_[i + 1] = rest;
    return true;
  }

  bool primitive() const {
    long long g = total_;
    for (int v : k_) g = std::gcd(g, static_cast<long long>(v));
    return g == 1;
  }

 private:
  std::vector<int> k_;
  int total_;
};

Verdict grid_search(const FormulaPtr& formula, const Signature& sig, const Bounds& bounds) {
  if (!sig.unknowns.empty())
    return Verdict::unknown(bounds,
                            "formulas with free unknowns are checked by bounded search in tests, "
                            "not by the solver");
  const int c = sig.domain_size;
  FragmentTag tag = classify_fragment(formula);

  std::vector<EventPtr> raw;
  collect_instances(formula, c, raw);
  std::vector<std::shared_ptr<CEvent>> instances;
  std::set<std::string> seen;
  for (auto& e : raw)
    if (seen.insert(print_event(e)).second)
      instances.push_back(std::make_shared<CEvent>(compile_event(e, sig)));

  bool order_capped = false;
  auto orders = causal_orders(sig.endogenous.size(), bounds.order_cap, order_capped);
  if (tag.layer == 1 && !orders.empty()) orders.resize(1);  // order is irrelevant at layer 1

  long tried = 0;
  for (const auto& order : orders) {
    const std::size_t n = sig.endogenous.size();
    if (!profiles_enumerable(c, n, bounds.profile_cap)) break;
    std::vector<long long> func_count(n), func(n, 0);
    for (std::size_t p = 0; p < n; ++p) func_count[p] = ipow(c, static_cast<int>(ipow(c, p)));

    std::vector<std::vector<long long>> reps;
    std::set<std::vector<bool>> truth_seen;
    IndexedProfile profile(sig, order);
    profile.set_functions(&func);
    while (true) {
      std::vector<bool> truth(instances.size());
      for (std::size_t i = 0; i < instances.size(); ++i) truth[i] = profile.eval(*instances[i]);
      if (truth_seen.insert(truth).second) reps.push_back(func);
      std::size_t p = 0;
      while (p < n && ++func[p] == func_count[p]) func[p++] = 0;
      if (p == n || n == 0) break;
    }
    if (reps.size() > 48) break;  // grid over this many parts is hopeless

    int r = static_cast<int>(reps.size());
    for (int denom = 1; denom <= bounds.denom_cap; ++denom) {
      CompositionIter comp(r, denom);
      do {
        if (!comp.primitive()) continue;
        if (++tried > bounds.grid_cap)
          return Verdict::unknown(bounds, "grid enumeration cap exceeded");
        std::vector<Rat> weights;
        for (int k : comp.current()) weights.emplace_back(Int(k), Int(denom));
        Scm candidate = mixture_scm(sig, order, reps, weights);
        if (eval_formula(candidate, formula) == Truth::True)
          return Verdict::sat(std::move(candidate), bounds);
      } while (comp.next());
    }
  }
  return Verdict::unknown(bounds, "denominator cap " + std::to_string(bounds.denom_cap) +
                                      " exhausted (poly search is incomplete by design)");
}

}  // namespace

// ---------------------------------------------------------------------------

Verdict check_sat_causal(const FormulaPtr& formula, const Signature& sig, const Bounds& bounds) {
  FragmentTag tag = classify_fragment(formula);
  if (tag.terms == FragmentTag::Terms::Poly || !sig.unknowns.empty())
    return grid_search(formula, sig, bounds);

  const int c = sig.domain_size;
  AtomRegistry reg;
  std::vector<Branch> branches;
  auto desugared = desugar(formula);
  try {
    branches = detail::dnf_branches(desugared, c, reg, bounds.dnf_branch_cap);
  } catch (const PchError& e) {
    if (e.code() == ErrorCode::CapExceeded) return Verdict::unknown(bounds, e.raw_message());
    throw;
  }

  std::atomic<bool> capped{false};
  bool order_capped = false;
  auto orders = causal_orders(sig.endogenous.size(), bounds.order_cap, order_capped);
  if (order_capped) capped = true;

  std::vector<std::vector<std::shared_ptr<CEvent>>> instances;
  for (const auto& atom : reg.atoms()) {
    std::vector<std::shared_ptr<CEvent>> list;
    for (auto& inst : detail::atom_instances(atom, c))
      list.push_back(std::make_shared<CEvent>(compile_event(inst, sig)));
    instances.push_back(std::move(list));
  }

  int default_m = static_cast<int>(reg.size()) + 1;
  int m = bounds.support_m ? std::max(*bounds.support_m, default_m) : default_m;

  for (const auto& branch : branches) {
    auto analysis = analyze_extreme(branch, reg);
    if (analysis.infeasible) continue;

    if (analysis.extreme) {
      auto constraints = build_pin_constraints(analysis.pins, reg, sig);
      if (!constraints) continue;  // an instance pinned both ways
      auto hit = parallel_first(static_cast<long>(orders.size()), bounds.jobs,
                                [&](long oi) -> std::optional<Scm> {
                                  CspSearch csp(sig, orders[oi], *constraints,
                                                bounds.csp_node_cap);
                                  try {
                                    if (csp.run())
                                      return single_profile_scm(sig, orders[oi],
                                                                csp.state().materialize());
                                  } catch (const CapHit&) {
                                    capped = true;
                                  }
                                  return std::nullopt;
                                });
      if (hit) {
        if (eval_formula(*hit, formula) != Truth::True)
          throw PchError(ErrorCode::Internal, "witness failed re-verification");
        return Verdict::sat(std::move(*hit), bounds);
      }
    } else {
      auto hit = parallel_first(
          static_cast<long>(orders.size()), bounds.jobs, [&](long oi) -> std::optional<Scm> {
            auto problem = scan_profiles(sig, orders[oi], instances, bounds.profile_cap);
            if (!problem) {
              capped = true;
              return std::nullopt;
            }
            auto solution = solve_mixture(problem->columns, branch, m, bounds, capped);
            if (!solution) return std::nullopt;
            std::vector<std::vector<long long>> reps;
            for (long j : solution->first) reps.push_back(problem->reps[j]);
            return mixture_scm(sig, orders[oi], reps, solution->second);
          });
      if (hit) {
        if (eval_formula(*hit, formula) != Truth::True)
          throw PchError(ErrorCode::Internal, "witness failed re-verification");
        return Verdict::sat(std::move(*hit), bounds);
      }
    }
  }
  if (capped) return Verdict::unknown(bounds, "enumeration caps hit (see bounds)");
  return Verdict::unsat(bounds);
}

}  // namespace pch
