#include "pch/linear.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "pch/errors.hpp"

namespace pch {

void LinearSystem::add(std::vector<Rat> coeffs, Rel rel, Rat rhs) {
  coeffs.resize(num_vars(), Rat(0));
  constraints.push_back({std::move(coeffs), rel, std::move(rhs)});
}

namespace {

struct Row {
  std::vector<Rat> coeffs;
  bool strict = false;  // strict <
  Rat rhs;
};

bool all_zero(const std::vector<Rat>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& r) { return r == 0; });
}

// Scales so the first nonzero coefficient is +/-1; lets duplicates collapse.
void normalize(Row& r) {
  for (const Rat& c : r.coeffs) {
    if (c != 0) {
      Rat scale = abs(c);
      for (Rat& x : r.coeffs) x /= scale;
      r.rhs /= scale;
      return;
    }
  }
}

struct Stage {
  std::size_t var;
  std::vector<Row> rows;  // rows mentioning var at elimination time
};

struct GaussStep {
  std::size_t var;
  std::vector<Rat> expr_coeffs;  // x_var = expr_rhs - sum coeffs * x
  Rat expr_rhs;
};

bool satisfied(const LinConstraint& c, const std::vector<Rat>& x) {
  Rat lhs = 0;
  for (std::size_t i = 0; i < c.coeffs.size(); ++i)
    if (c.coeffs[i] != 0) lhs += c.coeffs[i] * x[i];
  switch (c.rel) {
    case Rel::Le: return lhs <= c.rhs;
    case Rel::Lt: return lhs < c.rhs;
    case Rel::Eq: return lhs == c.rhs;
  }
  return false;
}

}  // namespace

std::optional<std::vector<Rat>> solve_linear_feasibility(const LinearSystem& system,
                                                         long constraint_cap) {
  const std::size_t n = system.num_vars();

  std::vector<Row> rows;
  std::vector<Row> equalities;
  for (const auto& c : system.constraints) {
    Row r{c.coeffs, c.rel == Rel::Lt, c.rhs};
    r.coeffs.resize(n, Rat(0));
    if (c.rel == Rel::Eq)
      equalities.push_back(std::move(r));
    else
      rows.push_back(std::move(r));
  }

  // Gaussian substitution removes the equalities.
  std::vector<GaussStep> gauss;
  std::vector<bool> eliminated(n, false);
  while (!equalities.empty()) {
    Row eq = std::move(equalities.back());
    equalities.pop_back();
    std::size_t pivot = n;
    for (std::size_t i = 0; i < n; ++i)
      if (eq.coeffs[i] != 0) {
        pivot = i;
        break;
      }
    if (pivot == n) {
      if (eq.rhs != 0) return std::nullopt;  // 0 = b with b != 0
      continue;
    }
    // x_pivot = (rhs - sum_{j != pivot} a_j x_j) / a_pivot
    GaussStep step;
    step.var = pivot;
    step.expr_rhs = eq.rhs / eq.coeffs[pivot];
    step.expr_coeffs.assign(n, Rat(0));
    for (std::size_t j = 0; j < n; ++j)
      if (j != pivot && eq.coeffs[j] != 0) step.expr_coeffs[j] = eq.coeffs[j] / eq.coeffs[pivot];
    auto substitute = [&](Row& r) {
      if (r.coeffs[pivot] == 0) return;
      Rat a = r.coeffs[pivot];
      r.coeffs[pivot] = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (step.expr_coeffs[j] != 0) r.coeffs[j] -= a * step.expr_coeffs[j];
      r.rhs -= a * step.expr_rhs;
    };
    for (auto& r : equalities) substitute(r);
    for (auto& r : rows) substitute(r);
    eliminated[pivot] = true;
    gauss.push_back(std::move(step));
  }

  // Fourier-Motzkin on the inequalities.
  std::vector<Stage> stages;
  auto prune = [&](std::vector<Row>& rs) -> bool {
    std::vector<Row> kept;
    std::set<std::pair<std::vector<Rat>, std::pair<bool, Rat>>> seen;
    for (auto& r : rs) {
      if (all_zero(r.coeffs)) {
        if (r.strict ? !(Rat(0) < r.rhs) : !(Rat(0) <= r.rhs)) return false;
        continue;
      }
      normalize(r);
      if (seen.insert({r.coeffs, {r.strict, r.rhs}}).second) kept.push_back(std::move(r));
    }
    rs = std::move(kept);
    return true;
  };
  if (!prune(rows)) return std::nullopt;

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i)
    if (!eliminated[i]) order.push_back(i);

  while (true) {
    // Pick the variable with the cheapest positive*negative pairing.
    std::size_t best = order.size();
    long best_cost = -1;
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
      std::size_t v = order[oi];
      long pos = 0, neg = 0;
      for (const auto& r : rows) {
        if (r.coeffs[v] > 0) ++pos;
        if (r.coeffs[v] < 0) ++neg;
      }
      long cost = pos * neg - (pos + neg);
      if (best == order.size() || cost < best_cost) {
        best = oi;
        best_cost = cost;
      }
    }
    if (best == order.size()) break;
    std::size_t v = order[best];
    order.erase(order.begin() + best);

    std::vector<Row> touching, rest;
    for (auto& r : rows)
      (r.coeffs[v] != 0 ? touching : rest).push_back(std::move(r));
    stages.push_back({v, touching});

    for (const auto& p : touching) {
      if (!(p.coeffs[v] > 0)) continue;
      for (const auto& q : touching) {
        if (!(q.coeffs[v] < 0)) continue;
        Row combined;
        combined.coeffs.assign(n, Rat(0));
        Rat sp = -q.coeffs[v];  // > 0
        Rat sq = p.coeffs[v];   // > 0
        for (std::size_t j = 0; j < n; ++j) {
          Rat c = sp * p.coeffs[j] + sq * q.coeffs[j];
          combined.coeffs[j] = std::move(c);
        }
        combined.rhs = sp * p.rhs + sq * q.rhs;
        combined.strict = p.strict || q.strict;
        rest.push_back(std::move(combined));
        if (static_cast<long>(rest.size()) > constraint_cap)
          throw PchError(ErrorCode::CapExceeded,
                         "Fourier-Motzkin derived more than " +
                             std::to_string(constraint_cap) + " constraints");
      }
    }
    rows = std::move(rest);
    if (!prune(rows)) return std::nullopt;
  }

  // Feasible; rebuild a witness in reverse elimination order.
  std::vector<Rat> x(n, Rat(0));
  std::vector<bool> assigned(n, false);
  for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
    std::optional<Rat> lo, hi;
    bool lo_strict = false, hi_strict = false;
    for (const auto& r : it->rows) {
      Rat rest = r.rhs;
      for (std::size_t j = 0; j < n; ++j)
        if (j != it->var && r.coeffs[j] != 0) rest -= r.coeffs[j] * x[j];
      Rat bound = rest / r.coeffs[it->var];
      if (r.coeffs[it->var] > 0) {  // upper bound
        if (!hi || bound < *hi) {
          hi = bound;
          hi_strict = r.strict;
        } else if (bound == *hi) {
          hi_strict = hi_strict || r.strict;
        }
      } else {  // lower bound (coefficient negative flips relation)
        if (!lo || bound > *lo) {
          lo = bound;
          lo_strict = r.strict;
        } else if (bound == *lo) {
          lo_strict = lo_strict || r.strict;
        }
      }
    }
    Rat value;
    if (lo && hi) {
      if (*lo == *hi)
        value = *lo;  // both closed, else FM would have been infeasible
      else
        value = (*lo + *hi) / 2;
    } else if (lo) {
      value = lo_strict ? *lo + 1 : *lo;
    } else if (hi) {
      value = hi_strict ? *hi - 1 : *hi;
    } else {
      value = 0;
    }
    x[it->var] = value;
    assigned[it->var] = true;
  }

  for (auto it = gauss.rbegin(); it != gauss.rend(); ++it) {
    Rat value = it->expr_rhs;
    for (std::size_t j = 0; j < n; ++j)
      if (it->expr_coeffs[j] != 0) value -= it->expr_coeffs[j] * x[j];
    x[it->var] = value;
    assigned[it->var] = true;
  }

  for (const auto& c : system.constraints)
    if (!satisfied(c, x))
      throw PchError(ErrorCode::Internal, "feasibility witness failed verification");
  return x;
}

}  // namespace pch
