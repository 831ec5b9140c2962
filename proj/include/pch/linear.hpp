#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pch/rational.hpp"

namespace pch {

enum class Rel { Le, Lt, Eq };

// Sum_i coeffs[i] * x_i  REL  rhs.
struct LinConstraint {
  std::vector<Rat> coeffs;
  Rel rel = Rel::Le;
  Rat rhs;
};

struct LinearSystem {
  std::vector<std::string> var_names;
  std::vector<LinConstraint> constraints;

  std::size_t num_vars() const { return var_names.size(); }
  void add(std::vector<Rat> coeffs, Rel rel, Rat rhs);
};

// Exact Fourier-Motzkin elimination with a strictness bit per derived
// constraint; equalities are removed by Gaussian substitution first. The
// witness is back-substituted (midpoints of open intervals) and verified
// against every input constraint. Throws CapExceeded when the derived
// constraint count passes constraint_cap.
std::optional<std::vector<Rat>> solve_linear_feasibility(const LinearSystem& system,
                                                         long constraint_cap = 200000);

}  // namespace pch
