#pragma once

#include <map>
#include <string>
#include <vector>

#include "pch/ast.hpp"

namespace pch {

// Deterministic mechanism of one endogenous variable: a total lookup table
// over the values of its parents (endogenous parents first, then exogenous).
struct Mechanism {
  std::vector<std::string> endo_parents;
  std::vector<std::string> exo_parents;
  // Row-major over parent domains, endo parents (domain c each) first.
  std::vector<int> table;

  std::size_t table_size(int domain_size, const std::vector<int>& exo_sizes) const;
};

// Finite SCM: exogenous joint distribution (exact rationals) plus ordered
// deterministic mechanisms. The order of sig.endogenous is the causal order.
struct Scm {
  Signature sig;
  std::vector<std::pair<std::string, int>> exo_vars;  // name, domain size
  // Each entry: total assignment to exo_vars (aligned), nonnegative weight.
  std::vector<std::pair<std::vector<int>, Rat>> exo_dist;
  std::vector<Mechanism> mechanisms;  // aligned with sig.endogenous

  int exo_index(const std::string& name) const;
  // Checks all Scm invariants; throws PchError on violation.
  void check() const;
  // Table lookup for endogenous variable i given full endo values (by causal
  // index) and full exo values.
  int mechanism_output(int i, const std::vector<int>& endo_values,
                       const std::vector<int>& exo_values) const;
};

}  // namespace pch
