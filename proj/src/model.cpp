#include "pch/model.hpp"

#include <set>

namespace pch {

std::size_t Mechanism::table_size(int domain_size, const std::vector<int>& exo_sizes) const {
  std::size_t n = 1;
  for (std::size_t i = 0; i < endo_parents.size(); ++i) n *= static_cast<std::size_t>(domain_size);
  for (int s : exo_sizes) n *= static_cast<std::size_t>(s);
  return n;
}

int Scm::exo_index(const std::string& name) const {
  for (std::size_t i = 0; i < exo_vars.size(); ++i)
    if (exo_vars[i].first == name) return static_cast<int>(i);
  return -1;
}

void Scm::check() const {
  sig.check();
  if (mechanisms.size() != sig.endogenous.size())
    throw PchError(ErrorCode::IncompleteTable, "one mechanism per endogenous variable required");

  std::set<std::string> names(sig.endogenous.begin(), sig.endogenous.end());
  for (const auto& [name, size] : exo_vars) {
    if (size < 1)
      throw PchError(ErrorCode::DomainError, "exogenous domain of '" + name + "' must be >= 1");
    if (!names.insert(name).second)
      throw PchError(ErrorCode::DuplicateName, "exogenous '" + name + "' reuses a name");
  }

  Rat total = 0;
  std::set<std::vector<int>> seen_u;
  for (const auto& [u, w] : exo_dist) {
    if (u.size() != exo_vars.size())
      throw PchError(ErrorCode::DomainError, "distribution entry is not a total assignment");
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] < 0 || u[i] >= exo_vars[i].second)
        throw PchError(ErrorCode::DomainError,
                       "value out of range for exogenous '" + exo_vars[i].first + "'");
    if (w < 0) throw PchError(ErrorCode::DomainError, "negative weight in distribution");
    if (!seen_u.insert(u).second)
      throw PchError(ErrorCode::DuplicateAssignment, "duplicate exogenous assignment");
    total += w;
  }
  if (total != 1)
    throw PchError(ErrorCode::WeightSumNotOne,
                   "weights sum to " + rat_to_string(total) + ", expected 1");

  for (std::size_t i = 0; i < mechanisms.size(); ++i) {
    const Mechanism& m = mechanisms[i];
    for (const auto& p : m.endo_parents) {
      int j = sig.var_index(p);
      if (j < 0)
        throw PchError(ErrorCode::UnknownVariable, "unknown endogenous parent '" + p + "'");
      if (j >= static_cast<int>(i))
        throw PchError(ErrorCode::NonRecursiveMechanism,
                       "mechanism of '" + sig.endogenous[i] + "' depends on '" + p +
                           "', which does not precede it in the causal order");
    }
    std::vector<int> exo_sizes;
    for (const auto& p : m.exo_parents) {
      int j = exo_index(p);
      if (j < 0)
        throw PchError(ErrorCode::UnknownVariable, "unknown exogenous parent '" + p + "'");
      exo_sizes.push_back(exo_vars[j].second);
    }
    if (m.table.size() != m.table_size(sig.domain_size, exo_sizes))
      throw PchError(ErrorCode::IncompleteTable,
                     "mechanism table of '" + sig.endogenous[i] + "' is not total");
    for (int out : m.table)
      if (out < 0 || out >= sig.domain_size)
        throw PchError(ErrorCode::DomainError,
                       "mechanism output outside Val for '" + sig.endogenous[i] + "'");
  }
}

int Scm::mechanism_output(int i, const std::vector<int>& endo_values,
                          const std::vector<int>& exo_values) const {
  const Mechanism& m = mechanisms[i];
  std::size_t idx = 0;
  for (const auto& p : m.endo_parents) {
    idx = idx * static_cast<std::size_t>(sig.domain_size) +
          static_cast<std::size_t>(endo_values[sig.var_index(p)]);
  }
  for (const auto& p : m.exo_parents) {
    int j = exo_index(p);
    idx = idx * static_cast<std::size_t>(exo_vars[j].second) +
          static_cast<std::size_t>(exo_values[j]);
  }
  return m.table[idx];
}

}  // namespace pch
