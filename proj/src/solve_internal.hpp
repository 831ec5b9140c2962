#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "pch/parser.hpp"
#include "pch/solve.hpp"

namespace pch::detail {

// One maximal sum atom: a Sigma-chain over a single primitive.
struct AtomGroup {
  std::vector<std::string> binders;  // outermost first
  EventPtr event;
  TermPtr canonical;  // rebuilt Sum chain, used for printing and eval checks
  std::string key;
  Int instance_count;  // c^|binders|
};

class AtomRegistry {
 public:
  int intern(AtomGroup g) {
    auto it = index_.find(g.key);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(atoms_.size());
    index_.emplace(g.key, id);
    atoms_.push_back(std::move(g));
    return id;
  }
  const std::vector<AtomGroup>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

 private:
  std::map<std::string, int> index_;
  std::vector<AtomGroup> atoms_;
};

// sum_i coeff_i * atom_i + constant
struct LinearForm {
  std::map<int, Rat> atom_coeffs;
  Rat constant;

  void add_atom(int id, const Rat& c) {
    auto [it, fresh] = atom_coeffs.emplace(id, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) atom_coeffs.erase(it);
    }
  }
};

// expr <= 0 (strict <) with expr = lhs - rhs of the source comparison.
struct Literal {
  LinearForm expr;
  bool strict = false;
};

using Branch = std::vector<Literal>;

// Flattens a term into a linear combination over sum atoms. Sums distribute
// over Add/Neg/Const; P(T) chains fold into the constant. Throws
// FragmentError on Mul/CondProb/Unknown.
LinearForm flatten_linear(const TermPtr& term, int domain_size, AtomRegistry& reg);

// DNF of a desugared formula; literals are normalized linear forms.
std::vector<Branch> dnf_branches(const FormulaPtr& desugared, int domain_size,
                                 AtomRegistry& reg, long cap);

// All dummy instantiations of the atom's primitive, in mixed-radix order.
std::vector<EventPtr> atom_instances(const AtomGroup& g, int domain_size);

// Mixed-radix helpers over the joint endogenous assignment space.
std::vector<int> column_assignment(long col, std::size_t n, int domain_size);

// Single-selector-variable witness: column j of `assignments` gets
// probability weights[j]; mechanisms read the selector only.
Scm point_mixture_scm(const Signature& sig, const std::vector<std::vector<int>>& assignments,
                      const std::vector<Rat>& weights);

// Iterates k-subsets of {0..n-1} in lexicographic order.
bool next_combination(std::vector<long>& idx, long n);

}  // namespace pch::detail
