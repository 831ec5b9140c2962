#include <sstream>

#include "solve_internal.hpp"

namespace pch {

std::string Bounds::describe() const {
  std::ostringstream os;
  os << "m=" << (support_m ? std::to_string(*support_m) : std::string("auto"))
     << " denom-cap=" << denom_cap << " column-cap=" << column_cap
     << " profile-cap=" << profile_cap << " order-cap=" << order_cap
     << " csp-node-cap=" << csp_node_cap << " jobs=" << jobs;
  return os.str();
}

Verdict Verdict::sat(Scm witness, Bounds bounds) {
  Verdict v;
  v.kind = Kind::Sat;
  v.witness = std::move(witness);
  v.bounds = std::move(bounds);
  return v;
}

Verdict Verdict::unsat(Bounds bounds) {
  Verdict v;
  v.kind = Kind::UnsatWithinBounds;
  v.bounds = std::move(bounds);
  return v;
}

Verdict Verdict::unknown(Bounds bounds, std::string reason) {
  Verdict v;
  v.kind = Kind::Unknown;
  v.bounds = std::move(bounds);
  v.reason = std::move(reason);
  return v;
}

std::string fresh_name(const Signature& sig, const std::string& base) {
  auto taken = [&](const std::string& name) {
    if (sig.is_var(name) || sig.is_unknown(name)) return true;
    for (const auto& d : sig.dummies)
      if (d == name) return true;
    return false;
  };
  if (!taken(base)) return base;
  for (int i = 0;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!taken(candidate)) return candidate;
  }
}

Verdict check_sat(const FormulaPtr& formula, const Signature& sig, const Bounds& bounds,
                  const std::string& engine) {
  if (engine == "l1") return check_sat_l1(formula, sig, bounds);
  if (engine == "negfree") return check_sat_l1_negfree(formula, sig, bounds);
  if (engine == "causal") return check_sat_causal(formula, sig, bounds);
  if (engine != "auto")
    throw PchError(ErrorCode::DomainError, "unknown engine '" + engine + "'");

  FragmentTag tag = classify_fragment(formula);
  if (tag.layer == 1 && tag.terms != FragmentTag::Terms::Poly && sig.unknowns.empty())
    return check_sat_l1(formula, sig, bounds);
  return check_sat_causal(formula, sig, bounds);
}

ValidityVerdict check_validity(const FormulaPtr& formula, const Signature& sig,
                               const Bounds& bounds, const std::string& engine) {
  Verdict dual = check_sat(f_not(formula), sig, bounds, engine);
  ValidityVerdict out;
  out.bounds = dual.bounds;
  switch (dual.kind) {
    case Verdict::Kind::Sat:
      out.kind = ValidityVerdict::Kind::NotValid;
      out.counterexample = std::move(dual.witness);
      break;
    case Verdict::Kind::UnsatWithinBounds:
      out.kind = ValidityVerdict::Kind::ValidWithinBounds;
      break;
    case Verdict::Kind::Unknown:
      out.kind = ValidityVerdict::Kind::Unknown;
      out.reason = std::move(dual.reason);
      break;
  }
  return out;
}

}  // namespace pch
