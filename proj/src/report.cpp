#include "pch/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>

#include "pch/parser.hpp"
#include "pch/reduce.hpp"
#include "pch/solve.hpp"

namespace pch {

namespace {

using Clock = std::chrono::steady_clock;

std::string render_text(const RunReport& r) {
  std::ostringstream os;
  os << "command: " << r.command << "\n";
  os << "status: " << r.status << "\n";
  for (const auto& [k, v] : r.fields) os << k << ": " << v << "\n";
  if (!r.bounds.empty()) os << "bounds: " << r.bounds << "\n";
  os << "time: " << r.elapsed_seconds << "s\n";
  return os.str();
}

std::string render_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["command"] = r.command;
  j["status"] = r.status;
  j["exit_code"] = r.exit_code;
  for (const auto& [k, v] : r.fields) j[k] = v;
  if (!r.bounds.empty()) j["bounds"] = r.bounds;
  j["elapsed_seconds"] = r.elapsed_seconds;
  return j.dump(2) + "\n";
}

Bounds bounds_from(const RunOptions& o) {
  Bounds b;
  b.support_m = o.bounds_m;
  if (o.denom_cap > 0) b.denom_cap = o.denom_cap;
  if (o.jobs > 0) b.jobs = o.jobs;
  return b;
}

std::string stem_of(const std::string& path) {
  auto dot = path.rfind('.');
  auto slash = path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
  return path.substr(0, dot);
}

struct Timer {
  Clock::time_point start = Clock::now();
  double seconds() const {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }
};

void collect_terms(const FormulaPtr& f, std::vector<TermPtr>& out) {
  switch (f->kind) {
    case Formula::Kind::Not:
      collect_terms(f->left, out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      collect_terms(f->left, out);
      collect_terms(f->right, out);
      return;
    default:
      out.push_back(f->tl);
      out.push_back(f->tr);
      return;
  }
}

// Deterministic pseudo-random probe models over a signature: one exogenous
// variable feeding every mechanism, random total tables, random rational
// weights. Used by `transform expand-sums` to spot value changes.
Scm probe_model(const Signature& sig, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Scm scm;
  scm.sig.domain_size = sig.domain_size;
  scm.sig.endogenous = sig.endogenous;
  std::string u = fresh_name(sig, "U");
  int exo_domain = 4;
  scm.exo_vars.emplace_back(u, exo_domain);
  std::vector<Rat> weights;
  Int total = 0;
  std::vector<Int> raw;
  for (int i = 0; i < exo_domain; ++i) {
    Int w = static_cast<long>(rng() % 7 + 1);
    raw.push_back(w);
    total += w;
  }
  for (int i = 0; i < exo_domain; ++i) scm.exo_dist.push_back({{i}, Rat(raw[i], total)});
  for (std::size_t i = 0; i < sig.endogenous.size(); ++i) {
    Mechanism m;
    for (std::size_t q = 0; q < i; ++q) m.endo_parents.push_back(sig.endogenous[q]);
    m.exo_parents.push_back(u);
    std::size_t entries = 1;
    for (std::size_t q = 0; q < i; ++q) entries *= sig.domain_size;
    entries *= exo_domain;
    for (std::size_t k = 0; k < entries; ++k)
      m.table.push_back(static_cast<int>(rng() % sig.domain_size));
    scm.mechanisms.push_back(std::move(m));
  }
  scm.check();
  return scm;
}

RunReport error_report(std::string command, const PchError& e, bool json, const Timer& timer) {
  RunReport r;
  r.command = std::move(command);
  r.status = "error";
  r.exit_code = e.code() == ErrorCode::CapExceeded ? 4 : 2;
  r.fields.emplace_back("error", e.what());
  r.json = json;
  r.elapsed_seconds = timer.seconds();
  return r;
}

}  // namespace

std::string RunReport::render() const { return json ? render_json(*this) : render_text(*this); }

RunReport run_eval(const std::string& model_path, const std::string& formula_path,
                   const RunOptions& options) {
  Timer timer;
  std::string command = "eval " + model_path + " " + formula_path;
  try {
    Scm scm = parse_model_file(model_path);
    ParsedFormula pf = parse_formula_file(formula_path);
    RunReport r;
    r.command = command;
    r.json = options.json;

    std::vector<TermPtr> terms;
    collect_terms(pf.formula, terms);
    std::vector<std::string> seen;
    for (const auto& t : terms) {
      std::string text = print_term(t);
      if (std::find(seen.begin(), seen.end(), text) != seen.end()) continue;
      seen.push_back(text);
      Valuation v = eval_term(scm, t);
      r.fields.emplace_back(text, v.defined ? rat_to_string(v.value) : "undefined");
    }
    Truth verdict = eval_formula(scm, pf.formula);
    r.status = truth_name(verdict);
    r.exit_code = verdict == Truth::True ? 0 : verdict == Truth::False ? 1 : 3;
    r.elapsed_seconds = timer.seconds();
    return r;
  } catch (const PchError& e) {
    return error_report(command, e, options.json, timer);
  }
}

RunReport run_sat(const std::string& formula_path, const RunOptions& options) {
  Timer timer;
  std::string command = "sat " + formula_path;
  try {
    ParsedFormula pf = parse_formula_file(formula_path);
    Bounds bounds = bounds_from(options);
    Verdict verdict = check_sat(pf.formula, pf.sig, bounds, options.engine);

    RunReport r;
    r.command = command;
    r.json = options.json;
    r.bounds = verdict.bounds.describe();
    r.fields.emplace_back("fragment", fragment_to_string(classify_fragment(pf.formula)));
    switch (verdict.kind) {
      case Verdict::Kind::Sat: {
        r.status = "sat";
        r.exit_code = 0;
        std::string path = options.out_path.empty()
                               ? stem_of(formula_path) + ".witness.scm"
                               : options.out_path;
        write_model_file(*verdict.witness, path);
        // The emitted file must re-verify before we report success.
        Scm reread = parse_model_file(path);
        if (eval_formula(reread, pf.formula) != Truth::True)
          throw PchError(ErrorCode::Internal, "emitted witness failed re-verification");
        r.fields.emplace_back("witness", path);
        break;
      }
      case Verdict::Kind::UnsatWithinBounds:
        r.status = "unsat-within-bounds";
        r.exit_code = 1;
        break;
      case Verdict::Kind::Unknown:
        r.status = "unknown";
        r.exit_code = 4;
        r.fields.emplace_back("reason", verdict.reason);
        break;
    }
    r.elapsed_seconds = timer.seconds();
    return r;
  } catch (const PchError& e) {
    return error_report(command, e, options.json, timer);
  }
}

RunReport run_valid(const std::string& formula_path, const RunOptions& options) {
  Timer timer;
  std::string command = "valid " + formula_path;
  try {
    ParsedFormula pf = parse_formula_file(formula_path);
    Bounds bounds = bounds_from(options);
    ValidityVerdict verdict = check_validity(pf.formula, pf.sig, bounds, options.engine);

    RunReport r;
    r.command = command;
    r.json = options.json;
    r.bounds = verdict.bounds.describe();
    r.fields.emplace_back("fragment", fragment_to_string(classify_fragment(pf.formula)));
    switch (verdict.kind) {
      case ValidityVerdict::Kind::ValidWithinBounds:
        r.status = "valid-within-bounds";
        r.exit_code = 0;
        break;
      case ValidityVerdict::Kind::NotValid: {
        r.status = "not-valid";
        r.exit_code = 1;
        std::string path = options.out_path.empty()
                               ? stem_of(formula_path) + ".counterexample.scm"
                               : options.out_path;
        write_model_file(*verdict.counterexample, path);
        Scm reread = parse_model_file(path);
        if (eval_formula(reread, pf.formula) != Truth::False)
          throw PchError(ErrorCode::Internal, "counterexample fails to falsify the formula");
        r.fields.emplace_back("counterexample", path);
        break;
      }
      case ValidityVerdict::Kind::Unknown:
        r.status = "unknown";
        r.exit_code = 4;
        r.fields.emplace_back("reason", verdict.reason);
        break;
    }
    r.elapsed_seconds = timer.seconds();
    return r;
  } catch (const PchError& e) {
    return error_report(command, e, options.json, timer);
  }
}

RunReport run_reduce(const std::string& problem, const std::string& input_path,
                     const RunOptions& options) {
  Timer timer;
  std::string command = "reduce " + problem + " " + input_path;
  try {
    std::string text = read_text_file(input_path);
    Reduction reduction;
    if (problem == "sat3") {
      reduction = reduce_sat3_to_l1(parse_dimacs(text));
    } else if (problem == "emajsat") {
      reduction = reduce_emajsat_to_l1(parse_emajsat_dimacs(text));
    } else if (problem == "qbf") {
      reduction = reduce_qbf_to_l2(parse_qdimacs(text), options.unary_weights);
    } else if (problem == "epr") {
      reduction = reduce_epr_to_l3(parse_epr(text), options.unary_weights);
    } else {
      throw PchError(ErrorCode::DomainError,
                     "unknown problem '" + problem + "' (sat3|emajsat|qbf|epr)");
    }
    std::string out_path =
        options.out_path.empty() ? stem_of(input_path) + ".pch" : options.out_path;
    std::string provenance = reduction.provenance + " source=" + input_path + " version=1";
    write_text_file(out_path, print_formula_file(reduction.sig, reduction.formula, provenance));

    RunReport r;
    r.command = command;
    r.json = options.json;
    r.status = "ok";
    r.exit_code = 0;
    r.fields.emplace_back("output", out_path);
    r.fields.emplace_back("fragment", fragment_to_string(classify_fragment(reduction.formula)));
    r.fields.emplace_back("size", std::to_string(formula_node_count(reduction.formula)));
    r.elapsed_seconds = timer.seconds();
    return r;
  } catch (const PchError& e) {
    return error_report(command, e, options.json, timer);
  }
}

RunReport run_transform(const std::string& op, const std::string& input_path,
                        const RunOptions& options) {
  Timer timer;
  std::string command = "transform " + op + " " + input_path;
  try {
    std::string text = read_text_file(input_path);
    ParsedFormula pf = parse_formula(text);
    std::string out_path = options.out_path.empty()
                               ? stem_of(input_path) + "." + op + ".pch"
                               : options.out_path;
    RunReport r;
    r.command = command;
    r.json = options.json;
    r.status = "ok";
    r.exit_code = 0;

    if (op == "expand-sums") {
      FormulaPtr expanded = expand_sums(pf.formula, pf.sig.domain_size);
      // The expansion must preserve the three-valued verdict on the bundled
      // probe models.
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Scm probe = probe_model(pf.sig, seed * 0x9E3779B97F4A7C15ull);
        if (eval_formula(probe, pf.formula) != eval_formula(probe, expanded))
          throw PchError(ErrorCode::Internal, "sum expansion changed a probe-model verdict");
      }
      Signature out_sig = pf.sig;
      out_sig.dummies.clear();
      write_text_file(out_path, print_formula_file(out_sig, expanded,
                                                   "transform=expand-sums source=" + input_path));
      r.fields.emplace_back("size", std::to_string(formula_node_count(expanded)));
    } else if (op == "eliminate-conditionals") {
      ConditionalElimination elim = eliminate_conditionals(pf.formula, pf.sig);
      if (!elim.changed) {
        write_text_file(out_path, text);  // byte-identical body
      } else {
        write_text_file(out_path,
                        print_formula_file(elim.sig, elim.formula,
                                           "transform=eliminate-conditionals source=" + input_path));
        r.fields.emplace_back("unknowns", std::to_string(elim.sig.unknowns.size()));
      }
    } else if (op == "desugar") {
      write_text_file(out_path, print_formula_file(pf.sig, desugar(pf.formula),
                                                   "transform=desugar source=" + input_path));
    } else {
      throw PchError(ErrorCode::DomainError,
                     "unknown transform '" + op +
                         "' (expand-sums|eliminate-conditionals|desugar)");
    }
    r.fields.emplace_back("output", out_path);
    r.elapsed_seconds = timer.seconds();
    return r;
  } catch (const PchError& e) {
    return error_report(command, e, options.json, timer);
  }
}

RunReport run_classify(const std::string& formula_path, const RunOptions& options) {
  Timer timer;
  std::string command = "classify " + formula_path;
  try {
    ParsedFormula pf = parse_formula_file(formula_path);
    FragmentTag tag = classify_fragment(pf.formula);
    RunReport r;
    r.command = command;
    r.json = options.json;
    r.status = "ok";
    r.exit_code = 0;
    r.fields.emplace_back("layer", std::to_string(tag.layer));
    r.fields.emplace_back("terms", terms_name(tag.terms));
    r.fields.emplace_back("sigma", tag.has_sigma ? "yes" : "no");
    r.fields.emplace_back("fragment", fragment_to_string(tag));
    r.elapsed_seconds = timer.seconds();
    return r;
  } catch (const PchError& e) {
    return error_report(command, e, options.json, timer);
  }
}

}  // namespace pch
