// pch: evaluate, solve, reduce, and transform probabilistic-causal formulas.
// All work happens behind the C API (pch_c.h).

#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "pch/pch_c.h"

namespace {

struct CommonFlags {
  std::string bounds;  // "m=<int>"
  int denom_cap = 0;
  int jobs = 0;
  bool json = false;
  bool unary = false;
  std::string engine = "auto";
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool solver_flags) {
  cmd->add_option("--out", flags.out, "output path (witness/result file)");
  cmd->add_flag("--json", flags.json, "machine-readable report");
  if (solver_flags) {
    cmd->add_option("--bounds", flags.bounds, "solver bounds, e.g. m=5");
    cmd->add_option("--denom-cap", flags.denom_cap, "denominator cap for the poly grid search");
    cmd->add_option("--jobs", flags.jobs, "parallel enumeration workers (deterministic verdicts)");
    cmd->add_option("--engine", flags.engine, "auto|l1|negfree|causal");
  }
}

int parse_bounds_m(const std::string& text) {
  if (text.empty()) return 0;
  if (text.rfind("m=", 0) != 0) {
    std::fprintf(stderr, "error: --bounds expects m=<int>\n");
    std::exit(2);
  }
  return std::atoi(text.c_str() + 2);
}

pch_options make_options(const CommonFlags& flags) {
  pch_options options;
  pch_options_init(&options);
  options.bounds_m = parse_bounds_m(flags.bounds);
  options.denom_cap = flags.denom_cap;
  options.jobs = flags.jobs;
  options.json = flags.json ? 1 : 0;
  options.unary_weights = flags.unary ? 1 : 0;
  options.engine = flags.engine.c_str();
  options.out_path = flags.out.empty() ? nullptr : flags.out.c_str();
  return options;
}

int finish(pch_report* report) {
  if (!report) {
    std::fprintf(stderr, "error: command failed to produce a report\n");
    return 2;
  }
  std::fputs(pch_report_render(report), stdout);
  int code = pch_report_exit_code(report);
  pch_report_free(report);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Satisfiability, validity, evaluation, and reduction compilers for "
               "probabilistic, interventional, and counterfactual formulas"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string model_path, formula_path, problem, op, input_path;

  auto* eval = app.add_subcommand("eval", "evaluate a formula against a model exactly");
  eval->add_option("model", model_path, ".scm model file")->required();
  eval->add_option("formula", formula_path, ".pch formula file")->required();
  add_common(eval, flags, false);

  auto* sat = app.add_subcommand("sat", "bounded satisfiability with witness emission");
  sat->add_option("formula", formula_path, ".pch formula file")->required();
  add_common(sat, flags, true);

  auto* valid = app.add_subcommand("valid", "bounded validity via the dual satisfiability call");
  valid->add_option("formula", formula_path, ".pch formula file")->required();
  add_common(valid, flags, true);

  auto* reduce = app.add_subcommand("reduce", "compile a source problem into a .pch instance");
  reduce->add_option("problem", problem, "sat3|emajsat|qbf|epr")->required();
  reduce->add_option("input", input_path, "source instance file")->required();
  reduce->add_flag("--unary", flags.unary, "encode integer thresholds as P(T) sums");
  add_common(reduce, flags, false);

  auto* transform = app.add_subcommand("transform", "rewrite a formula file");
  transform->add_option("op", op, "expand-sums|eliminate-conditionals|desugar")->required();
  transform->add_option("input", input_path, ".pch formula file")->required();
  add_common(transform, flags, false);

  auto* classify = app.add_subcommand("classify", "report the formula's language fragment");
  classify->add_option("formula", formula_path, ".pch formula file")->required();
  add_common(classify, flags, false);

  CLI11_PARSE(app, argc, argv);

  pch_options options = make_options(flags);
  pch_report* report = nullptr;

  if (eval->parsed())
    pch_run_eval(model_path.c_str(), formula_path.c_str(), &options, &report);
  else if (sat->parsed())
    pch_run_sat(formula_path.c_str(), &options, &report);
  else if (valid->parsed())
    pch_run_valid(formula_path.c_str(), &options, &report);
  else if (reduce->parsed())
    pch_run_reduce(problem.c_str(), input_path.c_str(), &options, &report);
  else if (transform->parsed())
    pch_run_transform(op.c_str(), input_path.c_str(), &options, &report);
  else if (classify->parsed())
    pch_run_classify(formula_path.c_str(), &options, &report);

  return finish(report);
}
