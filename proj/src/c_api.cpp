#include "pch/pch_c.h"

#include <cstdlib>
#include <cstring>
#include <new>

#include "pch/analysis.hpp"
#include "pch/eval.hpp"
#include "pch/parser.hpp"
#include "pch/report.hpp"

using namespace pch;

struct pch_formula {
  ParsedFormula parsed;
};

struct pch_model {
  Scm scm;
};

struct pch_report {
  RunReport report;
  std::string rendered;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

pch_status status_of(const PchError& e) {
  switch (e.code()) {
    case ErrorCode::Syntax: return PCH_ERR_SYNTAX;
    case ErrorCode::Io: return PCH_ERR_IO;
    case ErrorCode::CapExceeded: return PCH_ERR_CAP;
    case ErrorCode::DomainError: return PCH_ERR_DOMAIN;
    case ErrorCode::Internal: return PCH_ERR_INTERNAL;
    default: return PCH_ERR_VALIDATION;
  }
}

template <typename Fn>
pch_status guarded(char** err, Fn fn) {
  try {
    fn();
    return PCH_OK;
  } catch (const PchError& e) {
    if (err) *err = dup_string(e.what());
    return status_of(e);
  } catch (const std::exception& e) {
    if (err) *err = dup_string(e.what());
    return PCH_ERR_INTERNAL;
  }
}

RunOptions convert(const pch_options* options) {
  RunOptions out;
  if (!options) return out;
  if (options->bounds_m > 0) out.bounds_m = options->bounds_m;
  if (options->denom_cap > 0) out.denom_cap = options->denom_cap;
  if (options->jobs > 0) out.jobs = options->jobs;
  out.json = options->json != 0;
  out.unary_weights = options->unary_weights != 0;
  if (options->engine) out.engine = options->engine;
  if (options->out_path) out.out_path = options->out_path;
  return out;
}

template <typename Fn>
pch_status run_command(pch_report** out, Fn fn) {
  if (!out) return PCH_ERR_INVALID_ARG;
  *out = nullptr;
  try {
    auto* r = new pch_report{fn(), {}};
    r->rendered = r->report.render();
    *out = r;
    return PCH_OK;
  } catch (const std::bad_alloc&) {
    return PCH_ERR_INTERNAL;
  } catch (const std::exception&) {
    return PCH_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

void pch_options_init(pch_options* options) {
  if (!options) return;
  options->bounds_m = 0;
  options->denom_cap = 0;
  options->jobs = 0;
  options->unary_weights = 0;
  options->json = 0;
  options->engine = nullptr;
  options->out_path = nullptr;
}

pch_status pch_formula_parse_text(const char* text, pch_formula** out, char** err) {
  if (!text || !out) return PCH_ERR_INVALID_ARG;
  *out = nullptr;
  return guarded(err, [&] { *out = new pch_formula{parse_formula(text)}; });
}

pch_status pch_formula_parse_file(const char* path, pch_formula** out, char** err) {
  if (!path || !out) return PCH_ERR_INVALID_ARG;
  *out = nullptr;
  return guarded(err, [&] { *out = new pch_formula{parse_formula_file(path)}; });
}

void pch_formula_free(pch_formula* formula) { delete formula; }

pch_status pch_formula_print(const pch_formula* formula, char** out_text) {
  if (!formula || !out_text) return PCH_ERR_INVALID_ARG;
  return guarded(nullptr, [&] { *out_text = dup_string(print_formula(formula->parsed.formula)); });
}

pch_status pch_formula_classify(const pch_formula* formula, int* layer, int* terms,
                                int* has_sigma) {
  if (!formula) return PCH_ERR_INVALID_ARG;
  return guarded(nullptr, [&] {
    FragmentTag tag = classify_fragment(formula->parsed.formula);
    if (layer) *layer = tag.layer;
    if (terms) *terms = static_cast<int>(tag.terms);
    if (has_sigma) *has_sigma = tag.has_sigma ? 1 : 0;
  });
}

pch_status pch_model_parse_file(const char* path, pch_model** out, char** err) {
  if (!path || !out) return PCH_ERR_INVALID_ARG;
  *out = nullptr;
  return guarded(err, [&] { *out = new pch_model{parse_model_file(path)}; });
}

void pch_model_free(pch_model* model) { delete model; }

pch_status pch_eval_formula(const pch_model* model, const pch_formula* formula, int* result,
                            char** err) {
  if (!model || !formula || !result) return PCH_ERR_INVALID_ARG;
  return guarded(err, [&] {
    switch (eval_formula(model->scm, formula->parsed.formula)) {
      case Truth::False: *result = 0; break;
      case Truth::True: *result = 1; break;
      case Truth::Undefined: *result = 2; break;
    }
  });
}

pch_status pch_run_eval(const char* model_path, const char* formula_path,
                        const pch_options* options, pch_report** out) {
  if (!model_path || !formula_path) return PCH_ERR_INVALID_ARG;
  return run_command(out, [&] { return run_eval(model_path, formula_path, convert(options)); });
}

pch_status pch_run_sat(const char* formula_path, const pch_options* options, pch_report** out) {
  if (!formula_path) return PCH_ERR_INVALID_ARG;
  return run_command(out, [&] { return run_sat(formula_path, convert(options)); });
}

pch_status pch_run_valid(const char* formula_path, const pch_options* options, pch_report** out) {
  if (!formula_path) return PCH_ERR_INVALID_ARG;
  return run_command(out, [&] { return run_valid(formula_path, convert(options)); });
}

pch_status pch_run_reduce(const char* problem, const char* input_path,
                          const pch_options* options, pch_report** out) {
  if (!problem || !input_path) return PCH_ERR_INVALID_ARG;
  return run_command(out, [&] { return run_reduce(problem, input_path, convert(options)); });
}

pch_status pch_run_transform(const char* op, const char* input_path, const pch_options* options,
                             pch_report** out) {
  if (!op || !input_path) return PCH_ERR_INVALID_ARG;
  return run_command(out, [&] { return run_transform(op, input_path, convert(options)); });
}

pch_status pch_run_classify(const char* formula_path, const pch_options* options,
                            pch_report** out) {
  if (!formula_path) return PCH_ERR_INVALID_ARG;
  return run_command(out, [&] { return run_classify(formula_path, convert(options)); });
}

int pch_report_exit_code(const pch_report* report) {
  return report ? report->report.exit_code : 2;
}

const char* pch_report_render(const pch_report* report) {
  return report ? report->rendered.c_str() : "";
}

void pch_report_free(pch_report* report) { delete report; }

void pch_string_free(char* text) { std::free(text); }

const char* pch_version(void) { return "1.0.0"; }

}  // extern "C"
