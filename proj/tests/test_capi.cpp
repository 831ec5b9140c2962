// Exercises the shipped C surface: opaque handles, status codes, reports.

#include <cassert>
#include <cstdio>
#include <cstring>
#include <string>

#include "pch/pch_c.h"

#define CHECK(cond)                                                     \
  do {                                                                  \
    if (!(cond)) {                                                      \
      std::fprintf(stderr, "FAILED %s at line %d\n", #cond, __LINE__);  \
      return 1;                                                         \
    }                                                                   \
  } while (0)

int main() {
  std::string data = PCH_DATA_DIR;

  // Parse / classify / print a formula.
  pch_formula* formula = nullptr;
  char* err = nullptr;
  CHECK(pch_formula_parse_text("domain 2; vars X,Y;\nsum x { P(X=x & Y=1) } <= P(T)\n", &formula,
                               &err) == PCH_OK);
  int layer = 0, terms = -1, sigma = 0;
  CHECK(pch_formula_classify(formula, &layer, &terms, &sigma) == PCH_OK);
  CHECK(layer == 1);
  CHECK(terms == 0);
  CHECK(sigma == 1);

  char* printed = nullptr;
  CHECK(pch_formula_print(formula, &printed) == PCH_OK);
  CHECK(std::strstr(printed, "sum x") != nullptr);
  pch_string_free(printed);

  // Parse errors carry a message and a syntax status.
  pch_formula* bad = nullptr;
  char* bad_err = nullptr;
  CHECK(pch_formula_parse_text("domain 2; vars X;\nP(X=1) &&\n", &bad, &bad_err) ==
        PCH_ERR_SYNTAX);
  CHECK(bad == nullptr);
  CHECK(bad_err != nullptr && std::strstr(bad_err, "expected") != nullptr);
  pch_string_free(bad_err);

  // Evaluate the treatment fixture through the C API.
  pch_model* model = nullptr;
  CHECK(pch_model_parse_file((data + "/appb.scm").c_str(), &model, &err) == PCH_OK);
  pch_formula* golden = nullptr;
  CHECK(pch_formula_parse_text("domain 2; vars Z,X,Y;\nP(Y=1 | X=1) = 2/5\n", &golden, &err) ==
        PCH_OK);
  int result = -1;
  CHECK(pch_eval_formula(model, golden, &result, &err) == PCH_OK);
  CHECK(result == 1);

  // Command-level entry point mirrors the CLI exit codes.
  pch_options options;
  pch_options_init(&options);
  char witness_path[] = "/tmp/pch_capi_witness.scm";
  options.out_path = witness_path;
  pch_report* report = nullptr;
  CHECK(pch_run_sat((data + "/footnote3.pch").c_str(), &options, &report) == PCH_OK);
  CHECK(pch_report_exit_code(report) == 0);
  CHECK(std::strstr(pch_report_render(report), "sat") != nullptr);
  pch_report_free(report);

  // Missing files still produce a report, with the parse-error exit code.
  CHECK(pch_run_sat("/nonexistent/nope.pch", &options, &report) == PCH_OK);
  CHECK(pch_report_exit_code(report) == 2);
  pch_report_free(report);

  // Null arguments are rejected, not crashed on.
  CHECK(pch_run_sat(nullptr, &options, &report) == PCH_ERR_INVALID_ARG);
  CHECK(pch_formula_parse_text(nullptr, &formula, &err) == PCH_ERR_INVALID_ARG);

  pch_formula_free(formula);
  pch_formula_free(golden);
  pch_model_free(model);
  CHECK(std::strcmp(pch_version(), "1.0.0") == 0);
  std::puts("test_capi: all checks passed");
  return 0;
}
