/* C interface to the PCH satisfiability toolkit. Opaque handles, status
 * codes, malloc'd error strings. This is the supported library surface; the
 * pch CLI is a thin wrapper over it. */
#ifndef PCH_C_H
#define PCH_C_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pch_status {
  PCH_OK = 0,
  PCH_ERR_SYNTAX = 1,
  PCH_ERR_VALIDATION = 2,
  PCH_ERR_IO = 3,
  PCH_ERR_CAP = 4,
  PCH_ERR_DOMAIN = 5,
  PCH_ERR_INVALID_ARG = 6,
  PCH_ERR_INTERNAL = 7
} pch_status;

typedef struct pch_formula pch_formula;
typedef struct pch_model pch_model;
typedef struct pch_report pch_report;

typedef struct pch_options {
  int bounds_m;         /* <= 0: automatic (#atoms + 1) */
  int denom_cap;        /* <= 0: default */
  int jobs;             /* <= 0: 1 */
  int unary_weights;    /* reductions: encode integers as P(T) sums */
  int json;             /* reports render as JSON */
  const char* engine;   /* NULL / "auto" / "l1" / "negfree" / "causal" */
  const char* out_path; /* NULL: derived from the input path */
} pch_options;

void pch_options_init(pch_options* options);

/* Parsing / printing. On failure *err (when non-NULL) receives a malloc'd
 * message; release it with pch_string_free. */
pch_status pch_formula_parse_text(const char* text, pch_formula** out, char** err);
pch_status pch_formula_parse_file(const char* path, pch_formula** out, char** err);
void pch_formula_free(pch_formula* formula);
pch_status pch_formula_print(const pch_formula* formula, char** out_text);

/* layer: 1..3; terms: 0 base, 1 lin, 2 poly; has_sigma: 0/1 */
pch_status pch_formula_classify(const pch_formula* formula, int* layer, int* terms,
                                int* has_sigma);

pch_status pch_model_parse_file(const char* path, pch_model** out, char** err);
void pch_model_free(pch_model* model);

/* result: 0 false, 1 true, 2 undefined */
pch_status pch_eval_formula(const pch_model* model, const pch_formula* formula, int* result,
                            char** err);

/* Command-level entry points mirroring the CLI. These always produce a
 * report (parse errors included; see pch_report_exit_code). */
pch_status pch_run_eval(const char* model_path, const char* formula_path,
                        const pch_options* options, pch_report** out);
pch_status pch_run_sat(const char* formula_path, const pch_options* options, pch_report** out);
pch_status pch_run_valid(const char* formula_path, const pch_options* options, pch_report** out);
pch_status pch_run_reduce(const char* problem, const char* input_path,
                          const pch_options* options, pch_report** out);
pch_status pch_run_transform(const char* op, const char* input_path, const pch_options* options,
                             pch_report** out);
pch_status pch_run_classify(const char* formula_path, const pch_options* options,
                            pch_report** out);

int pch_report_exit_code(const pch_report* report);
/* Rendered report (text or JSON per options); owned by the report. */
const char* pch_report_render(const pch_report* report);
void pch_report_free(pch_report* report);

void pch_string_free(char* text);

const char* pch_version(void);

#ifdef __cplusplus
}
#endif

#endif /* PCH_C_H */
