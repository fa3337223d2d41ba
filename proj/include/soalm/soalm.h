/* C interface to the soalm solver library.
 *
 * All objects are opaque handles created and destroyed here; every function
 * that can fail returns a soalm status code and leaves a human-readable
 * message in soalm_last_error() (thread-local). Strings returned through
 * char** out-parameters are owned by the caller and released with
 * soalm_string_free().
 */
#ifndef SOALM_H
#define SOALM_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct soalm_problem soalm_problem;
typedef struct soalm_report soalm_report;

/* Status codes. The CLI maps these onto its exit codes directly. */
enum {
  SOALM_OK = 0,
  SOALM_ERR_INVALID_ARG = 1,
  SOALM_ERR_MAX_OUTER = 2,   /* solve stopped at the iteration cap */
  SOALM_ERR_CONFIG = 3,      /* unparsable or inconsistent problem config */
  SOALM_ERR_INNER_FAIL = 4,  /* inner minimization failed */
  SOALM_ERR_IO = 5,
  SOALM_ERR_NUMERIC = 6
};

enum {
  SOALM_METHOD_FIRST = 0, /* classic multiplier update */
  SOALM_METHOD_SECOND = 1 /* generalized-Newton multiplier update */
};

typedef struct soalm_options {
  double c;          /* penalty parameter, fixed over the run */
  int method;        /* SOALM_METHOD_* */
  double outer_tol;  /* stop when the total KKT residual drops below */
  int max_outer;
  double inner_tol;  /* absolute tolerance on the inner gradient norm */
  int max_inner;
  int track_reference; /* record eta_k against the reference solution */
  double eta_stop;     /* reference-mode stop threshold on eta_k */
} soalm_options;

void soalm_options_init(soalm_options* opt);

/* -- problems -------------------------------------------------------- */
int soalm_problem_builtin(const char* name, soalm_problem** out);
int soalm_problem_from_json(const char* json_text, soalm_problem** out);
int soalm_problem_from_json_file(const char* path, soalm_problem** out);
void soalm_problem_free(soalm_problem* p);

int soalm_problem_primal_dim(const soalm_problem* p);
int soalm_problem_eq_count(const soalm_problem* p);
int soalm_problem_cone_dim(const soalm_problem* p);
int soalm_problem_has_reference(const soalm_problem* p);
/* y must hold eq_count + cone_dim entries */
int soalm_problem_reference_multipliers(const soalm_problem* p, double* y, int len);

/* -- solving --------------------------------------------------------- */
/* y0 may be NULL for the problem default ((100,100) on nlp_toy, zeros
 * otherwise). Returns SOALM_OK, SOALM_ERR_MAX_OUTER, or
 * SOALM_ERR_INNER_FAIL; a report is produced in all three cases. */
int soalm_solve(const soalm_problem* p, const soalm_options* opt, const double* y0,
                int y0_len, soalm_report** out);
void soalm_report_free(soalm_report* r);

int soalm_report_converged(const soalm_report* r);
int soalm_report_outer_iterations(const soalm_report* r);
int soalm_report_fallback_count(const soalm_report* r);
double soalm_report_kkt_total(const soalm_report* r);
/* NaN when the rate is not computable from the history */
double soalm_report_linear_rate(const soalm_report* r);
double soalm_report_order_estimate(const soalm_report* r);
int soalm_report_history_length(const soalm_report* r);
int soalm_report_history_row(const soalm_report* r, int k, double* eta,
                             double* kkt_total, double* step_norm, int* fallback);
int soalm_report_multipliers(const soalm_report* r, double* y, int len);

/* -- report files ----------------------------------------------------- */
int soalm_report_write_csv(const soalm_report* r, const char* path);
int soalm_report_write_plot(const soalm_report* r, const char* path);
int soalm_report_summary_json(const soalm_report* r, char** out_json);
int soalm_write_compare_csv(const soalm_report* first_order,
                            const soalm_report* second_order, const char* path);
int soalm_write_compare_plot(const soalm_report* first_order,
                             const soalm_report* second_order, const char* path);

/* -- checkers ---------------------------------------------------------- */
/* Runs the derivative check plus LICQ / nondegeneracy / second-order
 * sufficiency / assumption checks at the reference solution (or, without
 * one, at the result of a converged second-order solve). all_pass gets 1
 * only if every applicable check passed. */
int soalm_check(const soalm_problem* p, const soalm_options* opt, char** out_json,
                int* all_pass);

void soalm_string_free(char* s);
const char* soalm_last_error(void);

#ifdef __cplusplus
}
#endif

#endif /* SOALM_H */
