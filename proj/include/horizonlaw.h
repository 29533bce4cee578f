/* C interface to the horizon-law core. Every entry point returns hl_status;
 * on failure hl_last_error() holds a thread-local message describing it.
 * Opaque handles own their memory and must be released with the matching
 * _free function. */
#ifndef HORIZONLAW_H
#define HORIZONLAW_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hl_status {
  HL_OK = 0,
  HL_ERR_ARGUMENT = 1,     /* invalid argument or malformed config */
  HL_ERR_DOMAIN = 2,       /* parameters outside a formula's domain */
  HL_ERR_RANGE = 3,        /* index out of range */
  HL_ERR_PARSE = 4,        /* unparsable CSV/JSON input */
  HL_ERR_IO = 5,           /* file open/read/write failure */
  HL_ERR_CONSTRUCTION = 6, /* sampled construction missed its bounds */
  HL_ERR_INTERNAL = 7
} hl_status;

/* Message for the most recent failure on this thread ("" when none). */
const char* hl_last_error(void);

const char* hl_version(void);

/* Frees strings returned through char** out-parameters. */
void hl_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Closed-form losses                                                   */

typedef struct hl_loss_params {
  double k1;
  double k2;
  double eta;
  double lambda0;
  double alpha_z;
  double noise_total;
} hl_loss_params;

typedef enum hl_regime { HL_REGIME_DENSE = 0, HL_REGIME_SCARCE = 1 } hl_regime;

typedef enum hl_regime_mode {
  HL_MODE_AUTOMATIC = 0,
  HL_MODE_DENSE = 1,
  HL_MODE_SCARCE = 2
} hl_regime_mode;

hl_status hl_bayesian_loss(const hl_loss_params* p, double d, double* out);
hl_status hl_approx_loss_dense(const hl_loss_params* p, double d, double n_regions,
                               double d_samples, int drop_tail_term, double* out);
hl_status hl_approx_loss_scarce(const hl_loss_params* p, double d,
                                double d_samples, double* out);
hl_status hl_approx_loss_optimal_partition(const hl_loss_params* p, double d,
                                           double n_regions, double* out);
hl_status hl_classify_regime(double d_samples, double n_regions, double horizon,
                             double threshold, hl_regime* regime_out,
                             double* xi_out);
hl_status hl_total_loss(const hl_loss_params* p, double d, double n_regions,
                        double d_samples, hl_regime_mode mode, double horizon,
                        double threshold, int drop_tail_term, double* out);

/* ------------------------------------------------------------------ */
/* Optimal dimension / horizon                                          */

typedef enum hl_solver_method {
  HL_SOLVER_SMALL_MODEL = 0,
  HL_SOLVER_LARGE_MODEL = 1,
  HL_SOLVER_SCARCE = 2,
  HL_SOLVER_NUMERIC = 3
} hl_solver_method;

typedef struct hl_optimal_result {
  double d_star;
  int d_star_int;
  int h_star; /* -1 until a horizon mapping is applied */
  hl_regime regime_used;
  hl_solver_method method;
  double lambert_value;  /* W(arg); NaN outside the small-model solver */
  double lambert_approx; /* the W(x) ~ x branch (arg itself) */
  int saturated;
} hl_optimal_result;

hl_status hl_lambert_w(double x, double* out);
hl_status hl_optimal_d_small_model(const hl_loss_params* p, double n_regions,
                                   hl_optimal_result* out);
hl_status hl_optimal_d_large_model(const hl_loss_params* p, double n_regions,
                                   double d_samples, hl_optimal_result* out);
/* form: 0 = quadratic-root prefactor, 1 = simple 2/(alpha_z+1) variant */
hl_status hl_optimal_d_scarce(const hl_loss_params* p, double d_samples, int form,
                              hl_optimal_result* out);
hl_status hl_optimal_d_numeric(const hl_loss_params* p, double n_regions,
                               double d_samples, hl_regime regime, int d_min,
                               int d_max, int drop_tail_term,
                               hl_optimal_result* out);
/* Maps d(H) = clamp(round(c_d * H), 1, d_total). */
hl_status hl_d_of_horizon(double c_d, int d_total, int horizon, int* d_out);
/* Smallest H with d(H) >= d_star_int; saturated when d_star_int > d_total. */
hl_status hl_optimal_horizon(double c_d, int d_total, int d_star_int,
                             int* h_star_out, int* saturated_out);

/* ------------------------------------------------------------------ */
/* Intrinsic model and synthetic data                                   */

typedef struct hl_spectrum_config {
  double lambda0;
  double alpha_z;
  int d_total;
  uint64_t seed;
} hl_spectrum_config;

typedef struct hl_noise_config {
  double eta;
  double sigma_m_sq;
  int s_frames;
  int d_i_s;
} hl_noise_config;

hl_status hl_eigenvalue(const hl_spectrum_config* cfg, int i, double* out);
/* mode: 0 = exact truncated sum, 1 = integral approximation */
hl_status hl_tail_variance(const hl_spectrum_config* cfg, int d, int approx,
                           double* out);

typedef struct hl_dataset hl_dataset;

/* Synthetic dataset under a random k1/k2-Lipschitz target (seeded by
 * target_seed). d_visible_override > 0 bypasses the horizon mapping and
 * must stay within [1, d_total]. */
hl_status hl_generate_dataset(const hl_spectrum_config* spectrum,
                              const hl_noise_config* noise, double k1, double k2,
                              int d_out, uint64_t target_seed, double c_d,
                              int64_t count, int horizon,
                              int d_visible_override, hl_dataset** out);
int64_t hl_dataset_rows(const hl_dataset* ds);
int hl_dataset_d_visible(const hl_dataset* ds);
int hl_dataset_d_out(const hl_dataset* ds);
/* Row-major copies; buffers must hold rows*d_visible (inputs) or rows*d_out
 * (targets) doubles. */
hl_status hl_dataset_inputs(const hl_dataset* ds, double* buf, int64_t buf_len);
hl_status hl_dataset_targets(const hl_dataset* ds, double* buf, int64_t buf_len);
hl_status hl_dataset_write_csv(const hl_dataset* ds, const char* path);
void hl_dataset_free(hl_dataset* ds);

/* ------------------------------------------------------------------ */
/* Spectrum estimation                                                  */

typedef enum hl_header_mode {
  HL_HEADER_DETECT = 0,
  HL_HEADER_YES = 1,
  HL_HEADER_NO = 2
} hl_header_mode;

typedef enum hl_gap_policy {
  HL_GAP_REJECT = 0,
  HL_GAP_DROP_ROW = 1,
  HL_GAP_INTERPOLATE = 2
} hl_gap_policy;

typedef struct hl_table hl_table;

/* Numeric CSV loader shared with the estimator. Column names come from the
 * header row or are synthesized as c1..cV. */
hl_status hl_load_table(const char* path, hl_header_mode header,
                        hl_gap_policy gaps, hl_table** out);
int64_t hl_table_rows(const hl_table* tbl);
int hl_table_cols(const hl_table* tbl);
const char* hl_table_column_name(const hl_table* tbl, int col);
/* Copies one column; buf must hold hl_table_rows doubles. */
hl_status hl_table_column(const hl_table* tbl, int col, double* buf,
                          int64_t buf_len);
void hl_table_free(hl_table* tbl);

typedef struct hl_spectrum_result hl_spectrum_result;

/* CSV series -> normalized windows -> PCA spectrum -> decay fit.
 * zipf_i_max = 0 truncates at the noise floor. */
hl_status hl_estimate_spectrum_csv(const char* path, hl_header_mode header,
                                   hl_gap_policy gaps, int window_len, int stride,
                                   int channel_independent, int zipf_i_min,
                                   int zipf_i_max, int threads,
                                   hl_spectrum_result** out);
int hl_spectrum_count(const hl_spectrum_result* res);
hl_status hl_spectrum_eigenvalues(const hl_spectrum_result* res, double* buf,
                                  int64_t buf_len);
double hl_spectrum_lambda0_hat(const hl_spectrum_result* res);
double hl_spectrum_alpha_z_hat(const hl_spectrum_result* res);
double hl_spectrum_r_squared(const hl_spectrum_result* res);
double hl_spectrum_slope_stderr(const hl_spectrum_result* res);
int hl_spectrum_fit_i_min(const hl_spectrum_result* res);
int hl_spectrum_fit_i_max(const hl_spectrum_result* res);
int hl_spectrum_flat(const hl_spectrum_result* res);
/* Smallest d capturing `energy` of the spectrum mass, 0 < energy < 1. */
hl_status hl_spectrum_intrinsic_dim(const hl_spectrum_result* res, double energy,
                                    int* out);
void hl_spectrum_free(hl_spectrum_result* res);

/* Decay fit on caller-provided eigenvalues (descending). */
typedef struct hl_zipf_fit {
  double lambda0_hat;
  double alpha_z_hat;
  double r_squared;
  double slope_stderr;
  int fit_i_min;
  int fit_i_max;
  int flat_spectrum;
} hl_zipf_fit;

hl_status hl_fit_zipf(const double* eigenvalues, int64_t count, int i_min,
                      int i_max, double floor_ratio, double flat_threshold,
                      hl_zipf_fit* out);
hl_status hl_intrinsic_dim(const double* eigenvalues, int64_t count,
                           double energy, int* out);

/* ------------------------------------------------------------------ */
/* Scaling-curve fits                                                   */

typedef struct hl_curve_report hl_curve_report;

/* Fits A + B x^-alpha plus the three alternatives and ranks them by AIC.
 * Entries are ordered best-first; skipped fits sort last. */
hl_status hl_fit_curves(const double* xs, const double* ys, int64_t n,
                        double alpha_min, double alpha_max,
                        hl_curve_report** out);
int hl_curve_count(const hl_curve_report* rep);
const char* hl_curve_model_name(const hl_curve_report* rep, int idx);
int hl_curve_param_count(const hl_curve_report* rep, int idx);
hl_status hl_curve_params(const hl_curve_report* rep, int idx, double* buf,
                          int64_t buf_len);
double hl_curve_rss(const hl_curve_report* rep, int idx);
double hl_curve_aic(const hl_curve_report* rep, int idx);
double hl_curve_bic(const hl_curve_report* rep, int idx);
int hl_curve_skipped(const hl_curve_report* rep, int idx);
const char* hl_curve_skip_reason(const hl_curve_report* rep, int idx);
int hl_curve_alpha_unidentifiable(const hl_curve_report* rep, int idx);
/* Full report as JSON; free with hl_string_free. */
hl_status hl_curve_report_json(const hl_curve_report* rep, char** out);
void hl_curve_free(hl_curve_report* rep);

/* ------------------------------------------------------------------ */
/* Monte Carlo experiments                                              */

typedef struct hl_experiment_report hl_experiment_report;

/* Runs the experiment described by a JSON document (see the schemas shipped
 * with the library): nn_risk, quantizer_distortion, pwl_learner, downsample,
 * or ols_noise_term. */
hl_status hl_run_experiment_json(const char* config_json,
                                 hl_experiment_report** out);
hl_status hl_report_json(const hl_experiment_report* rep, char** out);
hl_status hl_report_csv(const hl_experiment_report* rep, char** out);
const char* hl_report_experiment(const hl_experiment_report* rep);
int hl_report_point_count(const hl_experiment_report* rep);
double hl_report_fitted_exponent(const hl_experiment_report* rep);
double hl_report_theory_exponent(const hl_experiment_report* rep);
double hl_report_argmin_x(const hl_experiment_report* rep);
void hl_report_free(hl_experiment_report* rep);

/* ------------------------------------------------------------------ */
/* JSON schema validation (the subset used by the shipped schemas)      */

/* HL_OK: document conforms. HL_ERR_PARSE: malformed JSON or violation;
 * *error_out (optional) receives a path-qualified message. */
hl_status hl_validate_json(const char* schema_json, const char* doc_json,
                           char** error_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HORIZONLAW_H */
