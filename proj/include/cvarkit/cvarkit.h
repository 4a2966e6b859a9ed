/* C interface to cvarkit. Every object is an opaque handle released by its
 * matching *_free function. Functions that can fail return cvk_status; on
 * failure cvk_last_error() describes the problem for the calling thread.
 * Matrices cross the boundary row-major. Strings returned by accessors are
 * owned by the handle and stay valid until it is freed. */
#ifndef CVARKIT_H
#define CVARKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CVK_API __declspec(dllexport)
#else
#define CVK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cvk_status {
    CVK_OK = 0,
    CVK_INVALID_ARGUMENT = 1,
    CVK_IO = 2,
    CVK_MISSING_COLUMN = 3,
    CVK_NON_NUMERIC_CELL = 4,
    CVK_DUPLICATE_TIMESTAMP = 5,
    CVK_UNASSIGNED_COLUMN = 6,
    CVK_INVALID_ROLES = 7,
    CVK_TOO_SHORT = 8,
    CVK_SINGULAR_REGRESSOR_MATRIX = 9,
    CVK_SINGULAR_MOMENT_MATRIX = 10,
    CVK_NOT_POSITIVE_DEFINITE = 11,
    CVK_RANK_OUT_OF_BOUNDS = 12,
    CVK_GRANGER_CONDITION_VIOLATED = 13,
    CVK_CONSTANT_POLICY = 14,
    CVK_NO_TREATED_PERIODS = 15,
    CVK_BOOTSTRAP_DEGENERATE = 16,
    CVK_DEGENERATE_SAMPLE = 17,
    CVK_INFINITE_VARIANCE = 18,
    CVK_NO_POSITIVE_MASS = 19,
    CVK_SPEC_THEOREM_MISMATCH = 20,
    CVK_TOO_FEW_OBSERVATIONS = 21,
    CVK_UNORDERED_TIMESTAMPS = 22,
    CVK_INTERNAL = 100
} cvk_status;

CVK_API const char* cvk_version(void);
CVK_API const char* cvk_last_error(void);
CVK_API const char* cvk_status_name(cvk_status status);
/* 1 for numerical failures (singular matrices, bootstrap collapse, ...), 0 otherwise. */
CVK_API int cvk_status_is_numerical(cvk_status status);

/* ---- panels ---------------------------------------------------------- */

typedef struct cvk_panel cvk_panel;

CVK_API cvk_status cvk_panel_load(const char* csv_path, const char* roles_path, cvk_panel** out);
CVK_API cvk_status cvk_panel_parse(const char* csv_text, const char* roles_text, cvk_panel** out);
/* `roles[i]` is "policy:k", "treated:j" or "control:j". */
CVK_API cvk_status cvk_panel_from_matrix(const double* values, size_t rows, size_t cols, const char* const* labels,
                                         const char* const* roles, cvk_panel** out);
CVK_API void cvk_panel_free(cvk_panel* panel);

CVK_API size_t cvk_panel_rows(const cvk_panel* panel);
CVK_API size_t cvk_panel_cols(const cvk_panel* panel);
CVK_API const char* cvk_panel_label(const cvk_panel* panel, size_t col);
CVK_API const char* cvk_panel_role(const cvk_panel* panel, size_t col);
CVK_API const char* cvk_panel_time(const cvk_panel* panel, size_t row);
/* Copies rows * cols values into `out` (capacity in doubles). */
CVK_API cvk_status cvk_panel_values(const cvk_panel* panel, double* out, size_t capacity);

CVK_API cvk_status cvk_panel_first_difference(const cvk_panel* panel, cvk_panel** out);
CVK_API cvk_status cvk_panel_dummy_transform(const cvk_panel* panel, int policy_k, double quantile, cvk_panel** out);
CVK_API cvk_status cvk_panel_dummy_threshold(const cvk_panel* panel, int policy_k, double threshold, cvk_panel** out);
/* Keeps the columns whose role kind is flagged, in canonical order. */
CVK_API cvk_status cvk_panel_select_roles(const cvk_panel* panel, int policies, int treated, int controls,
                                          cvk_panel** out);

/* ---- reduced-form VAR ------------------------------------------------ */

typedef struct cvk_var_model cvk_var_model;

CVK_API cvk_status cvk_var_estimate(const cvk_panel* panel, int p, int intercept, cvk_var_model** out);
CVK_API void cvk_var_free(cvk_var_model* model);

CVK_API size_t cvk_var_dim(const cvk_var_model* model);
CVK_API int cvk_var_lags(const cvk_var_model* model);
CVK_API size_t cvk_var_nobs(const cvk_var_model* model);
CVK_API double cvk_var_loglik(const cvk_var_model* model);
CVK_API const char* cvk_var_label(const cvk_var_model* model, size_t series);
/* A_lag (1-based), n x n. */
CVK_API cvk_status cvk_var_coefficients(const cvk_var_model* model, int lag, double* out);
CVK_API cvk_status cvk_var_intercept(const cvk_var_model* model, double* out);
CVK_API cvk_status cvk_var_sigma(const cvk_var_model* model, double* out);

/* `bic` receives p_max values, BIC(1)..BIC(p_max). */
CVK_API cvk_status cvk_var_select_lag_bic(const cvk_panel* panel, int p_max, int intercept, int* p_star, double* bic);

/* Unit-shock Cholesky impact column for policy `shock` (0-based among policies);
 * `ordering` may be NULL for the identity ordering. */
CVK_API cvk_status cvk_var_impact(const cvk_var_model* model, const int* ordering, size_t ordering_len, int shock,
                                  double* out);

/* ---- residual diagnostics -------------------------------------------- */

typedef struct cvk_bg_result {
    double statistic;
    int df;
    int h_lags;
    double p_value;
    double levels[3];
    double critical_values[3];
    int reject[3];
} cvk_bg_result;

CVK_API cvk_status cvk_bg_critical_values(int df, double out[3]);
CVK_API cvk_status cvk_var_breusch_godfrey(const cvk_var_model* model, int h_lags, cvk_bg_result* out);

/* ---- VECM and rank test ---------------------------------------------- */

typedef struct cvk_vecm_model cvk_vecm_model;
typedef struct cvk_rank_test cvk_rank_test;

CVK_API cvk_status cvk_vecm_estimate(const cvk_panel* panel, int p, int r, int constant, cvk_vecm_model** out);
CVK_API void cvk_vecm_free(cvk_vecm_model* model);

CVK_API size_t cvk_vecm_dim(const cvk_vecm_model* model);
CVK_API int cvk_vecm_rank(const cvk_vecm_model* model);
CVK_API int cvk_vecm_lags(const cvk_vecm_model* model);
CVK_API size_t cvk_vecm_nobs(const cvk_vecm_model* model);
CVK_API double cvk_vecm_loglik(const cvk_vecm_model* model);
CVK_API const char* cvk_vecm_label(const cvk_vecm_model* model, size_t series);
CVK_API cvk_status cvk_vecm_eigenvalues(const cvk_vecm_model* model, double* out);   /* n */
CVK_API cvk_status cvk_vecm_alpha(const cvk_vecm_model* model, double* out);         /* n x r */
CVK_API cvk_status cvk_vecm_beta(const cvk_vecm_model* model, double* out);          /* n x r */
CVK_API cvk_status cvk_vecm_pi(const cvk_vecm_model* model, double* out);            /* n x n */
CVK_API cvk_status cvk_vecm_short_run(const cvk_vecm_model* model, int lag, double* out); /* n x n, lag 1..p-1 */
CVK_API cvk_status cvk_vecm_constant(const cvk_vecm_model* model, double* out);      /* n */
CVK_API cvk_status cvk_vecm_sigma(const cvk_vecm_model* model, double* out);         /* n x n */
/* Long-run impact C; fails with CVK_GRANGER_CONDITION_VIOLATED. */
CVK_API cvk_status cvk_vecm_long_run(const cvk_vecm_model* model, double* out);
CVK_API cvk_status cvk_vecm_breusch_godfrey(const cvk_vecm_model* model, int h_lags, cvk_bg_result* out);

typedef enum cvk_critical_table { CVK_TABLE_STANDARD = 0, CVK_TABLE_PAPER = 1 } cvk_critical_table;

CVK_API cvk_status cvk_johansen_trace_test(const cvk_panel* panel, int p, double level, cvk_critical_table table,
                                           cvk_rank_test** out);
CVK_API void cvk_rank_test_free(cvk_rank_test* test);
CVK_API size_t cvk_rank_test_size(const cvk_rank_test* test); /* number of null ranks, n */
CVK_API double cvk_rank_test_statistic(const cvk_rank_test* test, size_t r);
CVK_API double cvk_rank_test_critical(const cvk_rank_test* test, size_t r);
CVK_API double cvk_rank_test_eigenvalue(const cvk_rank_test* test, size_t i);
CVK_API int cvk_rank_test_selected(const cvk_rank_test* test);
CVK_API size_t cvk_rank_test_nobs(const cvk_rank_test* test);

/* ---- impulse responses ----------------------------------------------- */

typedef struct cvk_irf cvk_irf;

typedef struct cvk_irf_options {
    int horizons;
    int shock;          /* 0-based among the policy series */
    int bootstrap;      /* replications; 0 for point estimates only */
    double level;
    uint64_t seed;
    int threads;        /* 0: CVARKIT_THREADS or hardware concurrency */
    const int* ordering; /* NULL: identity */
    size_t ordering_len;
} cvk_irf_options;

CVK_API cvk_irf_options cvk_irf_default_options(void);
CVK_API cvk_status cvk_irf_var(const cvk_var_model* model, const cvk_irf_options* options, cvk_irf** out);
/* Level and first-difference responses of a VECM. */
CVK_API cvk_status cvk_irf_vecm(const cvk_vecm_model* model, const cvk_irf_options* options, cvk_irf** level,
                                cvk_irf** difference);
CVK_API void cvk_irf_free(cvk_irf* irf);

CVK_API int cvk_irf_horizons(const cvk_irf* irf);
CVK_API size_t cvk_irf_series(const cvk_irf* irf);
CVK_API const char* cvk_irf_label(const cvk_irf* irf, size_t series);
CVK_API int cvk_irf_is_difference(const cvk_irf* irf);
CVK_API int cvk_irf_has_bands(const cvk_irf* irf);
CVK_API double cvk_irf_point(const cvk_irf* irf, int horizon, size_t series);
CVK_API double cvk_irf_lower(const cvk_irf* irf, int horizon, size_t series);
CVK_API double cvk_irf_upper(const cvk_irf* irf, int horizon, size_t series);
CVK_API double cvk_irf_level(const cvk_irf* irf);
CVK_API int cvk_irf_replications(const cvk_irf* irf);
CVK_API int cvk_irf_skipped(const cvk_irf* irf);

/* ---- control VARs ---------------------------------------------------- */

/* Simple-difference CVAR: VAR(p) on (policies, treated - control). `delta_ar`
 * receives one proxy per treated outcome (capacity `delta_ar_capacity`). */
CVK_API cvk_status cvk_cvar_simple_difference(const cvk_panel* panel, int p, cvk_var_model** model, double* delta_ar,
                                              size_t delta_ar_capacity, int* treated_count);
/* VECM CVAR on (policies, treated, controls) at lag p, rank r >= 1. */
CVK_API cvk_status cvk_cvar_vecm(const cvk_panel* panel, int p, int r, cvk_vecm_model** model);

typedef struct cvk_control_candidate {
    const char* name;
    const double* values; /* rows of the base panel x cols, row-major */
    size_t cols;
    const char* const* labels;
} cvk_control_candidate;

typedef struct cvk_control_ranking cvk_control_ranking;

CVK_API cvk_status cvk_rank_controls(const cvk_panel* base, const cvk_control_candidate* candidates, size_t count,
                                     int p, int target_rank, double level, cvk_critical_table table,
                                     cvk_control_ranking** out);
CVK_API void cvk_control_ranking_free(cvk_control_ranking* ranking);
CVK_API size_t cvk_control_ranking_size(const cvk_control_ranking* ranking);
CVK_API const char* cvk_control_ranking_name(const cvk_control_ranking* ranking, size_t i);
CVK_API double cvk_control_ranking_statistic(const cvk_control_ranking* ranking, size_t i);
CVK_API int cvk_control_ranking_selected(const cvk_control_ranking* ranking, size_t i);
CVK_API size_t cvk_control_ranking_skipped(const cvk_control_ranking* ranking);
CVK_API const char* cvk_control_ranking_skipped_name(const cvk_control_ranking* ranking, size_t i);
CVK_API const char* cvk_control_ranking_skipped_reason(const cvk_control_ranking* ranking, size_t i);

/* ---- causal weights -------------------------------------------------- */

typedef struct cvk_weights cvk_weights;

CVK_API cvk_status cvk_weights_gaussian(double mean, double sd, int grid_size, cvk_weights** out);
CVK_API cvk_status cvk_weights_acrt(const double* sample, size_t n, int grid_size, cvk_weights** out);
CVK_API cvk_status cvk_weights_nonneg(const double* sample, size_t n, int grid_size, cvk_weights** out);
CVK_API void cvk_weights_free(cvk_weights* weights);
CVK_API size_t cvk_weights_grid_size(const cvk_weights* weights);
CVK_API double cvk_weights_grid(const cvk_weights* weights, size_t i);
CVK_API double cvk_weights_q(const cvk_weights* weights, size_t i);
CVK_API double cvk_weights_theta(const cvk_weights* weights, size_t i);
CVK_API double cvk_weights_integral_q(const cvk_weights* weights);
CVK_API size_t cvk_weights_q1_size(const cvk_weights* weights);
CVK_API double cvk_weights_q1_grid(const cvk_weights* weights, size_t i);
CVK_API double cvk_weights_q1(const cvk_weights* weights, size_t i);
CVK_API double cvk_weights_integral_q1(const cvk_weights* weights);
CVK_API double cvk_weights_q0(const cvk_weights* weights);
CVK_API double cvk_weights_d_lower(const cvk_weights* weights);
CVK_API double cvk_weights_d_upper(const cvk_weights* weights);

/* ---- simulation oracles ---------------------------------------------- */

typedef enum cvk_policy_dist { CVK_POLICY_BERNOULLI = 0, CVK_POLICY_GAUSSIAN = 1, CVK_POLICY_NONNEGATIVE = 2 } cvk_policy_dist;
typedef enum cvk_response { CVK_RESPONSE_LINEAR = 0, CVK_RESPONSE_SQUARE = 1, CVK_RESPONSE_CUBE = 2 } cvk_response;
typedef enum cvk_layout { CVK_LAYOUT_PLAIN = 0, CVK_LAYOUT_DIRECT_CONTROL = 1, CVK_LAYOUT_COINTEGRATED = 2 } cvk_layout;

typedef struct cvk_dgp_spec {
    cvk_policy_dist policy;
    double pi;
    double sigma;
    double zero_prob;
    double d_lower;
    double d_upper; /* INFINITY for no truncation */
    double scale;
    cvk_response response;
    double effect;
    double noise_sd;
    double ar;
    double heterogeneity;
    double selection_bias;
    int continuous;
    int outcomes;
    cvk_layout layout;
    int T;
    uint64_t seed;
} cvk_dgp_spec;

typedef struct cvk_ground_truth {
    double ate;
    double att;
    double acr;
    double weighted_acr;
    double mixture;
    int treated_count;
} cvk_ground_truth;

typedef struct cvk_report cvk_report;

CVK_API cvk_dgp_spec cvk_dgp_default(void);
CVK_API cvk_status cvk_simulate_dgp(const cvk_dgp_spec* spec, cvk_panel** panel, cvk_ground_truth* truth);
/* `theorem` is one of "T1", "T2", "T3", "T4", "T5", "T8", "T9". */
CVK_API cvk_status cvk_verify(const char* theorem, const cvk_dgp_spec* spec, int replications, cvk_report** out);
CVK_API void cvk_report_free(cvk_report* report);
CVK_API int cvk_report_pass(const cvk_report* report);
CVK_API double cvk_report_truth(const cvk_report* report);
CVK_API double cvk_report_mean_gamma(const cvk_report* report);
CVK_API double cvk_report_bias(const cvk_report* report);
CVK_API double cvk_report_mc_se(const cvk_report* report);
CVK_API double cvk_report_tolerance(const cvk_report* report);
/* Serialized report: key=value header, then one CSV line per replication. */
CVK_API const char* cvk_report_text(const cvk_report* report);

#ifdef __cplusplus
}
#endif

#endif /* CVARKIT_H */
