/*
 * C interface to the vgrowth library.
 *
 * Objects are opaque handles created by vg_*_create/load/fit functions and
 * released with the matching vg_*_free. Every fallible call returns a
 * vg_status; on failure the message is available from vg_last_error() on the
 * same thread until the next failing call. Output pointers are written only
 * on VG_OK.
 *
 * Handles are immutable after creation and may be shared across threads.
 */
#ifndef VGROWTH_H
#define VGROWTH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(VGROWTH_BUILDING_LIBRARY)
#define VG_API __declspec(dllexport)
#else
#define VG_API __declspec(dllimport)
#endif
#else
#define VG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vg_status {
    VG_OK = 0,
    VG_ERR_EMPTY_SERIES = 1,
    VG_ERR_COUNT_VIOLATION = 2,
    VG_ERR_DUPLICATE_PERIOD = 3,
    VG_ERR_UNKNOWN_DATASET = 4,
    VG_ERR_PARSE = 5,
    VG_ERR_BOUNDARY_ODDS = 6,
    VG_ERR_NON_POSITIVE_PERIOD = 7,
    VG_ERR_SEPARATION = 8,
    VG_ERR_SINGULAR = 9,
    VG_ERR_MAX_ITERATIONS = 10,
    VG_ERR_BANDWIDTH_TOO_LARGE = 11,
    VG_ERR_PERIOD_MISMATCH = 12,
    VG_ERR_NEGATIVE_C = 13,
    VG_ERR_NON_POSITIVE_R = 14,
    VG_ERR_NON_POSITIVE_COUNT = 15,
    VG_ERR_INVALID_INDEX = 16,
    VG_ERR_INVALID_CONFIG = 17,
    VG_ERR_INVALID_ARGUMENT = 18,
    VG_ERR_WINDOW_OUT_OF_RANGE = 19,
    VG_ERR_IO = 20,
    VG_ERR_BUFFER_TOO_SMALL = 21,
    VG_ERR_INTERNAL = 99
} vg_status;

/* Missing optional counts (total_cases, tested) are reported as -1. */
#define VG_MISSING (-1)

typedef struct vg_series vg_series;
typedef struct vg_fit vg_fit;
typedef struct vg_variance vg_variance;
typedef struct vg_multi_series vg_multi_series;
typedef struct vg_multi_fit vg_multi_fit;

VG_API const char* vg_version(void);
VG_API const char* vg_status_name(vg_status status);
VG_API const char* vg_last_error(void);

/* ---- surveillance series ------------------------------------------------ */

typedef struct vg_record {
    int64_t t_index;
    const char* label; /* owned by the series */
    int64_t sequenced;
    int64_t variant_count;
    int64_t total_cases; /* VG_MISSING when absent */
    int64_t tested;      /* VG_MISSING when absent */
} vg_record;

VG_API vg_status vg_series_load_bundled(const char* name, vg_series** out);
VG_API vg_status vg_series_load_csv(const char* path, double period_days, vg_series** out);
/* labels may be NULL; total_cases/tested may be NULL or hold VG_MISSING. */
VG_API vg_status vg_series_create(size_t n, const int64_t* t_index, const char* const* labels,
                                  const int64_t* sequenced, const int64_t* variant_count,
                                  const int64_t* total_cases, const int64_t* tested, double period_days,
                                  vg_series** out);
VG_API vg_status vg_series_slice(const vg_series* series, int64_t t_from, int64_t t_through, vg_series** out);
VG_API vg_status vg_series_save_csv(const vg_series* series, const char* path);
/* CSV text into `buffer` (NUL-terminated). *length receives the text length;
 * pass a NULL buffer to query it. */
VG_API vg_status vg_series_to_csv(const vg_series* series, char* buffer, size_t capacity, size_t* length);
VG_API void vg_series_free(vg_series* series);
VG_API size_t vg_series_size(const vg_series* series);
VG_API double vg_series_period_days(const vg_series* series);
VG_API vg_status vg_series_record(const vg_series* series, size_t index, vg_record* out);

/* ---- estimation ---------------------------------------------------------- */

typedef struct vg_fit_options {
    double tolerance;
    int max_iterations;
    int has_initial;
    double initial_alpha;
    double initial_beta;
} vg_fit_options;

typedef struct vg_fit_summary {
    double alpha;
    double beta;
    double log_likelihood;
    int iterations;
    int converged;
    double score_norm;
    double period_days;
} vg_fit_summary;

VG_API void vg_fit_options_default(vg_fit_options* options);
/* options may be NULL for defaults. */
VG_API vg_status vg_fit_series(const vg_series* series, const vg_fit_options* options, vg_fit** out);
VG_API void vg_fit_free(vg_fit* fit);
VG_API vg_status vg_fit_get_summary(const vg_fit* fit, vg_fit_summary* out);
/* Writes up to `capacity` fitted points; *count receives the total. */
VG_API vg_status vg_fit_fitted(const vg_fit* fit, int64_t* t_index, double* lambda, size_t capacity,
                               size_t* count);
VG_API vg_status vg_log_likelihood(const vg_series* series, double alpha, double beta, double* out);
VG_API vg_status vg_score(const vg_series* series, double alpha, double beta, double out[2]);
/* Row-major 2x2. */
VG_API vg_status vg_hessian(const vg_series* series, double alpha, double beta, double out[4]);

/* ---- variance and intervals --------------------------------------------- */

VG_API vg_status vg_variance_fisher(const vg_series* series, const vg_fit* fit, vg_variance** out);
VG_API vg_status vg_variance_hac(const vg_series* series, const vg_fit* fit, int bandwidth, vg_variance** out);
VG_API void vg_variance_free(vg_variance* variance);
/* -1 for Fisher, otherwise the HAC bandwidth. */
VG_API int vg_variance_bandwidth(const vg_variance* variance);
VG_API size_t vg_variance_dim(const vg_variance* variance);
/* Row-major dim x dim matrix. */
VG_API vg_status vg_variance_matrix(const vg_variance* variance, double* out, size_t capacity);
VG_API double vg_parzen_kernel(double x);

typedef struct vg_interval {
    double point;
    double low;
    double high;
    double level;
    double period_days; /* for advantages; 0 for alpha/beta */
    double std_error;   /* alpha/beta only; 0 otherwise */
} vg_interval;

/* which: 0 = alpha, 1 = beta. */
VG_API vg_status vg_interval_parameter(const vg_fit* fit, const vg_variance* variance, int which, double level,
                                       vg_interval* out);
VG_API vg_status vg_interval_gamma(const vg_fit* fit, const vg_variance* variance, double target_days,
                                   double level, vg_interval* out);

typedef enum vg_composition {
    VG_COMPOSE_INDEPENDENT_LOGNORMAL = 0,
    VG_COMPOSE_ENDPOINT_PRODUCT = 1
} vg_composition;

VG_API vg_status vg_compose_advantages(const vg_interval* a, const vg_interval* b, vg_composition rule,
                                       vg_interval* out);
VG_API vg_status vg_rescale_advantage(double gamma, double period_days, double target_days, double* out);
VG_API vg_status vg_step_lambda(double lambda, double gamma, double* out);

/* ---- crude measures ------------------------------------------------------ */

typedef struct vg_crude_row {
    int64_t t_index;
    double value;
    double low;
    double high;
    int corrected;
} vg_crude_row;

typedef struct vg_proportion_row {
    int64_t t_index;
    double estimate;
    double low;
    double high;
} vg_proportion_row;

/* Writes up to `capacity` rows; *count receives the total number of rows. */
VG_API vg_status vg_crude_gammas(const vg_series* series, double level, vg_crude_row* rows, size_t capacity,
                                 size_t* count);
VG_API vg_status vg_proportion_intervals(const vg_series* series, double level, vg_proportion_row* rows,
                                         size_t capacity, size_t* count);

/* ---- forecasting --------------------------------------------------------- */

typedef struct vg_forecast_row {
    double t;
    double point;
    double lower;
    double upper;
    double predictor_sd;
} vg_forecast_row;

/* `rows` must hold n_horizons entries. */
VG_API vg_status vg_forecast(const vg_fit* fit, const vg_variance* variance, const double* horizons,
                             size_t n_horizons, double c, vg_forecast_row* rows);

/* ---- reproduction numbers ----------------------------------------------- */

typedef struct vg_repro {
    double R_all;
    double lambda;
    double gamma_gen;
    double R_variant;
    double R_incumbent;
} vg_repro;

typedef struct vg_stability_row {
    double lambda;
    double threshold;
    double lo;
    double hi;
} vg_stability_row;

typedef struct vg_adjusted_r_row {
    int64_t t_index;
    const char* label; /* owned by the series */
    double R;
    double proportion;
} vg_adjusted_r_row;

VG_API vg_status vg_infer_variant_r(double R_all, double lambda, double gamma_gen, vg_repro* out);
VG_API vg_status vg_adjusted_r(double cases_t, double cases_prev, double tested_t, double tested_prev,
                               double gen_days, double period_days, double exponent, double* out);
VG_API vg_status vg_adjusted_r_series(const vg_series* series, double gen_days, double exponent,
                                      vg_adjusted_r_row* rows, size_t capacity, size_t* count);
/* gamma is an interval at the generation period. `rows` must hold n entries. */
/* start, start + step, ..., stop inclusive. Writes up to `capacity` values. */
VG_API vg_status vg_lambda_grid(double start, double stop, double step, double* out, size_t capacity,
                                size_t* count);
VG_API vg_status vg_stability_region(const vg_interval* gamma, const double* lambdas, size_t n,
                                     vg_stability_row* rows);

/* ---- multiple variants --------------------------------------------------- */

VG_API vg_status vg_multi_load_csv(const char* path, double period_days, vg_multi_series** out);
/* counts is row-major n_periods x n_variants; names and labels may be NULL. */
VG_API vg_status vg_multi_create(size_t n_periods, size_t n_variants, const int64_t* t_index,
                                 const char* const* labels, const char* const* names, const int64_t* counts,
                                 double period_days, vg_multi_series** out);
VG_API vg_status vg_multi_save_csv(const vg_multi_series* series, const char* path);
VG_API vg_status vg_multi_to_csv(const vg_multi_series* series, char* buffer, size_t capacity, size_t* length);
/* Copy with variant `index` moved to the numeraire column. */
VG_API vg_status vg_multi_with_numeraire(const vg_multi_series* series, size_t index, vg_multi_series** out);
VG_API void vg_multi_free(vg_multi_series* series);
VG_API size_t vg_multi_size(const vg_multi_series* series);
VG_API size_t vg_multi_variants(const vg_multi_series* series);
VG_API const char* vg_multi_variant_name(const vg_multi_series* series, size_t index);
/* 0-based variant indices. */
VG_API vg_status vg_multi_marginalize(const vg_multi_series* series, size_t a, size_t b, vg_series** out);
VG_API vg_status vg_step_lambda_multi(const double* lambdas, const double* gammas, size_t n_variants,
                                      double* out);

VG_API vg_status vg_multi_fit_series(const vg_multi_series* series, const vg_fit_options* options,
                                     vg_multi_fit** out);
VG_API void vg_multi_fit_free(vg_multi_fit* fit);
/* n_variants - 1 entries each, for variants 2..m. */
VG_API vg_status vg_multi_fit_params(const vg_multi_fit* fit, double* alphas, double* betas, size_t capacity);
VG_API vg_status vg_multi_fit_log_likelihood(const vg_multi_fit* fit, double* out);
/* bandwidth < 0 selects Fisher. Packed order (alpha_2, beta_2, alpha_3, ...). */
VG_API vg_status vg_multi_fit_variance(const vg_multi_series* series, const vg_multi_fit* fit, int bandwidth,
                                       vg_variance** out);
/* Advantage of variant `variant` (1..m-1) over the numeraire. */
VG_API vg_status vg_multi_interval_gamma(const vg_multi_fit* fit, const vg_variance* variance, size_t variant,
                                         double target_days, double level, vg_interval* out);

/* ---- simulation ---------------------------------------------------------- */

typedef struct vg_sim_config {
    size_t n_variants;         /* m >= 2 */
    const double* gammas;      /* m - 1 per-period advantages */
    const double* initial;     /* m proportions at t = 0 */
    size_t n_periods;          /* T */
    const int64_t* sequenced;  /* T sample sizes */
    uint64_t seed;
    const double* growth;      /* optional, T entries, may be NULL */
    double initial_cases;      /* used with growth */
    double period_days;
} vg_sim_config;

typedef struct vg_recovery {
    size_t replications;
    size_t failures;
    double true_gamma;
    double mean_gamma;
    double relative_bias;
    double coverage;
    double mean_ci_width;
} vg_recovery;

VG_API vg_status vg_simulate(const vg_sim_config* config, uint64_t replication, vg_series** out);
VG_API vg_status vg_simulate_multi(const vg_sim_config* config, uint64_t replication, vg_multi_series** out);
VG_API vg_status vg_expected_counts(const vg_sim_config* config, vg_multi_series** out);
/* bandwidth < 0 selects Fisher intervals. */
VG_API vg_status vg_recovery_report(const vg_sim_config* config, size_t n_replications, int bandwidth,
                                    double level, vg_recovery* out);

#ifdef __cplusplus
}
#endif

#endif /* VGROWTH_H */
