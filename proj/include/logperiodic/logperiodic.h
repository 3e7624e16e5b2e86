/*
 * C interface to the log-periodic critical-time fitter.
 *
 * All functions return an lp_status; LP_OK is zero. On failure a message for
 * the calling thread is available from lp_last_error() until the next call.
 * Objects are opaque handles released with the matching *_free function.
 * Strings returned through char** are heap allocated and must be released
 * with lp_string_free().
 *
 * Time is a real-valued day offset since 1970-01-01 00:00 UTC.
 */
#ifndef LOGPERIODIC_H
#define LOGPERIODIC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LOGPERIODIC_BUILD)
#    define LP_API __declspec(dllexport)
#  else
#    define LP_API __declspec(dllimport)
#  endif
#else
#  define LP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lp_status {
  LP_OK = 0,
  LP_ERR_FORMAT = 1,
  LP_ERR_EMPTY_INPUT = 2,
  LP_ERR_DUPLICATE_TIMESTAMP = 3,
  LP_ERR_INSUFFICIENT_DATA = 4,
  LP_ERR_DOMAIN = 5,
  LP_ERR_PHASE_DOMAIN = 6,
  LP_ERR_SINGULARITY_GUARD = 7,
  LP_ERR_DEGENERATE_DESIGN = 8,
  LP_ERR_NO_FIT = 9,
  LP_ERR_REFINEMENT_FAILED = 10,
  LP_ERR_IO = 11,
  LP_ERR_INVALID_ARGUMENT = 12,
  LP_ERR_INTERNAL = 13
} lp_status;

typedef enum lp_phase { LP_ACCELERATING = 0, LP_DECELERATING = 1 } lp_phase;

typedef enum lp_lambda_mode { LP_LAMBDA_FIXED = 0, LP_LAMBDA_SCAN = 1 } lp_lambda_mode;

typedef enum lp_extremum_kind { LP_EXTREMUM_MAX = 0, LP_EXTREMUM_MIN = 1 } lp_extremum_kind;

/* x^alpha (A + B cos(omega ln x + phi)), omega = 2 pi / ln(lambda), x = |t - tc| */
typedef struct lp_params {
  double A;
  double B;
  double alpha;
  double phi;
  double lambda;
  double tc;
  lp_phase phase;
} lp_params;

typedef struct lp_extremum {
  double t;
  lp_extremum_kind kind;
} lp_extremum;

/* inclusive grid lo, lo + step, ..., <= hi */
typedef struct lp_grid {
  double lo;
  double hi;
  double step;
} lp_grid;

typedef struct lp_fit_config {
  lp_phase phase;
  lp_lambda_mode lambda_mode;
  double fixed_lambda;
  lp_grid lambda_grid;
  lp_grid alpha_grid;
  lp_grid tc_grid;
  double tc_margin;
  int refine;
  int use_log_price;
  size_t top_k;
  unsigned threads; /* 0: hardware concurrency */
  /* consistency gate */
  double lambda_target;
  double lambda_tolerance;
  double min_oscillations;
  double max_amplitude_ratio;
  double max_rmse_fraction;
  /* refinement stopping rule */
  double refine_tc_tolerance;
  double refine_alpha_tolerance;
  double refine_lambda_tolerance;
  int refine_max_iterations;
} lp_fit_config;

typedef struct lp_synth_config {
  lp_params params;
  double t_start;
  double t_end;
  double sampling;
  double noise_sigma;
  uint64_t seed;
  int has_substructure;
  lp_params substructure;
} lp_synth_config;

typedef struct lp_series lp_series;
typedef struct lp_fit_result lp_fit_result;
typedef struct lp_scan_report lp_scan_report;
typedef struct lp_scenario lp_scenario;

LP_API const char* lp_version(void);
LP_API const char* lp_status_message(lp_status status);
LP_API const char* lp_last_error(void);
LP_API void lp_string_free(char* s);

/* dates and digests */
LP_API lp_status lp_parse_day(const char* text, double* day_offset);
/* writes YYYY-MM-DD plus terminator; out must hold 11 bytes */
LP_API lp_status lp_format_date(double day_offset, char* out);
/* writes 64 hex digits plus terminator; out must hold 65 bytes */
LP_API lp_status lp_sha256_hex(const void* data, size_t length, char* out);

/* series */
LP_API lp_status lp_series_parse_csv(const char* text, size_t length, const char* column, lp_series** out,
                                     size_t* skipped_rows);
LP_API lp_status lp_series_from_arrays(const double* t, const double* values, size_t n, const char* label,
                                       lp_series** out);
LP_API void lp_series_free(lp_series* series);
LP_API size_t lp_series_size(const lp_series* series);
LP_API lp_status lp_series_point(const lp_series* series, size_t index, double* t, double* value);
LP_API lp_status lp_series_slice(const lp_series* series, double t_start, double t_end, lp_series** out);
LP_API lp_status lp_series_log_transform(const lp_series* series, lp_series** out);
LP_API lp_status lp_series_to_csv(const lp_series* series, const char* column, char** out);

/* model */
LP_API lp_status lp_canonical_phase(double phi_raw, double* out);
LP_API lp_status lp_oscillatory_factor(const lp_params* params, double x, double* out);
LP_API lp_status lp_evaluate(const lp_params* params, double t, double* out);
/* Fills up to capacity entries; *count receives the total number found. */
LP_API lp_status lp_extrema_schedule(const lp_params* params, double t_start, double t_end, lp_extremum* out,
                                     size_t capacity, size_t* count);
LP_API lp_status lp_params_from_json(const char* json, lp_params* out);
LP_API lp_status lp_params_to_json(const lp_params* params, char** out);

/* fitting */
LP_API lp_status lp_fit_config_init(lp_fit_config* config, const lp_series* series, lp_phase phase);
LP_API lp_status lp_linear_subfit(const lp_series* series, double tc, double alpha, double lambda, lp_phase phase,
                                  double* A, double* B, double* phi, double* rmse);
LP_API lp_status lp_scan(const lp_series* series, const lp_fit_config* config, lp_scan_report** out);
LP_API lp_status lp_refine(const lp_series* series, const lp_fit_result* start, const lp_fit_config* config,
                           lp_fit_result** out);
LP_API lp_status lp_fit(const lp_series* series, const lp_fit_config* config, lp_fit_result** out);
/* Scores fixed parameters on a series with the gate settings of config. */
LP_API lp_status lp_assess(const lp_series* series, const lp_params* params, const lp_fit_config* config,
                           lp_fit_result** out);
LP_API lp_status lp_window_candidates(const lp_series* series, double min_span, double* starts, double* ends,
                                      size_t capacity, size_t* count);

LP_API void lp_scan_report_free(lp_scan_report* report);
LP_API lp_status lp_scan_report_best(const lp_scan_report* report, lp_fit_result** out);
LP_API size_t lp_scan_report_grid_size(const lp_scan_report* report);
LP_API lp_status lp_scan_report_to_json(const lp_scan_report* report, char** out);
LP_API lp_status lp_scan_report_grid_csv(const lp_scan_report* report, char** out);

LP_API void lp_fit_result_free(lp_fit_result* result);
LP_API lp_status lp_fit_result_params(const lp_fit_result* result, lp_params* out);
LP_API double lp_fit_result_rmse(const lp_fit_result* result);
LP_API int lp_fit_result_consistent(const lp_fit_result* result);
LP_API size_t lp_fit_result_reason_count(const lp_fit_result* result);
LP_API const char* lp_fit_result_reason(const lp_fit_result* result, size_t index);
LP_API lp_status lp_fit_result_to_json(const lp_fit_result* result, char** out);

/* scenarios */
LP_API lp_status lp_build_scenario(const lp_series* window, const lp_fit_result* fit, double horizon,
                                   double tc_margin, int allow_inconsistent, lp_scenario** out);
LP_API void lp_scenario_free(lp_scenario* scenario);
LP_API double lp_scenario_band_halfwidth(const lp_scenario* scenario);
LP_API int lp_scenario_truncated(const lp_scenario* scenario);
LP_API lp_status lp_scenario_to_json(const lp_scenario* scenario, char** out);
LP_API lp_status lp_scenario_from_json(const char* json, lp_scenario** out);
LP_API lp_status lp_scenario_to_svg(const lp_scenario* scenario, const lp_series* observed, const char* title,
                                    char** out);
LP_API lp_status lp_compare_to_actual(const lp_scenario* scenario, const lp_series* later, double* coverage_fraction,
                                      double* max_deviation, size_t* n_compared);

/* synthetic data */
LP_API lp_status lp_synth_generate(const lp_synth_config* config, lp_series** out, size_t* redraws);

#ifdef __cplusplus
}
#endif

#endif /* LOGPERIODIC_H */
