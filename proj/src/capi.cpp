#include "logperiodic/logperiodic.h"

#include <openssl/evp.h>

#include <cstdlib>
#include <cstring>
#include <string>

#include "logperiodic/calendar.hpp"
#include "logperiodic/errors.hpp"
#include "logperiodic/fit.hpp"
#include "logperiodic/scenario.hpp"
#include "logperiodic/serialize.hpp"
#include "logperiodic/synth.hpp"
#include "logperiodic/version.hpp"

struct lp_series {
  logperiodic::TimeSeries value;
};
struct lp_fit_result {
  logperiodic::FitResult value;
};
struct lp_scan_report {
  logperiodic::ScanReport value;
};
struct lp_scenario {
  logperiodic::Scenario value;
};

namespace {

using namespace logperiodic;

thread_local std::string g_last_error;

lp_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::Format: return LP_ERR_FORMAT;
    case ErrorCode::EmptyInput: return LP_ERR_EMPTY_INPUT;
    case ErrorCode::DuplicateTimestamp: return LP_ERR_DUPLICATE_TIMESTAMP;
    case ErrorCode::InsufficientData: return LP_ERR_INSUFFICIENT_DATA;
    case ErrorCode::Domain: return LP_ERR_DOMAIN;
    case ErrorCode::PhaseDomain: return LP_ERR_PHASE_DOMAIN;
    case ErrorCode::SingularityGuard: return LP_ERR_SINGULARITY_GUARD;
    case ErrorCode::DegenerateDesign: return LP_ERR_DEGENERATE_DESIGN;
    case ErrorCode::NoFit: return LP_ERR_NO_FIT;
    case ErrorCode::RefinementFailed: return LP_ERR_REFINEMENT_FAILED;
    case ErrorCode::Io: return LP_ERR_IO;
  }
  return LP_ERR_INTERNAL;
}

template <class F>
lp_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return LP_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return LP_ERR_FORMAT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LP_ERR_INTERNAL;
  }
}

lp_status invalid(const char* what) {
  g_last_error = what;
  return LP_ERR_INVALID_ARGUMENT;
}

char* duplicate(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Phase to_phase(lp_phase p) { return p == LP_DECELERATING ? Phase::Decelerating : Phase::Accelerating; }
lp_phase from_phase(Phase p) { return p == Phase::Decelerating ? LP_DECELERATING : LP_ACCELERATING; }

LogPeriodicParams to_params(const lp_params& p) {
  return {p.A, p.B, p.alpha, p.phi, p.lambda, p.tc, to_phase(p.phase)};
}
lp_params from_params(const LogPeriodicParams& p) {
  return {p.A, p.B, p.alpha, p.phi, p.lambda, p.tc, from_phase(p.phase)};
}

GridRange to_grid(const lp_grid& g) { return {g.lo, g.hi, g.step}; }
lp_grid from_grid(const GridRange& g) { return {g.lo, g.hi, g.step}; }

FitConfig to_config(const lp_fit_config& c) {
  FitConfig out;
  out.phase = to_phase(c.phase);
  out.lambda_mode = c.lambda_mode == LP_LAMBDA_SCAN ? LambdaMode::Scan : LambdaMode::Fixed;
  out.fixed_lambda = c.fixed_lambda;
  out.lambda_grid = to_grid(c.lambda_grid);
  out.alpha_grid = to_grid(c.alpha_grid);
  out.tc_grid = to_grid(c.tc_grid);
  out.tc_margin = c.tc_margin;
  out.refine = c.refine != 0;
  out.use_log_price = c.use_log_price != 0;
  out.top_k = c.top_k;
  out.threads = c.threads;
  out.criteria = {c.lambda_target, c.lambda_tolerance, c.min_oscillations, c.max_amplitude_ratio,
                  c.max_rmse_fraction};
  out.refine_options = {c.refine_tc_tolerance, c.refine_alpha_tolerance, c.refine_lambda_tolerance,
                        c.refine_max_iterations};
  return out;
}

lp_fit_config from_config(const FitConfig& c) {
  lp_fit_config out{};
  out.phase = from_phase(c.phase);
  out.lambda_mode = c.lambda_mode == LambdaMode::Scan ? LP_LAMBDA_SCAN : LP_LAMBDA_FIXED;
  out.fixed_lambda = c.fixed_lambda;
  out.lambda_grid = from_grid(c.lambda_grid);
  out.alpha_grid = from_grid(c.alpha_grid);
  out.tc_grid = from_grid(c.tc_grid);
  out.tc_margin = c.tc_margin;
  out.refine = c.refine ? 1 : 0;
  out.use_log_price = c.use_log_price ? 1 : 0;
  out.top_k = c.top_k;
  out.threads = c.threads;
  out.lambda_target = c.criteria.lambda_target;
  out.lambda_tolerance = c.criteria.lambda_tolerance;
  out.min_oscillations = c.criteria.min_oscillations;
  out.max_amplitude_ratio = c.criteria.max_amplitude_ratio;
  out.max_rmse_fraction = c.criteria.max_rmse_fraction;
  out.refine_tc_tolerance = c.refine_options.tc_tolerance;
  out.refine_alpha_tolerance = c.refine_options.alpha_tolerance;
  out.refine_lambda_tolerance = c.refine_options.lambda_tolerance;
  out.refine_max_iterations = c.refine_options.max_iterations;
  return out;
}

}  // namespace

extern "C" {

const char* lp_version(void) { return kVersion; }

const char* lp_status_message(lp_status status) {
  switch (status) {
    case LP_OK: return "ok";
    case LP_ERR_FORMAT: return to_string(ErrorCode::Format);
    case LP_ERR_EMPTY_INPUT: return to_string(ErrorCode::EmptyInput);
    case LP_ERR_DUPLICATE_TIMESTAMP: return to_string(ErrorCode::DuplicateTimestamp);
    case LP_ERR_INSUFFICIENT_DATA: return to_string(ErrorCode::InsufficientData);
    case LP_ERR_DOMAIN: return to_string(ErrorCode::Domain);
    case LP_ERR_PHASE_DOMAIN: return to_string(ErrorCode::PhaseDomain);
    case LP_ERR_SINGULARITY_GUARD: return to_string(ErrorCode::SingularityGuard);
    case LP_ERR_DEGENERATE_DESIGN: return to_string(ErrorCode::DegenerateDesign);
    case LP_ERR_NO_FIT: return to_string(ErrorCode::NoFit);
    case LP_ERR_REFINEMENT_FAILED: return to_string(ErrorCode::RefinementFailed);
    case LP_ERR_IO: return to_string(ErrorCode::Io);
    case LP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case LP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* lp_last_error(void) { return g_last_error.c_str(); }

void lp_string_free(char* s) { std::free(s); }

lp_status lp_parse_day(const char* text, double* day_offset) {
  if (!text || !day_offset) return invalid("null argument");
  return guarded([&] { *day_offset = parse_day(text); });
}

lp_status lp_format_date(double day_offset, char* out) {
  if (!out) return invalid("null argument");
  return guarded([&] {
    const auto s = format_iso_date(day_offset);
    std::memcpy(out, s.c_str(), s.size() + 1);
  });
}

lp_status lp_sha256_hex(const void* data, size_t length, char* out) {
  if ((!data && length) || !out) return invalid("null argument");
  return guarded([&] {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int size = 0;
    if (EVP_Digest(data, length, digest, &size, EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("SHA-256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    for (unsigned i = 0; i < size; ++i) {
      out[2 * i] = kHex[digest[i] >> 4];
      out[2 * i + 1] = kHex[digest[i] & 0xF];
    }
    out[2 * size] = '\0';
  });
}

lp_status lp_series_parse_csv(const char* text, size_t length, const char* column, lp_series** out,
                              size_t* skipped_rows) {
  if (!text || !column || !out) return invalid("null argument");
  return guarded([&] {
    auto parsed = parse_csv_text(std::string_view(text, length), column);
    if (skipped_rows) *skipped_rows = parsed.skipped_rows;
    *out = new lp_series{std::move(parsed.series)};
  });
}

lp_status lp_series_from_arrays(const double* t, const double* values, size_t n, const char* label, lp_series** out) {
  if (!t || !values || !out) return invalid("null argument");
  return guarded([&] {
    std::vector<TimePoint> points(n);
    for (size_t i = 0; i < n; ++i) points[i] = {t[i], values[i]};
    *out = new lp_series{TimeSeries(std::move(points), label ? label : "")};
  });
}

void lp_series_free(lp_series* series) { delete series; }

size_t lp_series_size(const lp_series* series) { return series ? series->value.size() : 0; }

lp_status lp_series_point(const lp_series* series, size_t index, double* t, double* value) {
  if (!series || !t || !value) return invalid("null argument");
  if (index >= series->value.size()) return invalid("index out of range");
  *t = series->value[index].t;
  *value = series->value[index].value;
  return LP_OK;
}

lp_status lp_series_slice(const lp_series* series, double t_start, double t_end, lp_series** out) {
  if (!series || !out) return invalid("null argument");
  return guarded([&] { *out = new lp_series{slice(series->value, Window(t_start, t_end))}; });
}

lp_status lp_series_log_transform(const lp_series* series, lp_series** out) {
  if (!series || !out) return invalid("null argument");
  return guarded([&] { *out = new lp_series{log_transform(series->value)}; });
}

lp_status lp_series_to_csv(const lp_series* series, const char* column, char** out) {
  if (!series || !out) return invalid("null argument");
  return guarded([&] { *out = duplicate(to_csv(series->value, column ? column : "close")); });
}

lp_status lp_canonical_phase(double phi_raw, double* out) {
  if (!out) return invalid("null argument");
  return guarded([&] { *out = canonical_phase(phi_raw); });
}

lp_status lp_oscillatory_factor(const lp_params* params, double x, double* out) {
  if (!params || !out) return invalid("null argument");
  return guarded([&] {
    const auto p = to_params(*params);
    validate(p);
    *out = oscillatory_factor(p, x);
  });
}

lp_status lp_evaluate(const lp_params* params, double t, double* out) {
  if (!params || !out) return invalid("null argument");
  return guarded([&] {
    const auto p = to_params(*params);
    validate(p);
    *out = evaluate(p, t);
  });
}

lp_status lp_extrema_schedule(const lp_params* params, double t_start, double t_end, lp_extremum* out,
                              size_t capacity, size_t* count) {
  if (!params || !count || (capacity && !out)) return invalid("null argument");
  return guarded([&] {
    const auto found = extrema_schedule(to_params(*params), Window(t_start, t_end));
    *count = found.size();
    for (size_t i = 0; i < found.size() && i < capacity; ++i) {
      out[i] = {found[i].t, found[i].kind == ExtremumKind::Max ? LP_EXTREMUM_MAX : LP_EXTREMUM_MIN};
    }
  });
}

lp_status lp_params_from_json(const char* json, lp_params* out) {
  if (!json || !out) return invalid("null argument");
  return guarded([&] { *out = from_params(params_from_json(Json::parse(json))); });
}

lp_status lp_params_to_json(const lp_params* params, char** out) {
  if (!params || !out) return invalid("null argument");
  return guarded([&] { *out = duplicate(to_json(to_params(*params)).dump()); });
}

lp_status lp_fit_config_init(lp_fit_config* config, const lp_series* series, lp_phase phase) {
  if (!config || !series) return invalid("null argument");
  return guarded([&] { *config = from_config(default_config(series->value, to_phase(phase))); });
}

lp_status lp_linear_subfit(const lp_series* series, double tc, double alpha, double lambda, lp_phase phase, double* A,
                           double* B, double* phi, double* rmse) {
  if (!series || !A || !B || !phi || !rmse) return invalid("null argument");
  return guarded([&] {
    const auto fit = linear_subfit(series->value, tc, alpha, lambda, to_phase(phase));
    *A = fit.A;
    *B = fit.B;
    *phi = fit.phi;
    *rmse = fit.rmse;
  });
}

lp_status lp_scan(const lp_series* series, const lp_fit_config* config, lp_scan_report** out) {
  if (!series || !config || !out) return invalid("null argument");
  return guarded([&] { *out = new lp_scan_report{scan(series->value, to_config(*config))}; });
}

lp_status lp_refine(const lp_series* series, const lp_fit_result* start, const lp_fit_config* config,
                    lp_fit_result** out) {
  if (!series || !start || !config || !out) return invalid("null argument");
  return guarded([&] { *out = new lp_fit_result{refine(series->value, start->value, to_config(*config))}; });
}

lp_status lp_fit(const lp_series* series, const lp_fit_config* config, lp_fit_result** out) {
  if (!series || !config || !out) return invalid("null argument");
  return guarded([&] { *out = new lp_fit_result{fit(series->value, to_config(*config))}; });
}

lp_status lp_assess(const lp_series* series, const lp_params* params, const lp_fit_config* config,
                    lp_fit_result** out) {
  if (!series || !params || !config || !out) return invalid("null argument");
  return guarded([&] {
    const auto cfg = to_config(*config);
    const TimeSeries target = cfg.use_log_price ? log_transform(series->value) : series->value;
    *out = new lp_fit_result{assess(target, to_params(*params), cfg.criteria)};
  });
}

lp_status lp_window_candidates(const lp_series* series, double min_span, double* starts, double* ends,
                               size_t capacity, size_t* count) {
  if (!series || !count || (capacity && (!starts || !ends))) return invalid("null argument");
  return guarded([&] {
    const auto windows = window_candidates(series->value, min_span);
    *count = windows.size();
    for (size_t i = 0; i < windows.size() && i < capacity; ++i) {
      starts[i] = windows[i].t_start;
      ends[i] = windows[i].t_end;
    }
  });
}

void lp_scan_report_free(lp_scan_report* report) { delete report; }

lp_status lp_scan_report_best(const lp_scan_report* report, lp_fit_result** out) {
  if (!report || !out) return invalid("null argument");
  return guarded([&] { *out = new lp_fit_result{report->value.best}; });
}

size_t lp_scan_report_grid_size(const lp_scan_report* report) {
  return report ? report->value.grid_results.size() : 0;
}

lp_status lp_scan_report_to_json(const lp_scan_report* report, char** out) {
  if (!report || !out) return invalid("null argument");
  return guarded([&] { *out = duplicate(to_json(report->value).dump()); });
}

lp_status lp_scan_report_grid_csv(const lp_scan_report* report, char** out) {
  if (!report || !out) return invalid("null argument");
  return guarded([&] { *out = duplicate(grid_to_csv(report->value.grid_results)); });
}

void lp_fit_result_free(lp_fit_result* result) { delete result; }

lp_status lp_fit_result_params(const lp_fit_result* result, lp_params* out) {
  if (!result || !out) return invalid("null argument");
  *out = from_params(result->value.params);
  return LP_OK;
}

double lp_fit_result_rmse(const lp_fit_result* result) { return result ? result->value.rmse : -1.0; }

int lp_fit_result_consistent(const lp_fit_result* result) { return result && result->value.consistent ? 1 : 0; }

size_t lp_fit_result_reason_count(const lp_fit_result* result) { return result ? result->value.reasons.size() : 0; }

const char* lp_fit_result_reason(const lp_fit_result* result, size_t index) {
  if (!result || index >= result->value.reasons.size()) return nullptr;
  return result->value.reasons[index].c_str();
}

lp_status lp_fit_result_to_json(const lp_fit_result* result, char** out) {
  if (!result || !out) return invalid("null argument");
  return guarded([&] { *out = duplicate(to_json(result->value).dump()); });
}

lp_status lp_build_scenario(const lp_series* window, const lp_fit_result* fit, double horizon, double tc_margin,
                            int allow_inconsistent, lp_scenario** out) {
  if (!window || !fit || !out) return invalid("null argument");
  return guarded([&] {
    ScenarioOptions options{horizon, tc_margin, allow_inconsistent != 0};
    *out = new lp_scenario{build_scenario(window->value, fit->value, options)};
  });
}

void lp_scenario_free(lp_scenario* scenario) { delete scenario; }

double lp_scenario_band_halfwidth(const lp_scenario* scenario) {
  return scenario ? scenario->value.band_halfwidth : -1.0;
}

int lp_scenario_truncated(const lp_scenario* scenario) { return scenario && scenario->value.truncated ? 1 : 0; }

lp_status lp_scenario_to_json(const lp_scenario* scenario, char** out) {
  if (!scenario || !out) return invalid("null argument");
  return guarded([&] { *out = duplicate(to_json(scenario->value).dump()); });
}

lp_status lp_scenario_from_json(const char* json, lp_scenario** out) {
  if (!json || !out) return invalid("null argument");
  return guarded([&] { *out = new lp_scenario{scenario_from_json(Json::parse(json))}; });
}

lp_status lp_scenario_to_svg(const lp_scenario* scenario, const lp_series* observed, const char* title, char** out) {
  if (!scenario || !observed || !out) return invalid("null argument");
  return guarded([&] {
    SvgOptions options;
    if (title) options.title = title;
    *out = duplicate(render_svg(observed->value, scenario->value, options));
  });
}

lp_status lp_compare_to_actual(const lp_scenario* scenario, const lp_series* later, double* coverage_fraction,
                               double* max_deviation, size_t* n_compared) {
  if (!scenario || !later || !coverage_fraction || !max_deviation) return invalid("null argument");
  return guarded([&] {
    const auto c = compare_to_actual(scenario->value, later->value);
    *coverage_fraction = c.coverage_fraction;
    *max_deviation = c.max_deviation;
    if (n_compared) *n_compared = c.n_compared;
  });
}

lp_status lp_synth_generate(const lp_synth_config* config, lp_series** out, size_t* redraws) {
  if (!config || !out) return invalid("null argument");
  return guarded([&] {
    SynthConfig c;
    c.params = to_params(config->params);
    c.window = Window(config->t_start, config->t_end);
    c.sampling = config->sampling;
    c.noise_sigma = config->noise_sigma;
    c.seed = config->seed;
    if (config->has_substructure) c.substructure = to_params(config->substructure);
    auto generated = generate(c);
    if (redraws) *redraws = generated.redraws;
    *out = new lp_series{std::move(generated.series)};
  });
}

}  // extern "C"
