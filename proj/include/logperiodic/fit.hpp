#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "logperiodic/ingest.hpp"
#include "logperiodic/model.hpp"

namespace logperiodic {

/// Inclusive arithmetic grid lo, lo + step, ..., up to hi.
struct GridRange {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;

  std::vector<double> values() const;
  std::size_t size() const;
};

enum class LambdaMode { Fixed, Scan };

/// Thresholds that decide whether a fit counts as a genuine log-periodic
/// signature.
struct ConsistencyCriteria {
  double lambda_target = 2.0;
  double lambda_tolerance = 0.2;
  double min_oscillations = 2.0;
  double max_amplitude_ratio = 1.0;  // B / |A|
  double max_rmse_fraction = 0.15;   // of the series' value range
};

/// Simplex refinement stops once every vertex is within these per-coordinate
/// distances of the best one. Noiseless recovery of A and B to 1e-6 relative
/// needs tc pinned to well below 1e-3 day.
struct RefineOptions {
  double tc_tolerance = 1e-8;
  double alpha_tolerance = 1e-9;
  double lambda_tolerance = 1e-9;
  int max_iterations = 500;
};

struct FitConfig {
  Phase phase = Phase::Accelerating;
  LambdaMode lambda_mode = LambdaMode::Fixed;
  double fixed_lambda = 2.0;
  GridRange lambda_grid{1.5, 3.0, 0.05};
  GridRange alpha_grid{-1.0, 1.0, 0.05};
  GridRange tc_grid{0.0, 0.0, 1.0};
  double tc_margin = 5.0;
  bool refine = true;
  bool use_log_price = false;
  std::size_t top_k = 5;
  unsigned threads = 0;  // 0: hardware concurrency
  ConsistencyCriteria criteria;
  RefineOptions refine_options;

  std::vector<double> lambda_values() const;
};

/// Config with the default grids and a tc range placed beside the data:
/// from the margin out to half the series span (at least 30 days).
FitConfig default_config(const TimeSeries& series, Phase phase);

/// Throws Error(Domain) if the grids are empty or the tc grid violates the
/// phase geometry / margin relative to `series`.
void validate(const FitConfig& config, const TimeSeries& series);

struct LinearFit {
  double A = 0.0;
  double B = 0.0;
  double phi = 0.0;
  double rmse = 0.0;
};

/// Exact least squares in (A, B, phi) for fixed (tc, alpha, lambda), through
/// the linear regressors x^a, x^a cos(w ln x), x^a sin(w ln x).
LinearFit linear_subfit(const TimeSeries& series, double tc, double alpha, double lambda, Phase phase,
                        double tc_margin = kMinDistance);

struct FitResult {
  LogPeriodicParams params;
  double rmse = 0.0;
  std::size_t n_points = 0;
  double oscillation_count = 0.0;
  double value_range = 0.0;
  bool consistent = false;
  std::vector<std::string> reasons;
  std::vector<std::string> notes;
  std::vector<double> residuals;
};

/// Residuals, rmse, oscillation count and gate verdict of `params` on `series`.
FitResult assess(const TimeSeries& series, const LogPeriodicParams& params, const ConsistencyCriteria& criteria);

struct Verdict {
  bool consistent = false;
  std::vector<std::string> reasons;
};

Verdict consistency_gate(const FitResult& result, const ConsistencyCriteria& criteria);
inline Verdict consistency_gate(const FitResult& result, const FitConfig& config) {
  return consistency_gate(result, config.criteria);
}

struct GridCell {
  double tc = 0.0;
  double alpha = 0.0;
  double lambda = 0.0;
  std::optional<double> rmse;  // empty when the design was degenerate
};

struct ScanReport {
  std::vector<GridCell> grid_results;  // tc-major, then alpha, then lambda
  FitResult best;
  std::vector<FitResult> runner_ups;   // next top_k candidates after best
};

/// Strict weak ordering used to rank grid cells: rmse, then |lambda - 2|,
/// then |alpha|, then earlier tc.
bool ranks_before(const GridCell& a, const GridCell& b);

ScanReport scan(const TimeSeries& series, const FitConfig& config);

FitResult refine(const TimeSeries& series, const FitResult& start, const FitConfig& config);

/// scan, then refine when enabled.
FitResult fit(const TimeSeries& series, const FitConfig& config);

/// Windows from each local minimum (strictly below every value within
/// +-neighborhood days) to the end of the series, spanning at least min_span.
std::vector<Window> window_candidates(const TimeSeries& series, double min_span, double neighborhood = 5.0);

}  // namespace logperiodic
