#include "logperiodic/fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numeric>
#include <thread>

#include "logperiodic/errors.hpp"
#include "logperiodic/nelder_mead.hpp"

namespace logperiodic {
namespace {

constexpr double kGridSlack = 1e-9;

std::string format(const char* fmt, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

const TimeSeries& fitted_series(const TimeSeries& series, const FitConfig& config, std::optional<TimeSeries>& storage) {
  if (!config.use_log_price) return series;
  storage.emplace(log_transform(series));
  return *storage;
}

FitResult result_from_cell(const TimeSeries& series, const GridCell& cell, const FitConfig& config) {
  const auto lin = linear_subfit(series, cell.tc, cell.alpha, cell.lambda, config.phase, config.tc_margin);
  LogPeriodicParams params{lin.A, lin.B, cell.alpha, lin.phi, cell.lambda, cell.tc, config.phase};
  auto result = assess(series, params, config.criteria);
  // keep the ranked objective value bit-for-bit
  result.rmse = lin.rmse;
  const auto verdict = consistency_gate(result, config.criteria);
  result.consistent = verdict.consistent;
  result.reasons = verdict.reasons;
  return result;
}

}  // namespace

std::size_t GridRange::size() const {
  if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo) return 0;
  return static_cast<std::size_t>(std::floor((hi - lo) / step + kGridSlack)) + 1;
}

std::vector<double> GridRange::values() const {
  const auto n = size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = lo + static_cast<double>(i) * step;
    if (std::abs(v) < 1e-12) v = 0.0;
    out[i] = v;
  }
  return out;
}

std::vector<double> FitConfig::lambda_values() const {
  if (lambda_mode == LambdaMode::Fixed) return {fixed_lambda};
  return lambda_grid.values();
}

FitConfig default_config(const TimeSeries& series, Phase phase) {
  FitConfig config;
  config.phase = phase;
  const double span = series.back().t - series.front().t;
  const double reach = std::ceil(std::max(30.0, 0.5 * span));
  if (phase == Phase::Accelerating) {
    config.tc_grid = {series.back().t + config.tc_margin, series.back().t + std::max(reach, config.tc_margin), 1.0};
  } else {
    config.tc_grid = {series.front().t - std::max(reach, config.tc_margin), series.front().t - config.tc_margin, 1.0};
  }
  return config;
}

void validate(const FitConfig& config, const TimeSeries& series) {
  if (!(config.tc_margin >= kMinDistance)) throw Error(ErrorCode::Domain, "tc margin below the singularity guard");
  if (config.tc_grid.size() == 0) throw Error(ErrorCode::Domain, "empty tc grid");
  if (config.alpha_grid.size() == 0) throw Error(ErrorCode::Domain, "empty alpha grid");
  const auto lambdas = config.lambda_values();
  if (lambdas.empty()) throw Error(ErrorCode::Domain, "empty lambda grid");
  for (double l : lambdas) {
    if (!(l > 1.0) || !std::isfinite(l)) throw Error(ErrorCode::Domain, "lambda grid must lie above 1");
  }
  const auto tcs = config.tc_grid.values();
  if (config.phase == Phase::Accelerating) {
    if (tcs.front() < series.back().t + config.tc_margin - kGridSlack) {
      throw Error(ErrorCode::Domain, "accelerating tc grid must start at least tc_margin after the data");
    }
  } else if (tcs.back() > series.front().t - config.tc_margin + kGridSlack) {
    throw Error(ErrorCode::Domain, "decelerating tc grid must end at least tc_margin before the data");
  }
}

LinearFit linear_subfit(const TimeSeries& series, double tc, double alpha, double lambda, Phase phase,
                        double tc_margin) {
  const auto n = series.size();
  if (n < 4) throw Error(ErrorCode::DegenerateDesign, "linear subfit needs at least 4 points");
  if (!(lambda > 1.0) || !std::isfinite(alpha) || !std::isfinite(tc)) {
    throw Error(ErrorCode::Domain, "invalid nonlinear parameters");
  }
  const double omega = kTwoPi / std::log(lambda);
  const LogPeriodicParams geometry{0.0, 0.0, alpha, 0.0, lambda, tc, phase};

  Eigen::MatrixXd design(static_cast<Eigen::Index>(n), 3);
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double x = distance_to_tc(geometry, series[i].t);
    if (!(x >= tc_margin)) throw Error(ErrorCode::Domain, "observation within tc margin or on the wrong side of tc");
    const double scale = std::pow(x, alpha);
    const double theta = omega * std::log(x);
    const auto row = static_cast<Eigen::Index>(i);
    design(row, 0) = scale;
    design(row, 1) = scale * std::cos(theta);
    design(row, 2) = scale * std::sin(theta);
    y(row) = series[i].value;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) throw Error(ErrorCode::DegenerateDesign, "regressors are rank deficient");
  const Eigen::Vector3d coef = qr.solve(y);
  const double sse = (y - design * coef).squaredNorm();

  LinearFit out;
  out.A = coef(0);
  // B cos(theta + phi) = (B cos phi) cos theta - (B sin phi) sin theta
  out.B = std::hypot(coef(1), coef(2));
  out.phi = canonical_phase(std::atan2(-coef(2), coef(1)));
  out.rmse = std::sqrt(sse / static_cast<double>(n));
  if (!std::isfinite(out.rmse) || !std::isfinite(out.A) || !std::isfinite(out.B)) {
    throw Error(ErrorCode::DegenerateDesign, "non-finite least-squares solution");
  }
  return out;
}

FitResult assess(const TimeSeries& series, const LogPeriodicParams& params, const ConsistencyCriteria& criteria) {
  validate(params);
  FitResult result;
  result.params = canonicalize(params);
  result.n_points = series.size();
  result.value_range = series.value_range();
  result.residuals.reserve(series.size());
  double sse = 0.0;
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = 0.0;
  for (const auto& p : series.points()) {
    const double r = p.value - evaluate(result.params, p.t);
    result.residuals.push_back(r);
    sse += r * r;
    const double x = distance_to_tc(result.params, p.t);
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
  }
  result.rmse = std::sqrt(sse / static_cast<double>(series.size()));
  result.oscillation_count = (std::log(x_hi) - std::log(x_lo)) / std::log(result.params.lambda);
  const auto verdict = consistency_gate(result, criteria);
  result.consistent = verdict.consistent;
  result.reasons = verdict.reasons;
  return result;
}

Verdict consistency_gate(const FitResult& result, const ConsistencyCriteria& criteria) {
  Verdict v;
  const auto& p = result.params;
  const double lambda_lo = criteria.lambda_target - criteria.lambda_tolerance;
  const double lambda_hi = criteria.lambda_target + criteria.lambda_tolerance;
  if (!(p.lambda >= lambda_lo && p.lambda <= lambda_hi)) {
    v.reasons.push_back(format("lambda outside [%g, %g]", lambda_lo, lambda_hi));
  }
  if (!(result.oscillation_count >= criteria.min_oscillations)) {
    v.reasons.push_back(format("fewer than %g oscillations (%.3g)", criteria.min_oscillations, result.oscillation_count));
  }
  const double amplitude = std::abs(p.B);
  if (!(amplitude > 0.0)) {
    v.reasons.push_back("no visible oscillation");
  } else if (!(amplitude <= criteria.max_amplitude_ratio * std::abs(p.A))) {
    v.reasons.push_back(format("oscillation amplitude exceeds %g x baseline", criteria.max_amplitude_ratio));
  }
  if (!(result.rmse <= criteria.max_rmse_fraction * result.value_range)) {
    v.reasons.push_back(format("rmse exceeds %g%% of value range", 100.0 * criteria.max_rmse_fraction));
  }
  v.consistent = v.reasons.empty();
  return v;
}

bool ranks_before(const GridCell& a, const GridCell& b) {
  if (a.rmse.has_value() != b.rmse.has_value()) return a.rmse.has_value();
  if (a.rmse && *a.rmse != *b.rmse) return *a.rmse < *b.rmse;
  const double la = std::abs(a.lambda - 2.0), lb = std::abs(b.lambda - 2.0);
  if (la != lb) return la < lb;
  const double aa = std::abs(a.alpha), ab = std::abs(b.alpha);
  if (aa != ab) return aa < ab;
  if (a.tc != b.tc) return a.tc < b.tc;
  if (a.alpha != b.alpha) return a.alpha < b.alpha;
  return a.lambda < b.lambda;
}

ScanReport scan(const TimeSeries& raw_series, const FitConfig& config) {
  std::optional<TimeSeries> storage;
  const TimeSeries& series = fitted_series(raw_series, config, storage);
  validate(config, series);

  const auto tcs = config.tc_grid.values();
  const auto alphas = config.alpha_grid.values();
  const auto lambdas = config.lambda_values();

  ScanReport report;
  auto& cells = report.grid_results;
  cells.reserve(tcs.size() * alphas.size() * lambdas.size());
  for (double tc : tcs) {
    for (double alpha : alphas) {
      for (double lambda : lambdas) cells.push_back({tc, alpha, lambda, std::nullopt});
    }
  }

  // Each cell is written by exactly one worker; the result is schedule-independent.
  const auto evaluate_range = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < cells.size(); i += stride) {
      auto& c = cells[i];
      try {
        c.rmse = linear_subfit(series, c.tc, c.alpha, c.lambda, config.phase, config.tc_margin).rmse;
      } catch (const Error&) {
        c.rmse.reset();
      }
    }
  };
  unsigned workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cells.size()));
  if (workers <= 1) {
    evaluate_range(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(evaluate_range, w, workers);
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].rmse && std::isfinite(*cells[i].rmse)) order.push_back(i);
  }
  if (order.empty()) throw Error(ErrorCode::NoFit, "every grid cell was degenerate");
  const auto keep = std::min(order.size(), config.top_k + 1);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [&](std::size_t a, std::size_t b) { return ranks_before(cells[a], cells[b]); });

  report.best = result_from_cell(series, cells[order[0]], config);
  for (std::size_t i = 1; i < keep; ++i) report.runner_ups.push_back(result_from_cell(series, cells[order[i]], config));
  return report;
}

FitResult refine(const TimeSeries& raw_series, const FitResult& start, const FitConfig& config) {
  std::optional<TimeSeries> storage;
  const TimeSeries& series = fitted_series(raw_series, config, storage);

  const bool with_lambda = config.lambda_mode == LambdaMode::Scan;
  const double tc_bound = config.phase == Phase::Accelerating ? series.back().t + config.tc_margin
                                                              : series.front().t - config.tc_margin;
  const auto in_bounds = [&](const std::vector<double>& v) {
    const bool tc_ok = config.phase == Phase::Accelerating ? v[0] >= tc_bound : v[0] <= tc_bound;
    const bool alpha_ok = v[1] >= config.alpha_grid.lo && v[1] <= config.alpha_grid.hi;
    const bool lambda_ok = !with_lambda || (v[2] >= config.lambda_grid.lo && v[2] <= config.lambda_grid.hi && v[2] > 1.0);
    return tc_ok && alpha_ok && lambda_ok;
  };
  const auto lambda_of = [&](const std::vector<double>& v) { return with_lambda ? v[2] : start.params.lambda; };
  const auto objective = [&](const std::vector<double>& v) {
    if (!in_bounds(v)) return std::numeric_limits<double>::infinity();
    try {
      return linear_subfit(series, v[0], v[1], lambda_of(v), config.phase, config.tc_margin).rmse;
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  std::vector<double> x0{start.params.tc, start.params.alpha};
  NelderMeadOptions options;
  options.initial_step = {0.5 * config.tc_grid.step, 0.5 * config.alpha_grid.step};
  options.tolerance = {config.refine_options.tc_tolerance, config.refine_options.alpha_tolerance};
  options.max_iterations = config.refine_options.max_iterations;
  if (with_lambda) {
    x0.push_back(start.params.lambda);
    options.initial_step.push_back(0.5 * config.lambda_grid.step);
    options.tolerance.push_back(config.refine_options.lambda_tolerance);
  }

  if (!std::isfinite(objective(x0))) {
    FitResult annotated = start;
    annotated.notes.push_back(std::string(to_string(ErrorCode::RefinementFailed)) +
                              ": non-finite objective at the start point");
    return annotated;
  }

  const auto nm = nelder_mead(objective, x0, options);
  if (!(nm.value < start.rmse)) return start;
  GridCell cell{nm.x[0], nm.x[1], lambda_of(nm.x), nm.value};
  auto refined = result_from_cell(series, cell, config);
  if (!nm.converged) refined.notes.push_back("refinement stopped at the iteration limit");
  return refined;
}

FitResult fit(const TimeSeries& series, const FitConfig& config) {
  auto report = scan(series, config);
  if (!config.refine) return report.best;
  return refine(series, report.best, config);
}

std::vector<Window> window_candidates(const TimeSeries& series, double min_span, double neighborhood) {
  std::vector<Window> out;
  const auto& pts = series.points();
  const double t_end = series.back().t;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool has_left = false, has_right = false, is_min = true;
    for (std::size_t j = i; j-- > 0 && pts[i].t - pts[j].t <= neighborhood;) {
      has_left = true;
      if (!(pts[i].value < pts[j].value)) { is_min = false; break; }
    }
    for (std::size_t j = i + 1; is_min && j < pts.size() && pts[j].t - pts[i].t <= neighborhood; ++j) {
      has_right = true;
      if (!(pts[i].value < pts[j].value)) is_min = false;
    }
    if (is_min && has_left && has_right && t_end - pts[i].t >= min_span) out.emplace_back(pts[i].t, t_end);
  }
  return out;
}

}  // namespace logperiodic
