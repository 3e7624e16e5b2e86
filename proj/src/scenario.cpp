#include "logperiodic/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "logperiodic/calendar.hpp"
#include "logperiodic/errors.hpp"

namespace logperiodic {
namespace {

double sample_stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double r : v) ss += (r - mean) * (r - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

Scenario build_scenario(const TimeSeries& series, const FitResult& fit, const ScenarioOptions& options) {
  if (!(options.horizon >= 0.0)) throw Error(ErrorCode::Domain, "horizon must be non-negative");
  if (!(options.tc_margin >= kMinDistance)) throw Error(ErrorCode::Domain, "tc margin below the singularity guard");
  if (!fit.consistent && !options.allow_inconsistent) {
    throw Error(ErrorCode::Domain, "fit failed the consistency gate");
  }
  const auto& params = fit.params;
  validate(params);

  Scenario s;
  s.fit = fit;
  s.curve.params = params;
  s.tc_date = format_iso_date(params.tc);
  const bool all_zero = std::all_of(fit.residuals.begin(), fit.residuals.end(), [](double r) { return r == 0.0; });
  s.band_halfwidth = all_zero ? 0.0 : 2.0 * sample_stddev(fit.residuals);

  const double start = series.front().t;
  double end = series.back().t + options.horizon;
  if (params.phase == Phase::Accelerating && end > params.tc - options.tc_margin) {
    end = params.tc - options.tc_margin;
    s.truncated = true;
  }
  if (end < start) throw Error(ErrorCode::Domain, "scenario span is empty");

  for (double t = start, k = 0.0; t <= end; t = start + ++k) s.curve.samples.push_back({t, evaluate(params, t)});
  if (s.curve.samples.empty() || s.curve.samples.back().t < end - 1e-9) {
    s.curve.samples.push_back({end, evaluate(params, end)});
  }

  const double last = s.curve.samples.back().t;
  if (last > start) s.extrema = extrema_schedule(params, Window(start, last));
  return s;
}

Coverage compare_to_actual(const Scenario& scenario, const TimeSeries& later) {
  const auto& samples = scenario.curve.samples;
  if (samples.empty()) throw Error(ErrorCode::Domain, "scenario has no curve");
  const double lo = samples.front().t;
  const double hi = samples.back().t;
  Coverage c;
  std::size_t inside = 0;
  for (const auto& p : later.points()) {
    if (p.t < lo || p.t > hi) continue;
    const double dev = std::abs(p.value - evaluate(scenario.curve.params, p.t));
    c.max_deviation = std::max(c.max_deviation, dev);
    if (dev <= scenario.band_halfwidth) ++inside;
    ++c.n_compared;
  }
  if (c.n_compared == 0) throw Error(ErrorCode::Domain, "later series does not overlap the scenario span");
  c.coverage_fraction = static_cast<double>(inside) / static_cast<double>(c.n_compared);
  return c;
}

}  // namespace logperiodic
