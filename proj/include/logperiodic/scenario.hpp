#pragma once

#include <string>
#include <vector>

#include "logperiodic/fit.hpp"

namespace logperiodic {

struct ScenarioOptions {
  double horizon = 0.0;  // days past the last observation
  double tc_margin = 5.0;
  bool allow_inconsistent = false;
};

/// Fitted curve extended past the data, with a constant +-band.
struct Scenario {
  FitResult fit;
  ModelCurve curve;
  double band_halfwidth = 0.0;  // 2 x sample stddev of residuals
  std::string tc_date;
  std::vector<Extremum> extrema;
  bool truncated = false;  // accelerating horizon clipped at tc - margin
};

/// Samples the model daily from the first observation of `series` (the
/// fitted window) to last + horizon, stopping at tc - tc_margin for an
/// accelerating fit.
Scenario build_scenario(const TimeSeries& series, const FitResult& fit, const ScenarioOptions& options);

struct Coverage {
  double coverage_fraction = 0.0;
  double max_deviation = 0.0;
  std::size_t n_compared = 0;
};

/// Compares later observations inside the curve span against curve +- band.
Coverage compare_to_actual(const Scenario& scenario, const TimeSeries& later);

}  // namespace logperiodic
