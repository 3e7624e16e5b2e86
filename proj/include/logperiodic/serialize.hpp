#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "logperiodic/fit.hpp"
#include "logperiodic/scenario.hpp"

namespace logperiodic {

using Json = nlohmann::json;

// JSON numbers are written with 17 significant digits, so doubles round-trip.

Json to_json(const LogPeriodicParams& params);
LogPeriodicParams params_from_json(const Json& j);

/// {params, rmse, n_points, oscillation_count, consistent, reasons, notes}.
/// Residuals are not serialized.
Json to_json(const FitResult& result);
FitResult fit_result_from_json(const Json& j);

Json to_json(const ScanReport& report);

/// tc,alpha,lambda,rmse rows in grid order; degenerate cells carry "nan".
std::string grid_to_csv(const std::vector<GridCell>& cells);

Json to_json(const Scenario& scenario);
Scenario scenario_from_json(const Json& j);

struct SvgOptions {
  int width = 960;
  int height = 540;
  std::string title;
};

/// Static SVG 1.1: observed polyline, model polyline, band polygon and a
/// vertical rule at tc.
std::string render_svg(const TimeSeries& observed, const Scenario& scenario, const SvgOptions& options = {});

}  // namespace logperiodic
