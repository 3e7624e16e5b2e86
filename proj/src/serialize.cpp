#include "logperiodic/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "logperiodic/calendar.hpp"
#include "logperiodic/errors.hpp"

namespace logperiodic {
namespace {

double number(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number()) throw Error(ErrorCode::Format, std::string("missing numeric field '") + key + "'");
  return it->get<double>();
}

std::string fixed(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Json to_json(const LogPeriodicParams& p) {
  return Json{{"A", p.A},         {"B", p.B},   {"alpha", p.alpha},
              {"phi", p.phi},     {"lambda", p.lambda}, {"tc", p.tc},
              {"tc_date", format_iso_date(p.tc)}, {"phase", to_string(p.phase)}};
}

LogPeriodicParams params_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Format, "parameters must be a JSON object");
  LogPeriodicParams p;
  p.A = number(j, "A");
  p.B = number(j, "B");
  p.alpha = number(j, "alpha");
  p.phi = number(j, "phi");
  p.lambda = j.contains("lambda") ? number(j, "lambda") : 2.0;
  if (j.contains("tc")) {
    p.tc = number(j, "tc");
  } else if (j.contains("tc_date") && j["tc_date"].is_string()) {
    p.tc = parse_iso_date(j["tc_date"].get<std::string>());
  } else {
    throw Error(ErrorCode::Format, "parameters need 'tc' or 'tc_date'");
  }
  if (!j.contains("phase") || !j["phase"].is_string()) throw Error(ErrorCode::Format, "missing 'phase'");
  p.phase = parse_phase(j["phase"].get<std::string>());
  validate(p);
  return p;
}

Json to_json(const FitResult& r) {
  return Json{{"params", to_json(r.params)},
              {"rmse", r.rmse},
              {"n_points", r.n_points},
              {"oscillation_count", r.oscillation_count},
              {"value_range", r.value_range},
              {"consistent", r.consistent},
              {"reasons", r.reasons},
              {"notes", r.notes}};
}

FitResult fit_result_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("params")) throw Error(ErrorCode::Format, "fit result needs 'params'");
  FitResult r;
  r.params = params_from_json(j["params"]);
  r.rmse = number(j, "rmse");
  r.n_points = j.at("n_points").get<std::size_t>();
  r.oscillation_count = number(j, "oscillation_count");
  r.value_range = j.contains("value_range") ? number(j, "value_range") : 0.0;
  r.consistent = j.at("consistent").get<bool>();
  r.reasons = j.value("reasons", std::vector<std::string>{});
  r.notes = j.value("notes", std::vector<std::string>{});
  return r;
}

Json to_json(const ScanReport& report) {
  Json runner_ups = Json::array();
  for (const auto& r : report.runner_ups) runner_ups.push_back(to_json(r));
  const auto degenerate = std::count_if(report.grid_results.begin(), report.grid_results.end(),
                                        [](const GridCell& c) { return !c.rmse.has_value(); });
  return Json{{"best", to_json(report.best)},
              {"runner_ups", std::move(runner_ups)},
              {"grid_cells", report.grid_results.size()},
              {"degenerate_cells", degenerate}};
}

std::string grid_to_csv(const std::vector<GridCell>& cells) {
  std::string out = "tc,alpha,lambda,rmse\n";
  char buf[128];
  for (const auto& c : cells) {
    if (c.rmse) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", c.tc, c.alpha, c.lambda, *c.rmse);
    } else {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,nan\n", c.tc, c.alpha, c.lambda);
    }
    out += buf;
  }
  return out;
}

Json to_json(const Scenario& s) {
  Json curve = Json::array();
  for (const auto& p : s.curve.samples) curve.push_back({{"t", p.t}, {"date", format_iso_date(p.t)}, {"value", p.value}});
  Json extrema = Json::array();
  for (const auto& e : s.extrema) {
    extrema.push_back({{"t", e.t},
                       {"date", format_iso_date(e.t)},
                       {"kind", to_string(e.kind)},
                       {"value", evaluate(s.curve.params, e.t)}});
  }
  return Json{{"tc", s.curve.params.tc},
              {"tc_date", s.tc_date},
              {"phase", to_string(s.curve.params.phase)},
              {"band_halfwidth", s.band_halfwidth},
              {"truncated", s.truncated},
              {"fit", to_json(s.fit)},
              {"curve", std::move(curve)},
              {"extrema", std::move(extrema)}};
}

Scenario scenario_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("fit") || !j.contains("curve")) {
    throw Error(ErrorCode::Format, "scenario needs 'fit' and 'curve'");
  }
  Scenario s;
  s.fit = fit_result_from_json(j["fit"]);
  s.curve.params = s.fit.params;
  s.band_halfwidth = number(j, "band_halfwidth");
  s.tc_date = j.value("tc_date", format_iso_date(s.fit.params.tc));
  s.truncated = j.value("truncated", false);
  for (const auto& p : j["curve"]) s.curve.samples.push_back({number(p, "t"), number(p, "value")});
  for (const auto& e : j.value("extrema", Json::array())) {
    const auto kind = e.at("kind").get<std::string>() == "max" ? ExtremumKind::Max : ExtremumKind::Min;
    s.extrema.push_back({number(e, "t"), kind});
  }
  return s;
}

std::string render_svg(const TimeSeries& observed, const Scenario& scenario, const SvgOptions& options) {
  const auto& samples = scenario.curve.samples;
  const double tc = scenario.curve.params.tc;
  const double band = scenario.band_halfwidth;

  double t_lo = std::min(observed.front().t, tc), t_hi = std::max(observed.back().t, tc);
  double v_lo = std::numeric_limits<double>::infinity(), v_hi = -v_lo;
  for (const auto& p : observed.points()) {
    v_lo = std::min(v_lo, p.value);
    v_hi = std::max(v_hi, p.value);
  }
  for (const auto& p : samples) {
    t_lo = std::min(t_lo, p.t);
    t_hi = std::max(t_hi, p.t);
    v_lo = std::min(v_lo, p.value - band);
    v_hi = std::max(v_hi, p.value + band);
  }
  if (!(v_hi > v_lo)) {
    v_lo -= 1.0;
    v_hi += 1.0;
  }
  const double pad = 0.05 * (v_hi - v_lo);
  v_lo -= pad;
  v_hi += pad;

  const double left = 80, right = options.width - 20.0, top = 40, bottom = options.height - 50.0;
  const auto px = [&](double t) { return left + (t - t_lo) / (t_hi - t_lo) * (right - left); };
  const auto py = [&](double v) { return bottom - (v - v_lo) / (v_hi - v_lo) * (bottom - top); };
  const auto point = [&](double t, double v) { return fixed(px(t)) + "," + fixed(py(v)); };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(options.width) +
         "\" height=\"" + std::to_string(options.height) + "\" viewBox=\"0 0 " + std::to_string(options.width) + " " +
         std::to_string(options.height) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(options.width) + "\" height=\"" +
         std::to_string(options.height) + "\" fill=\"white\"/>\n";
  if (!options.title.empty()) {
    svg += "<text x=\"" + fixed(left) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" +
           escape_xml(options.title) + "</text>\n";
  }

  svg += "<g stroke=\"#444\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + fixed(left) + "\" y1=\"" + fixed(bottom) + "\" x2=\"" + fixed(right) + "\" y2=\"" + fixed(bottom) + "\"/>\n";
  svg += "<line x1=\"" + fixed(left) + "\" y1=\"" + fixed(top) + "\" x2=\"" + fixed(left) + "\" y2=\"" + fixed(bottom) + "\"/>\n";
  svg += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#444\">\n";
  char label[64];
  for (int i = 0; i <= 4; ++i) {
    const double v = v_lo + (v_hi - v_lo) * i / 4.0;
    std::snprintf(label, sizeof label, "%.5g", v);
    svg += "<text x=\"" + fixed(left - 6) + "\" y=\"" + fixed(py(v) + 4) + "\" text-anchor=\"end\">" + label + "</text>\n";
    const double t = t_lo + (t_hi - t_lo) * i / 4.0;
    svg += "<text x=\"" + fixed(px(t)) + "\" y=\"" + fixed(bottom + 18) + "\" text-anchor=\"middle\">" +
           format_iso_date(t) + "</text>\n";
  }
  svg += "</g>\n";

  svg += "<polygon class=\"band\" fill=\"#9ecae1\" fill-opacity=\"0.5\" stroke=\"none\" points=\"";
  for (const auto& p : samples) svg += point(p.t, p.value + band) + " ";
  for (auto it = samples.rbegin(); it != samples.rend(); ++it) svg += point(it->t, it->value - band) + " ";
  svg.back() = '"';
  svg += "/>\n";

  svg += "<polyline class=\"data\" fill=\"none\" stroke=\"#222\" stroke-width=\"1\" points=\"";
  for (const auto& p : observed.points()) svg += point(p.t, p.value) + " ";
  svg.back() = '"';
  svg += "/>\n";

  svg += "<polyline class=\"model\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\"";
  for (const auto& p : samples) svg += point(p.t, p.value) + " ";
  svg.back() = '"';
  svg += "/>\n";

  svg += "<line class=\"tc\" x1=\"" + fixed(px(tc)) + "\" y1=\"" + fixed(top) + "\" x2=\"" + fixed(px(tc)) + "\" y2=\"" +
         fixed(bottom) + "\" stroke=\"#2ca02c\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n";
  svg += "<text x=\"" + fixed(px(tc) - 4) + "\" y=\"" + fixed(top + 12) +
         "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#2ca02c\" text-anchor=\"end\">Tc " +
         escape_xml(scenario.tc_date) + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace logperiodic
