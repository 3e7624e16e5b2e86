// Command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "logperiodic/logperiodic.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNoFit = 2;
constexpr int kExitInconsistent = 3;

struct CliError {
  int exit_code;
  std::string message;
};

void check(lp_status status, const std::string& context) {
  if (status == LP_OK) return;
  throw CliError{status == LP_ERR_NO_FIT ? kExitNoFit : kExitInput,
                 context + ": " + lp_status_message(status) + ": " + lp_last_error()};
}

struct SeriesFree {
  void operator()(lp_series* p) const { lp_series_free(p); }
};
struct FitFree {
  void operator()(lp_fit_result* p) const { lp_fit_result_free(p); }
};
struct ReportFree {
  void operator()(lp_scan_report* p) const { lp_scan_report_free(p); }
};
struct ScenarioFree {
  void operator()(lp_scenario* p) const { lp_scenario_free(p); }
};
struct StringFree {
  void operator()(char* p) const { lp_string_free(p); }
};
using SeriesPtr = std::unique_ptr<lp_series, SeriesFree>;
using FitPtr = std::unique_ptr<lp_fit_result, FitFree>;
using ReportPtr = std::unique_ptr<lp_scan_report, ReportFree>;
using ScenarioPtr = std::unique_ptr<lp_scenario, ScenarioFree>;

std::string take(char* raw) {
  std::unique_ptr<char, StringFree> owned(raw);
  return owned ? std::string(owned.get()) : std::string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitInput, "cannot open '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{kExitInput, "cannot write '" + path + "'"};
  out << content;
  if (!out) throw CliError{kExitInput, "failed writing '" + path + "'"};
}

std::string sha256(const std::string& bytes) {
  char hex[65];
  check(lp_sha256_hex(bytes.data(), bytes.size(), hex), "digest");
  return hex;
}

double parse_day(const std::string& text) {
  double day = 0.0;
  check(lp_parse_day(text.c_str(), &day), "date '" + text + "'");
  return day;
}

std::string date_of(double day) {
  char buf[11];
  check(lp_format_date(day, buf), "date");
  return buf;
}

std::pair<double, double> parse_range(const std::string& text, const char* what) {
  const auto colon = text.find(':', 1);
  if (colon == std::string::npos) throw CliError{kExitInput, std::string(what) + " must look like <start>:<end>"};
  return {parse_day(text.substr(0, colon)), parse_day(text.substr(colon + 1))};
}

SeriesPtr load_series(const std::string& bytes, const std::string& column) {
  lp_series* raw = nullptr;
  std::size_t skipped = 0;
  check(lp_series_parse_csv(bytes.data(), bytes.size(), column.c_str(), &raw, &skipped), "input");
  if (skipped) std::cerr << "note: skipped " << skipped << " row(s) without a usable '" << column << "' value\n";
  return SeriesPtr(raw);
}

std::pair<double, double> span_of(const lp_series* series) {
  double t0, t1, v;
  check(lp_series_point(series, 0, &t0, &v), "series");
  check(lp_series_point(series, lp_series_size(series) - 1, &t1, &v), "series");
  return {t0, t1};
}

SeriesPtr slice(const lp_series* series, double start, double end) {
  lp_series* raw = nullptr;
  check(lp_series_slice(series, start, end, &raw), "window");
  return SeriesPtr(raw);
}

Json grid_json(const lp_grid& g) { return Json{{"lo", g.lo}, {"hi", g.hi}, {"step", g.step}}; }

Json manifest(const std::string& command, Json config, const std::string& input_bytes, const std::string& timestamp) {
  return Json{{"command", command},
              {"config", std::move(config)},
              {"input_sha256", sha256(input_bytes)},
              {"tool_version", lp_version()},
              {"timestamp", timestamp}};
}

std::string default_timestamp(const lp_series* series, const std::string& override_value) {
  if (!override_value.empty()) return override_value;
  return date_of(span_of(series).second) + "T00:00:00Z";
}

// fit / scan ---------------------------------------------------------------

struct FitOptions {
  std::string input;
  std::string column = "close";
  std::string window;
  std::string phase;
  std::string lambda_mode = "fixed";
  std::string tc_range;
  std::string out;
  std::string grid_out;
  std::string timestamp;
  bool log_price = false;
  bool no_refine = false;
  double tc_margin = 5.0;
  unsigned threads = 0;
  std::size_t top_k = 5;
};

void add_fit_options(CLI::App* cmd, FitOptions& o) {
  cmd->add_option("--input", o.input, "CSV with a 'date' column")->required();
  cmd->add_option("--column", o.column, "value column")->capture_default_str();
  cmd->add_option("--window", o.window, "analysis window <start>:<end> (YYYY-MM-DD or day offsets)");
  cmd->add_option("--phase", o.phase, "accel or decel")->required()->check(CLI::IsMember({"accel", "decel"}));
  cmd->add_option("--lambda", o.lambda_mode, "fixed (lambda = 2) or scan")
      ->capture_default_str()
      ->check(CLI::IsMember({"fixed", "scan"}));
  cmd->add_flag("--log-price", o.log_price, "fit natural-log prices");
  cmd->add_option("--tc-range", o.tc_range, "tc candidates <start>:<end>, 1-day step");
  cmd->add_option("--tc-margin", o.tc_margin, "minimum days between tc and the data")->capture_default_str();
  cmd->add_flag("--no-refine", o.no_refine, "skip simplex refinement of the grid optimum");
  cmd->add_option("--threads", o.threads, "scan worker threads, 0 = all cores")->capture_default_str();
  cmd->add_option("--top-k", o.top_k, "runner-up candidates to report")->capture_default_str();
  cmd->add_option("--timestamp", o.timestamp, "manifest timestamp (default: date of the last observation)");
  cmd->add_option("--out", o.out, "output JSON path (default stdout)");
}

struct Prepared {
  std::string bytes;
  SeriesPtr full;
  SeriesPtr window;
  lp_fit_config config{};
  Json resolved;
};

Prepared prepare(const FitOptions& o) {
  Prepared p;
  p.bytes = read_file(o.input);
  p.full = load_series(p.bytes, o.column);
  auto [start, end] = span_of(p.full.get());
  if (!o.window.empty()) std::tie(start, end) = parse_range(o.window, "--window");
  p.window = slice(p.full.get(), start, end);
  const auto [w0, w1] = span_of(p.window.get());

  const lp_phase phase = o.phase == "accel" ? LP_ACCELERATING : LP_DECELERATING;
  auto& c = p.config;
  check(lp_fit_config_init(&c, p.window.get(), phase), "config");
  if (o.tc_margin != c.tc_margin) {
    if (phase == LP_ACCELERATING) c.tc_grid.lo = w1 + o.tc_margin;
    else c.tc_grid.hi = w0 - o.tc_margin;
    c.tc_margin = o.tc_margin;
  }
  if (!o.tc_range.empty()) {
    const auto [lo, hi] = parse_range(o.tc_range, "--tc-range");
    c.tc_grid.lo = lo;
    c.tc_grid.hi = hi;
  }
  c.lambda_mode = o.lambda_mode == "scan" ? LP_LAMBDA_SCAN : LP_LAMBDA_FIXED;
  c.use_log_price = o.log_price ? 1 : 0;
  c.refine = o.no_refine ? 0 : 1;
  c.threads = o.threads;
  c.top_k = o.top_k;

  p.resolved = Json{{"input", o.input},
                    {"column", o.column},
                    {"window", {{"start", date_of(start)}, {"end", date_of(end)}, {"t_start", start}, {"t_end", end}}},
                    {"phase", o.phase},
                    {"lambda_mode", o.lambda_mode},
                    {"fixed_lambda", c.fixed_lambda},
                    {"lambda_grid", grid_json(c.lambda_grid)},
                    {"alpha_grid", grid_json(c.alpha_grid)},
                    {"tc_grid", grid_json(c.tc_grid)},
                    {"tc_margin", c.tc_margin},
                    {"refine", c.refine != 0},
                    {"log_price", c.use_log_price != 0},
                    {"criteria",
                     {{"lambda_target", c.lambda_target},
                      {"lambda_tolerance", c.lambda_tolerance},
                      {"min_oscillations", c.min_oscillations},
                      {"max_amplitude_ratio", c.max_amplitude_ratio},
                      {"max_rmse_fraction", c.max_rmse_fraction}}}};
  return p;
}

int report_verdict(const lp_fit_result* result) {
  if (lp_fit_result_consistent(result)) return kExitOk;
  for (std::size_t i = 0; i < lp_fit_result_reason_count(result); ++i) {
    std::cerr << "inconsistent: " << lp_fit_result_reason(result, i) << "\n";
  }
  return kExitInconsistent;
}

int cmd_fit(const FitOptions& o) {
  auto p = prepare(o);
  lp_fit_result* raw = nullptr;
  check(lp_fit(p.window.get(), &p.config, &raw), "fit");
  FitPtr result(raw);
  auto doc = Json::parse(take([&] {
    char* s = nullptr;
    check(lp_fit_result_to_json(result.get(), &s), "serialize");
    return s;
  }()));
  doc["manifest"] = manifest("fit", p.resolved, p.bytes, default_timestamp(p.full.get(), o.timestamp));
  write_output(o.out, doc.dump(2) + "\n");
  return report_verdict(result.get());
}

int cmd_scan(const FitOptions& o) {
  auto p = prepare(o);
  lp_scan_report* raw = nullptr;
  check(lp_scan(p.window.get(), &p.config, &raw), "scan");
  ReportPtr report(raw);
  char* s = nullptr;
  check(lp_scan_report_to_json(report.get(), &s), "serialize");
  auto doc = Json::parse(take(s));
  doc["manifest"] = manifest("scan", p.resolved, p.bytes, default_timestamp(p.full.get(), o.timestamp));
  if (!o.grid_out.empty()) {
    check(lp_scan_report_grid_csv(report.get(), &s), "grid");
    write_output(o.grid_out, take(s));
  }
  write_output(o.out, doc.dump(2) + "\n");
  lp_fit_result* best = nullptr;
  check(lp_scan_report_best(report.get(), &best), "scan");
  return report_verdict(FitPtr(best).get());
}

// forecast / report --------------------------------------------------------

struct ForecastOptions {
  std::string fit;
  std::string input;
  std::string column;
  std::string svg;
  std::string out;
  std::string timestamp;
  double horizon = 0.0;
  bool force = false;
};

lp_params params_of(const Json& doc) {
  lp_params params{};
  if (!doc.contains("params")) throw CliError{kExitInput, "document has no 'params'"};
  check(lp_params_from_json(doc["params"].dump().c_str(), &params), "params");
  return params;
}

int cmd_forecast(const ForecastOptions& o) {
  const auto fit_bytes = read_file(o.fit);
  Json doc;
  try {
    doc = Json::parse(fit_bytes);
  } catch (const Json::exception& e) {
    throw CliError{kExitInput, std::string("fit document: ") + e.what()};
  }
  const lp_params params = params_of(doc);
  const Json cfg = doc.contains("manifest") ? doc["manifest"].value("config", Json::object()) : Json::object();
  const std::string column = !o.column.empty() ? o.column : cfg.value("column", std::string("close"));
  const bool log_price = cfg.value("log_price", false);
  const double tc_margin = cfg.value("tc_margin", 5.0);
  if (!(o.horizon >= 0.0)) throw CliError{kExitInput, "--horizon must be non-negative"};

  const auto bytes = read_file(o.input);
  auto full = load_series(bytes, column);
  auto [start, end] = span_of(full.get());
  if (cfg.contains("window")) {
    start = cfg["window"].value("t_start", start);
    end = cfg["window"].value("t_end", end);
  }
  auto window = slice(full.get(), start, end);

  if (!doc.value("consistent", false) && !o.force) {
    std::cerr << "fit is marked inconsistent; pass --force to build a scenario anyway\n";
    return kExitInconsistent;
  }

  lp_fit_config config{};
  check(lp_fit_config_init(&config, window.get(), params.phase), "config");
  config.use_log_price = log_price ? 1 : 0;
  config.tc_margin = tc_margin;
  lp_fit_result* assessed_raw = nullptr;
  check(lp_assess(window.get(), &params, &config, &assessed_raw), "assess");
  FitPtr assessed(assessed_raw);

  SeriesPtr fitted_window, observed;
  auto display = slice(full.get(), start, span_of(full.get()).second);
  if (log_price) {
    lp_series* raw = nullptr;
    check(lp_series_log_transform(window.get(), &raw), "log");
    fitted_window.reset(raw);
    check(lp_series_log_transform(display.get(), &raw), "log");
    observed.reset(raw);
  } else {
    fitted_window = std::move(window);
    observed = std::move(display);
  }

  lp_scenario* scenario_raw = nullptr;
  check(lp_build_scenario(fitted_window.get(), assessed.get(), o.horizon, tc_margin, 1, &scenario_raw), "scenario");
  ScenarioPtr scenario(scenario_raw);
  if (lp_scenario_truncated(scenario.get())) std::cerr << "note: horizon truncated at tc - " << tc_margin << " days\n";

  char* s = nullptr;
  check(lp_scenario_to_json(scenario.get(), &s), "serialize");
  auto out = Json::parse(take(s));
  out["log_price"] = log_price;
  Json resolved{{"fit", o.fit},
                {"fit_sha256", sha256(fit_bytes)},
                {"input", o.input},
                {"column", column},
                {"window", {{"start", date_of(start)}, {"end", date_of(end)}, {"t_start", start}, {"t_end", end}}},
                {"log_price", log_price},
                {"horizon", o.horizon},
                {"tc_margin", tc_margin},
                {"force", o.force}};
  out["manifest"] = manifest("forecast", resolved, bytes, default_timestamp(full.get(), o.timestamp));

  if (!o.svg.empty()) {
    check(lp_scenario_to_svg(scenario.get(), observed.get(), column.c_str(), &s), "svg");
    write_output(o.svg, take(s));
  }
  write_output(o.out, out.dump(2) + "\n");
  return kExitOk;
}

struct ReportOptions {
  std::string scenario;
  std::string input;
  std::string column;
  std::string out;
  std::string timestamp;
};

int cmd_report(const ReportOptions& o) {
  const auto scenario_bytes = read_file(o.scenario);
  Json doc;
  try {
    doc = Json::parse(scenario_bytes);
  } catch (const Json::exception& e) {
    throw CliError{kExitInput, std::string("scenario document: ") + e.what()};
  }
  const Json cfg = doc.contains("manifest") ? doc["manifest"].value("config", Json::object()) : Json::object();
  const std::string column = !o.column.empty() ? o.column : cfg.value("column", std::string("close"));
  const bool log_price = doc.value("log_price", false);

  lp_scenario* raw = nullptr;
  check(lp_scenario_from_json(scenario_bytes.c_str(), &raw), "scenario");
  ScenarioPtr scenario(raw);

  const auto bytes = read_file(o.input);
  auto later = load_series(bytes, column);
  if (log_price) {
    lp_series* transformed = nullptr;
    check(lp_series_log_transform(later.get(), &transformed), "log");
    later.reset(transformed);
  }
  double coverage = 0.0, max_dev = 0.0;
  std::size_t compared = 0;
  check(lp_compare_to_actual(scenario.get(), later.get(), &coverage, &max_dev, &compared), "compare");

  Json out{{"coverage_fraction", coverage},
           {"max_deviation", max_dev},
           {"n_compared", compared},
           {"band_halfwidth", lp_scenario_band_halfwidth(scenario.get())},
           {"log_price", log_price}};
  Json resolved{{"scenario", o.scenario}, {"scenario_sha256", sha256(scenario_bytes)}, {"input", o.input}, {"column", column}};
  out["manifest"] = manifest("report", resolved, bytes, default_timestamp(later.get(), o.timestamp));
  write_output(o.out, out.dump(2) + "\n");
  return kExitOk;
}

// synth --------------------------------------------------------------------

struct SynthOptions {
  std::string params;
  std::string window;
  std::string out;
  std::string column = "close";
  double sigma = 0.0;
  double sampling = 1.0;
  std::uint64_t seed = 0;
};

int cmd_synth(const SynthOptions& o) {
  const std::string text = !o.params.empty() && o.params.front() == '{' ? o.params : read_file(o.params);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    throw CliError{kExitInput, std::string("params: ") + e.what()};
  }
  lp_synth_config config{};
  config.params = params_of(Json{{"params", doc}});
  if (doc.contains("substructure")) {
    config.has_substructure = 1;
    config.substructure = params_of(Json{{"params", doc["substructure"]}});
  }
  std::tie(config.t_start, config.t_end) = parse_range(o.window, "--window");
  config.sampling = o.sampling;
  config.noise_sigma = o.sigma;
  config.seed = o.seed;

  lp_series* raw = nullptr;
  std::size_t redraws = 0;
  check(lp_synth_generate(&config, &raw, &redraws), "synth");
  SeriesPtr series(raw);
  if (redraws) std::cerr << "note: " << redraws << " noise draw(s) rejected for non-positive values\n";
  char* csv = nullptr;
  check(lp_series_to_csv(series.get(), o.column.c_str(), &csv), "csv");
  write_output(o.out, take(csv));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Log-periodic critical-time fitting for price series"};
  app.set_version_flag("--version", std::string(lp_version()));
  app.require_subcommand(1);

  FitOptions fit_options;
  auto* fit = app.add_subcommand("fit", "fit the model to a window and apply the consistency gate");
  add_fit_options(fit, fit_options);

  FitOptions scan_options;
  auto* scan = app.add_subcommand("scan", "evaluate the (tc, alpha, lambda) grid and rank candidates");
  add_fit_options(scan, scan_options);
  scan->add_option("--grid-out", scan_options.grid_out, "write the RMSE surface as CSV");

  ForecastOptions forecast_options;
  auto* forecast = app.add_subcommand("forecast", "extend a fit into a scenario with an uncertainty band");
  forecast->add_option("--fit", forecast_options.fit, "fit JSON from the fit command")->required();
  forecast->add_option("--input", forecast_options.input, "the CSV the fit was made on")->required();
  forecast->add_option("--column", forecast_options.column, "value column (default: as recorded in the fit)");
  forecast->add_option("--horizon", forecast_options.horizon, "days past the last observation")->capture_default_str();
  forecast->add_option("--svg", forecast_options.svg, "write a static SVG chart");
  forecast->add_option("--out", forecast_options.out, "output JSON path (default stdout)");
  forecast->add_option("--timestamp", forecast_options.timestamp, "manifest timestamp");
  forecast->add_flag("--force", forecast_options.force, "build a scenario even for an inconsistent fit");

  SynthOptions synth_options;
  auto* synth = app.add_subcommand("synth", "generate a synthetic series from known parameters");
  synth->add_option("--params", synth_options.params, "parameter JSON file or inline object")->required();
  synth->add_option("--window", synth_options.window, "<start>:<end>")->required();
  synth->add_option("--sigma", synth_options.sigma, "Gaussian noise sigma in value units")->capture_default_str();
  synth->add_option("--seed", synth_options.seed, "generator seed")->capture_default_str();
  synth->add_option("--sampling", synth_options.sampling, "days between points")->capture_default_str();
  synth->add_option("--column", synth_options.column, "value column name")->capture_default_str();
  synth->add_option("--out", synth_options.out, "output CSV path (default stdout)");

  ReportOptions report_options;
  auto* report = app.add_subcommand("report", "score a scenario against later observations");
  report->add_option("--scenario", report_options.scenario, "scenario JSON from the forecast command")->required();
  report->add_option("--input", report_options.input, "CSV with later observations")->required();
  report->add_option("--column", report_options.column, "value column (default: as recorded)");
  report->add_option("--out", report_options.out, "output JSON path (default stdout)");
  report->add_option("--timestamp", report_options.timestamp, "manifest timestamp");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*fit) return cmd_fit(fit_options);
    if (*scan) return cmd_scan(scan_options);
    if (*forecast) return cmd_forecast(forecast_options);
    if (*synth) return cmd_synth(synth_options);
    if (*report) return cmd_report(report_options);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
