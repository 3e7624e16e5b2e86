// Acceptance suite: one PASS / FAIL / SKIP line per criterion, non-zero exit
// on any FAIL.

#include <json.hpp>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "logperiodic/calendar.hpp"
#include "logperiodic/errors.hpp"
#include "logperiodic/fit.hpp"
#include "logperiodic/ingest.hpp"
#include "logperiodic/model.hpp"
#include "logperiodic/synth.hpp"
#include "oracles.hpp"

using namespace logperiodic;
namespace fs = std::filesystem;

namespace {

// Nearest-rank 95th percentile of |tc - 400| over seeds 1..100, sigma = 1,
// measured on the reference build. Runs may not exceed it by more than 10%.
constexpr double kFrozenTcErrorP95 = 1.983478322595829;

enum class Outcome { Pass, Fail, Skip };

struct Line {
  Outcome outcome;
  std::string detail;
};

const LogPeriodicParams kTruth{100.0, 5.0, -0.4, 1.0, 2.0, 400.0, Phase::Accelerating};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

TimeSeries truth_series(double sigma, std::uint64_t seed) {
  SynthConfig c;
  c.params = kTruth;
  c.window = Window(100, 380);
  c.noise_sigma = sigma;
  c.seed = seed;
  return generate(c).series;
}

FitConfig truth_config(const TimeSeries& s) {
  auto c = default_config(s, Phase::Accelerating);
  c.tc_grid = {385, 430, 1};
  c.threads = 1;
  return c;
}

// Refined optima collected for the stationarity check.
struct Optimum {
  std::string origin;
  TimeSeries series;
  FitResult result;
  double tc_margin;
};
std::vector<Optimum> optima;

Line ac1() {
  const auto s = truth_series(0.0, 1);
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = fit(s, truth_config(s));
  const double elapsed = seconds_since(t0);
  optima.push_back({"noiseless", s, r, 5.0});
  const auto& p = r.params;
  const double e_tc = std::abs(p.tc - 400.0), e_alpha = std::abs(p.alpha + 0.4), e_a = std::abs(p.A / 100.0 - 1.0),
               e_b = std::abs(p.B / 5.0 - 1.0), e_phi = std::abs(p.phi - 1.0);
  const bool ok = e_tc <= 0.01 && e_alpha <= 1e-3 && e_a <= 1e-6 && e_b <= 1e-6 && e_phi <= 1e-6 && elapsed <= 10.0;
  std::ostringstream d;
  d << "|dtc|=" << fmt("%.3g", e_tc) << " |dalpha|=" << fmt("%.3g", e_alpha) << " relA=" << fmt("%.3g", e_a)
    << " relB=" << fmt("%.3g", e_b) << " |dphi|=" << fmt("%.3g", e_phi) << " time=" << fmt("%.2f", elapsed) << "s";
  return {ok ? Outcome::Pass : Outcome::Fail, d.str()};
}

Line ac2() {
  std::vector<double> errors;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto s = truth_series(1.0, seed);
    const auto r = fit(s, truth_config(s));
    errors.push_back(std::abs(r.params.tc - 400.0));
    optima.push_back({"seed " + std::to_string(seed), s, r, 5.0});
  }
  const double p95 = oracle::percentile(errors, 0.95);
  const double limit = 1.1 * kFrozenTcErrorP95;
  std::ostringstream d;
  d << "p95 |dtc|=" << fmt("%.17g", p95) << " frozen=" << fmt("%.17g", kFrozenTcErrorP95) << " limit=" << fmt("%.6g", limit)
    << " median=" << fmt("%.4g", oracle::percentile(errors, 0.5)) << " time=" << fmt("%.2f", seconds_since(t0)) << "s";
  return {p95 <= limit ? Outcome::Pass : Outcome::Fail, d.str()};
}

Line ac3() {
  std::mt19937_64 rng(20091112);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double worst_pi = 0.0, worst_phi = 0.0, worst_ratio = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    LogPeriodicParams p;
    p.A = (u01(rng) < 0.5 ? -1.0 : 1.0) * (1.0 + 999.0 * u01(rng));
    p.B = 0.9 * std::abs(p.A) * u01(rng);
    p.alpha = -1.0 + 2.0 * u01(rng);
    p.phi = 2.0 * std::numbers::pi * u01(rng);
    p.lambda = 1.5 + 1.5 * u01(rng);
    p.tc = 0.0;
    p.phase = draw % 2 ? Phase::Accelerating : Phase::Decelerating;
    const double x = 0.5 + 500.0 * u01(rng);
    const double lx = p.lambda * x;
    const double sign = p.phase == Phase::Accelerating ? -1.0 : 1.0;

    const double pi_x = oscillatory_factor(p, x), pi_lx = oscillatory_factor(p, lx);
    worst_pi = std::max(worst_pi, std::abs(pi_lx - pi_x) / std::abs(pi_x));
    const double phi_x = evaluate(p, sign * x), phi_lx = evaluate(p, sign * lx);
    const double scaled = std::pow(p.lambda, p.alpha) * phi_x;
    worst_phi = std::max(worst_phi, std::abs(phi_lx - scaled) / std::abs(scaled));

    // contraction of successive same-kind extrema with alpha = 0
    auto flat = p;
    flat.alpha = 0.0;
    flat.B = std::max(flat.B, 0.1 * std::abs(flat.A));
    const double far = std::pow(flat.lambda, 4) * 10.0;
    const auto ex = sign > 0 ? extrema_schedule(flat, Window(1.0, far)) : extrema_schedule(flat, Window(-far, -1.0));
    std::vector<double> maxima;
    for (const auto& e : ex) {
      if (e.kind == ExtremumKind::Max) maxima.push_back(std::abs(e.t));
    }
    if (maxima.size() < 3) return {Outcome::Fail, "fewer than 3 maxima in draw " + std::to_string(draw)};
    std::sort(maxima.begin(), maxima.end());
    for (std::size_t i = 1; i < maxima.size(); ++i) {
      worst_ratio = std::max(worst_ratio, std::abs(maxima[i] / maxima[i - 1] / flat.lambda - 1.0));
    }
  }
  const bool ok = worst_pi <= 1e-12 && worst_phi <= 1e-12 && worst_ratio <= 1e-12;
  std::ostringstream d;
  d << "1000 draws: max rel Pi(lx)-Pi(x)=" << fmt("%.3g", worst_pi) << " max rel Phi(lx)-l^a Phi(x)=" << fmt("%.3g", worst_phi)
    << " max rel extrema ratio-l=" << fmt("%.3g", worst_ratio);
  return {ok ? Outcome::Pass : Outcome::Fail, d.str()};
}

Line ac4() {
  std::mt19937_64 rng(30);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  double worst = 0.0;
  bool below = false;
  const auto t0 = std::chrono::steady_clock::now();
  for (int inst = 0; inst < 20; ++inst) {
    LogPeriodicParams p;
    p.A = 50.0 + 100.0 * u01(rng);
    p.B = 1.0 + 4.0 * u01(rng);
    p.alpha = -1.0 + 2.0 * u01(rng);
    p.phi = 2.0 * std::numbers::pi * u01(rng);
    p.lambda = 1.8 + 0.4 * u01(rng);
    p.tc = 200.0;
    p.phase = inst % 2 ? Phase::Accelerating : Phase::Decelerating;
    const double sigma = 0.05 * p.B;
    std::vector<TimePoint> pts;
    std::vector<oracle::Sample> data;
    for (int k = 0; k < 30; ++k) {
      const double x = 3.0 + 4.0 * k;
      const double t = p.phase == Phase::Accelerating ? p.tc - x : p.tc + x;
      const double y = evaluate(p, t) + sigma * noise(rng);
      pts.push_back({t, y});
      data.push_back({t, y});
    }
    std::sort(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.t < b.t; });
    std::sort(data.begin(), data.end(), [](auto& a, auto& b) { return a.t < b.t; });
    const auto lin = linear_subfit(TimeSeries(pts), p.tc, p.alpha, p.lambda, p.phase);
    const double brute = oracle::separable_rmse(data, p.tc, p.alpha, p.lambda, p.phase == Phase::Accelerating, 2.0 * p.B,
                                                1e-3, 1e-3, 3);
    below = below || brute < lin.rmse * (1.0 - 1e-12);
    worst = std::max(worst, std::abs(brute - lin.rmse) / lin.rmse);
  }
  const bool ok = worst <= 1e-6 && !below;
  std::ostringstream d;
  d << "20 instances n=30: max rel |brute - subfit|=" << fmt("%.3g", worst) << (below ? " (brute below subfit!)" : "")
    << " time=" << fmt("%.2f", seconds_since(t0)) << "s";
  return {ok ? Outcome::Pass : Outcome::Fail, d.str()};
}

Line ac5() {
  const char* env = std::getenv("LOGPERIODIC_HISTORICAL_DIR");
  const fs::path dir = env ? fs::path(env) : fs::path(LOGPERIODIC_SOURCE_DIR) / "tests" / "data";
  const auto sp = dir / "sp500.csv", gold = dir / "gold.csv";
  if (!fs::exists(sp) && !fs::exists(gold)) {
    return {Outcome::Skip, "no historical closes (set LOGPERIODIC_HISTORICAL_DIR to a directory with sp500.csv / gold.csv)"};
  }
  std::ostringstream d;
  bool ok = true;
  const auto run = [&](const fs::path& file, const char* from, const char* to, double lo, double hi) {
    std::ifstream in(file);
    const auto series = slice(parse_csv(in, "close").series, Window(parse_iso_date(from), parse_iso_date(to)));
    const auto r = fit(series, default_config(series, Phase::Accelerating));
    const bool hit = r.params.tc >= lo && r.params.tc < hi + 1.0;
    ok = ok && hit;
    d << file.filename().string() << " tc=" << format_iso_date(r.params.tc) << (hit ? " in range; " : " OUT of range; ");
  };
  if (fs::exists(sp)) run(sp, "2009-02-01", "2009-08-25", parse_iso_date("2009-09-20"), parse_iso_date("2009-09-30"));
  if (fs::exists(gold)) {
    const double centre = parse_iso_date("2009-11-28");
    run(gold, "2008-10-01", "2009-11-12", centre - 7, centre + 7);
  }
  return {ok ? Outcome::Pass : Outcome::Fail, d.str()};
}

int run_cli(const std::vector<std::string>& args) {
  std::string cmd = LOGPERIODIC_CLI_PATH;
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_params(const FitResult& a, const FitResult& b) {
  const auto &p = a.params, &q = b.params;
  return same_bits(p.A, q.A) && same_bits(p.B, q.B) && same_bits(p.alpha, q.alpha) && same_bits(p.phi, q.phi) &&
         same_bits(p.lambda, q.lambda) && same_bits(p.tc, q.tc) && same_bits(a.rmse, b.rmse);
}

Line ac6() {
  std::ostringstream d;
  bool ok = true;

  // 200 daily points, noisy, full default grid with lambda scanned
  SynthConfig c;
  c.params = kTruth;
  c.window = Window(181, 380);
  c.noise_sigma = 1.0;
  c.seed = 6;
  const auto s = generate(c).series;

  const fs::path dir = fs::temp_directory_path() / ("lp_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  {
    std::ofstream(dir / "in.csv") << to_csv(s, "close");
  }
  const auto scan_once = [&](const std::string& tag) {
    return run_cli({"scan", "--input", (dir / "in.csv").string(), "--phase", "accel", "--lambda", "scan", "--out",
                    (dir / (tag + ".json")).string(), "--grid-out", (dir / (tag + ".csv")).string()});
  };
  const auto t_cli = std::chrono::steady_clock::now();
  const int c1 = scan_once("a"), c2 = scan_once("b");
  const double cli_time = seconds_since(t_cli) / 2.0;
  const bool cli_ok = (c1 == 0 || c1 == 3) && c1 == c2 && slurp(dir / "a.json") == slurp(dir / "b.json") &&
                      slurp(dir / "a.csv") == slurp(dir / "b.csv") && !slurp(dir / "a.csv").empty();
  ok = ok && cli_ok;
  d << "cli scan x2 " << (cli_ok ? "byte-identical" : "DIFFER") << " (" << fmt("%.2f", cli_time) << "s each); ";
  fs::remove_all(dir);

  auto cfg = default_config(s, Phase::Accelerating);
  cfg.lambda_mode = LambdaMode::Scan;
  cfg.threads = 1;
  const auto t0 = std::chrono::steady_clock::now();
  const auto serial = fit(s, cfg);
  const double serial_time = seconds_since(t0);
  cfg.threads = 4;
  const auto parallel = fit(s, cfg);
  const bool bitwise = same_params(serial, parallel);
  const auto cells = cfg.tc_grid.size() * cfg.alpha_grid.size() * cfg.lambda_grid.size();
  ok = ok && bitwise && serial_time <= 60.0;
  d << "threads 1 vs 4 " << (bitwise ? "bitwise equal" : "DIFFER") << "; full default grid (" << cells
    << " cells, 200 points, 1 thread) " << fmt("%.2f", serial_time) << "s";
  return {ok ? Outcome::Pass : Outcome::Fail, d.str()};
}

Line ac7() {
  constexpr double h = 1e-3;
  double worst = 0.0;
  std::string worst_origin;
  for (const auto& o : optima) {
    const auto& p = o.result.params;
    const auto rmse_at = [&](double tc) {
      return linear_subfit(o.series, tc, p.alpha, p.lambda, p.phase, o.tc_margin).rmse;
    };
    const double derivative = (rmse_at(p.tc + h) - rmse_at(p.tc - h)) / (2.0 * h);
    const double scale = std::max({o.result.rmse, rmse_at(p.tc - 1.0), rmse_at(p.tc + 1.0)});
    const double ratio = std::abs(derivative) / scale;
    if (ratio > worst) {
      worst = ratio;
      worst_origin = o.origin;
    }
  }
  std::ostringstream d;
  d << optima.size() << " refined optima: max |dRMSE/dtc| / scale=" << fmt("%.3g", worst) << " (" << worst_origin
    << "), bound 1e-4";
  return {worst < 1e-4 && !optima.empty() ? Outcome::Pass : Outcome::Fail, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Line()>>> criteria{
      {"AC1 noiseless recovery", ac1},      {"AC2 noisy calibration", ac2},   {"AC3 scale invariance", ac3},
      {"AC4 separability oracle", ac4},     {"AC5 historical reproduction", ac5}, {"AC6 determinism", ac6},
      {"AC7 stationarity", ac7}};
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Line line;
    try {
      line = check();
    } catch (const std::exception& e) {
      line = {Outcome::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = line.outcome == Outcome::Pass ? "PASS" : line.outcome == Outcome::Fail ? "FAIL" : "SKIP";
    failures += line.outcome == Outcome::Fail;
    std::printf("%s %-28s %s\n", tag, name.c_str(), line.detail.c_str());
    std::fflush(stdout);
  }
  return failures ? 1 : 0;
}
