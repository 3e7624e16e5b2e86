#include "logperiodic/synth.hpp"

#include <cmath>

#include "logperiodic/errors.hpp"

namespace logperiodic {
namespace {

constexpr int kMaxRedraws = 1000;

void check_geometry(const LogPeriodicParams& params, const Window& window, const char* what) {
  validate(params);
  for (double t : {window.t_start, window.t_end}) {
    if (distance_to_tc(params, t) < kMinDistance) {
      throw Error(ErrorCode::Domain, std::string(what) + " window crosses or touches tc");
    }
  }
}

}  // namespace

double NormalSampler::uniform() {
  // 53 random bits -> (0, 1]
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double NormalSampler::operator()() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform()));
  const double angle = kTwoPi * uniform();
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

SynthOutput generate(const SynthConfig& config) {
  if (!(config.sampling > 0.0) || !std::isfinite(config.sampling)) {
    throw Error(ErrorCode::Domain, "sampling interval must be positive");
  }
  if (!(config.noise_sigma >= 0.0) || !std::isfinite(config.noise_sigma)) {
    throw Error(ErrorCode::Domain, "noise sigma must be non-negative");
  }
  if (!(config.window.t_start < config.window.t_end)) throw Error(ErrorCode::Domain, "empty window");
  check_geometry(config.params, config.window, "main");
  if (config.substructure) check_geometry(*config.substructure, config.window, "substructure");

  NormalSampler normal(config.seed);
  const auto count =
      static_cast<std::size_t>(std::floor((config.window.t_end - config.window.t_start) / config.sampling + 1e-9)) + 1;
  std::vector<TimePoint> points;
  points.reserve(count);
  std::size_t redraws = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double t = config.window.t_start + static_cast<double>(k) * config.sampling;
    double clean = evaluate(config.params, t);
    if (config.substructure) clean += evaluate(*config.substructure, t);
    double value = clean;
    if (config.noise_sigma > 0.0) {
      int attempts = 0;
      do {
        if (attempts > 0) ++redraws;
        if (++attempts > kMaxRedraws) throw Error(ErrorCode::Domain, "noise keeps driving values non-positive");
        value = clean + config.noise_sigma * normal();
      } while (value <= 0.0);
    } else if (value <= 0.0) {
      throw Error(ErrorCode::Domain, "model produces a non-positive value");
    }
    points.push_back({t, value});
  }
  return {TimeSeries(std::move(points), config.label), redraws};
}

}  // namespace logperiodic
