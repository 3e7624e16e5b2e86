#pragma once

#include <cmath>
#include <numbers>
#include <string_view>
#include <vector>

#include "logperiodic/ingest.hpp"

namespace logperiodic {

/// Smallest admissible distance |t - tc| in days.
inline constexpr double kMinDistance = 0.5;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Accelerating: tc lies after the data, x = tc - t shrinks as t grows.
/// Decelerating: tc lies before the data, x = t - tc grows.
enum class Phase { Accelerating, Decelerating };

const char* to_string(Phase phase) noexcept;
Phase parse_phase(std::string_view text);

/// Parameters of
///
///   Phi(x) = x^alpha * (A + B cos(omega ln x + phi)),  omega = 2 pi / ln(lambda),
///
/// with x = |t - tc|. Successive oscillations contract by lambda in x.
struct LogPeriodicParams {
  double A = 0.0;
  double B = 0.0;
  double alpha = 0.0;
  double phi = 0.0;
  double lambda = 2.0;
  double tc = 0.0;
  Phase phase = Phase::Accelerating;

  double omega() const noexcept { return kTwoPi / std::log(lambda); }
};

/// Throws Error(Domain) unless lambda > 1 and all fields are finite.
void validate(const LogPeriodicParams& params);

/// B >= 0 and phi in [0, 2 pi). Leaves Phi unchanged pointwise.
LogPeriodicParams canonicalize(LogPeriodicParams params);

/// phi_raw mod 2 pi, in [0, 2 pi).
double canonical_phase(double phi_raw);

/// Signed distance to tc for the phase: positive on the valid side.
double distance_to_tc(const LogPeriodicParams& params, double t) noexcept;

/// A + B cos(omega ln x + phi), x > 0.
double oscillatory_factor(const LogPeriodicParams& params, double x);

/// x^alpha * oscillatory_factor(x) at x = |t - tc|, with phase and singularity checks.
double evaluate(const LogPeriodicParams& params, double t);

struct ModelCurve {
  LogPeriodicParams params;
  std::vector<TimePoint> samples;
};

enum class ExtremumKind { Max, Min };

const char* to_string(ExtremumKind kind) noexcept;

struct Extremum {
  double t = 0.0;
  ExtremumKind kind = ExtremumKind::Max;
};

/// Stationary points of Phi inside `window`, ascending in t. Closed form for
/// alpha == 0, grid scan plus bisection otherwise. Points closer to tc than
/// kMinDistance are not reported.
std::vector<Extremum> extrema_schedule(const LogPeriodicParams& params, const Window& window);

}  // namespace logperiodic
