#include "logperiodic/model.hpp"

#include <algorithm>
#include <cmath>

#include "logperiodic/errors.hpp"

namespace logperiodic {

const char* to_string(Phase phase) noexcept {
  return phase == Phase::Accelerating ? "accelerating" : "decelerating";
}

Phase parse_phase(std::string_view text) {
  if (text == "accel" || text == "accelerating") return Phase::Accelerating;
  if (text == "decel" || text == "decelerating") return Phase::Decelerating;
  throw Error(ErrorCode::Format, "unknown phase '" + std::string(text) + "'");
}

const char* to_string(ExtremumKind kind) noexcept { return kind == ExtremumKind::Max ? "max" : "min"; }

void validate(const LogPeriodicParams& p) {
  for (double v : {p.A, p.B, p.alpha, p.phi, p.lambda, p.tc}) {
    if (!std::isfinite(v)) throw Error(ErrorCode::Domain, "non-finite model parameter");
  }
  if (!(p.lambda > 1.0)) throw Error(ErrorCode::Domain, "lambda must exceed 1");
}

double canonical_phase(double phi_raw) {
  if (!std::isfinite(phi_raw)) throw Error(ErrorCode::Domain, "non-finite phase");
  double r = std::fmod(phi_raw, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative number can round back up to exactly 2 pi
  if (r >= kTwoPi) r = 0.0;
  return r + 0.0;
}

LogPeriodicParams canonicalize(LogPeriodicParams params) {
  if (params.B < 0.0) {
    params.B = -params.B;
    params.phi += std::numbers::pi;
  }
  params.phi = canonical_phase(params.phi);
  return params;
}

double distance_to_tc(const LogPeriodicParams& params, double t) noexcept {
  return params.phase == Phase::Accelerating ? params.tc - t : t - params.tc;
}

double oscillatory_factor(const LogPeriodicParams& params, double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::Domain, "oscillatory factor needs x > 0");
  return params.A + params.B * std::cos(params.omega() * std::log(x) + params.phi);
}

double evaluate(const LogPeriodicParams& params, double t) {
  const double x = distance_to_tc(params, t);
  if (x < 0.0) {
    throw Error(ErrorCode::PhaseDomain, std::string("t lies on the wrong side of tc for the ") +
                                            to_string(params.phase) + " phase");
  }
  if (x < kMinDistance) throw Error(ErrorCode::SingularityGuard, "t is closer to tc than the singularity guard");
  return std::pow(x, params.alpha) * oscillatory_factor(params, x);
}

namespace {

struct DistanceRange {
  double lo = 0.0;
  double hi = 0.0;
};

DistanceRange distance_range(const LogPeriodicParams& params, const Window& window) {
  if (params.tc > window.t_start && params.tc < window.t_end) {
    throw Error(ErrorCode::Domain, "window contains tc in its interior");
  }
  DistanceRange r;
  if (params.phase == Phase::Accelerating) {
    if (params.tc < window.t_end) throw Error(ErrorCode::PhaseDomain, "accelerating window must end before tc");
    r = {params.tc - window.t_end, params.tc - window.t_start};
  } else {
    if (params.tc > window.t_start) throw Error(ErrorCode::PhaseDomain, "decelerating window must start after tc");
    r = {window.t_start - params.tc, window.t_end - params.tc};
  }
  r.lo = std::max(r.lo, kMinDistance);
  return r;
}

double time_at(const LogPeriodicParams& params, double x) {
  return params.phase == Phase::Accelerating ? params.tc - x : params.tc + x;
}

}  // namespace

std::vector<Extremum> extrema_schedule(const LogPeriodicParams& params, const Window& window) {
  validate(params);
  const auto range = distance_range(params, window);
  std::vector<Extremum> out;
  if (params.B == 0.0 || !(range.lo < range.hi)) return out;

  const double omega = params.omega();
  const double u_lo = std::log(range.lo);
  const double u_hi = std::log(range.hi);

  if (params.alpha == 0.0) {
    // omega ln x + phi = k pi; even k is a crest of the cosine
    const auto k_first = static_cast<long>(std::ceil((omega * u_lo + params.phi) / std::numbers::pi));
    const auto k_last = static_cast<long>(std::floor((omega * u_hi + params.phi) / std::numbers::pi));
    for (long k = k_first; k <= k_last; ++k) {
      const double x = std::exp((static_cast<double>(k) * std::numbers::pi - params.phi) / omega);
      if (x < range.lo || x > range.hi) continue;
      const bool crest = (k % 2 == 0);
      const bool is_max = (params.B > 0.0) == crest;
      out.push_back({time_at(params, x), is_max ? ExtremumKind::Max : ExtremumKind::Min});
    }
  } else {
    // dPhi/dx = x^(alpha-1) g(ln x); only the sign of g matters
    const auto g = [&](double u) {
      const double theta = omega * u + params.phi;
      return params.alpha * (params.A + params.B * std::cos(theta)) - params.B * omega * std::sin(theta);
    };
    const double step = std::log(params.lambda) / 64.0;
    const auto n = static_cast<std::size_t>(std::ceil((u_hi - u_lo) / step));
    double prev_u = u_lo;
    double prev_g = g(u_lo);
    for (std::size_t i = 1; i <= n; ++i) {
      const double u = (i == n) ? u_hi : u_lo + static_cast<double>(i) * step;
      const double gu = g(u);
      if (gu == 0.0) continue;
      if (prev_g != 0.0 && (gu > 0.0) != (prev_g > 0.0)) {
        double a = prev_u, b = u;
        const bool rising_at_a = prev_g > 0.0;
        for (int it = 0; it < 200 && std::exp(b) - std::exp(a) > 1e-10; ++it) {
          const double mid = 0.5 * (a + b);
          if ((g(mid) > 0.0) == rising_at_a) a = mid;
          else b = mid;
        }
        const double x = std::exp(0.5 * (a + b));
        out.push_back({time_at(params, x), rising_at_a ? ExtremumKind::Max : ExtremumKind::Min});
      }
      prev_u = u;
      prev_g = gu;
    }
  }
  std::sort(out.begin(), out.end(), [](const Extremum& a, const Extremum& b) { return a.t < b.t; });
  return out;
}

}  // namespace logperiodic
