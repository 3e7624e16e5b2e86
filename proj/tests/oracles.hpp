#pragma once

// Test-only reference computations. Nothing here calls into the fitting code;
// each oracle reaches its answer by enumeration or finite differences.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle {

struct Sample {
  double t;
  double y;
};

/// Minimum RMSE of y ~ x^a (A + B cos(w ln x + phi)) over a dense (B, phi)
/// grid, with A solved in closed form for every cell. After the full grid the
/// search zooms around the best cell with ten-times finer steps `zoom_levels`
/// times; every stage is exhaustive over its grid.
inline double separable_rmse(const std::vector<Sample>& data, double tc, double alpha, double lambda,
                             bool accelerating, double b_max, double b_step, double phi_step, int zoom_levels) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double omega = two_pi / std::log(lambda);
  const std::size_t n = data.size();
  std::vector<double> f(n), logx(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = accelerating ? tc - data[i].t : data[i].t - tc;
    f[i] = std::pow(x, alpha);
    logx[i] = std::log(x);
  }
  double ff = 0.0, fy = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ff += f[i] * f[i];
    fy += f[i] * data[i].y;
    yy += data[i].y * data[i].y;
  }

  // exact SSE of one cell, A = <f, y - B g> / <f, f>
  const auto direct = [&](double b, double phi) {
    double fr = 0.0;
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = data[i].y - b * f[i] * std::cos(omega * logx[i] + phi);
      fr += f[i] * r[i];
    }
    const double a = fr / ff;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) sse += (r[i] - a * f[i]) * (r[i] - a * f[i]);
    return sse;
  };

  // coarse stage: same SSE, expanded so each B costs O(1) for a fixed phi
  double best = std::numeric_limits<double>::infinity(), best_b = 0.0, best_phi = 0.0;
  const auto n_phi = static_cast<long>(std::ceil(two_pi / phi_step));
  const auto n_b = static_cast<long>(std::floor(b_max / b_step + 1e-9));
  for (long j = 0; j < n_phi; ++j) {
    const double phi = static_cast<double>(j) * phi_step;
    double yg = 0.0, gg = 0.0, fg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = f[i] * std::cos(omega * logx[i] + phi);
      yg += data[i].y * g;
      gg += g * g;
      fg += f[i] * g;
    }
    for (long k = 0; k <= n_b; ++k) {
      const double b = static_cast<double>(k) * b_step;
      const double fr = fy - b * fg;
      const double sse = yy - 2.0 * b * yg + b * b * gg - fr * fr / ff;
      if (sse < best) {
        best = sse;
        best_b = b;
        best_phi = phi;
      }
    }
  }
  best = direct(best_b, best_phi);

  double db = b_step, dphi = phi_step;
  for (int level = 0; level < zoom_levels; ++level) {
    const double cb = best_b, cphi = best_phi;
    const double sb = db / 10.0, sphi = dphi / 10.0;
    for (int i = -10; i <= 10; ++i) {
      for (int j = -10; j <= 10; ++j) {
        const double b = cb + i * sb, phi = cphi + j * sphi;
        if (b < 0.0) continue;
        const double sse = direct(b, phi);
        if (sse < best) {
          best = sse;
          best_b = b;
          best_phi = phi;
        }
      }
    }
    db = sb;
    dphi = sphi;
  }
  return std::sqrt(best / static_cast<double>(n));
}

/// Brackets [t_i, t_{i+1}] of a dense grid where the central-difference
/// derivative of `f` changes sign.
template <class F>
std::vector<std::pair<double, double>> derivative_sign_changes(F&& f, double t0, double t1, double step) {
  std::vector<std::pair<double, double>> out;
  const double h = step * 1e-3;
  const auto d = [&](double t) { return f(t + h) - f(t - h); };
  double prev_t = t0, prev_d = d(t0);
  for (double t = t0 + step; t <= t1; t += step) {
    const double cur = d(t);
    if ((cur > 0.0) != (prev_d > 0.0)) out.emplace_back(prev_t, t);
    prev_t = t;
    prev_d = cur;
  }
  return out;
}

/// Nearest-rank percentile, q in (0, 1].
inline double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
  return v[std::max<std::size_t>(rank, 1) - 1];
}

}  // namespace oracle
