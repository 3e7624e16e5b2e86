#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace logperiodic {

struct NelderMeadOptions {
  std::vector<double> initial_step;  // per coordinate
  std::vector<double> tolerance;     // per-coordinate simplex spread at which to stop
  int max_iterations = 500;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free simplex descent with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2). Non-finite
/// objective values are treated as +inf, which lets callers encode bounds.
/// The returned point is never worse than `start`.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                                    const std::vector<double>& start, const NelderMeadOptions& options) {
  const std::size_t dim = start.size();
  const auto f = [&](const std::vector<double>& x) {
    const double v = objective(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  struct Vertex {
    std::vector<double> x;
    double fx;
  };
  std::vector<Vertex> simplex;
  simplex.reserve(dim + 1);
  simplex.push_back({start, f(start)});
  for (std::size_t i = 0; i < dim; ++i) {
    auto x = start;
    x[i] += options.initial_step[i];
    simplex.push_back({x, f(x)});
  }

  const auto order = [&] {
    std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.fx < b.fx; });
  };
  const auto collapsed = [&] {
    for (std::size_t c = 0; c < dim; ++c) {
      for (std::size_t v = 1; v <= dim; ++v) {
        if (std::abs(simplex[v].x[c] - simplex[0].x[c]) >= options.tolerance[c]) return false;
      }
    }
    return true;
  };
  const auto along = [&](const std::vector<double>& centroid, const std::vector<double>& worst, double coef) {
    std::vector<double> x(dim);
    for (std::size_t c = 0; c < dim; ++c) x[c] = centroid[c] + coef * (centroid[c] - worst[c]);
    return x;
  };

  NelderMeadResult result;
  order();
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    if (collapsed()) {
      result.converged = true;
      break;
    }
    std::vector<double> centroid(dim, 0.0);
    for (std::size_t v = 0; v < dim; ++v) {
      for (std::size_t c = 0; c < dim; ++c) centroid[c] += simplex[v].x[c] / static_cast<double>(dim);
    }
    Vertex& worst = simplex[dim];
    const double best_f = simplex[0].fx;
    const double second_worst_f = simplex[dim - 1].fx;

    Vertex reflected{along(centroid, worst.x, 1.0), 0.0};
    reflected.fx = f(reflected.x);
    if (reflected.fx < best_f) {
      Vertex expanded{along(centroid, worst.x, 2.0), 0.0};
      expanded.fx = f(expanded.x);
      worst = expanded.fx < reflected.fx ? std::move(expanded) : std::move(reflected);
    } else if (reflected.fx < second_worst_f) {
      worst = std::move(reflected);
    } else {
      const bool outside = reflected.fx < worst.fx;
      Vertex contracted{along(centroid, worst.x, outside ? 0.5 : -0.5), 0.0};
      contracted.fx = f(contracted.x);
      if (contracted.fx < (outside ? reflected.fx : worst.fx)) {
        worst = std::move(contracted);
      } else {
        for (std::size_t v = 1; v <= dim; ++v) {
          for (std::size_t c = 0; c < dim; ++c) {
            simplex[v].x[c] = simplex[0].x[c] + 0.5 * (simplex[v].x[c] - simplex[0].x[c]);
          }
          simplex[v].fx = f(simplex[v].x);
        }
      }
    }
    order();
  }
  result.iterations = iter;
  result.x = simplex[0].x;
  result.value = simplex[0].fx;
  return result;
}

}  // namespace logperiodic
