#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "logperiodic/ingest.hpp"
#include "logperiodic/model.hpp"

namespace logperiodic {

/// Standard normal deviates from a pinned algorithm: std::mt19937_64 (its
/// output sequence is fixed by the C++ standard), 53-bit uniforms, and the
/// Box-Muller transform using both outputs of each pair. Unlike
/// std::normal_distribution the sequence is identical on every platform.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}
  double operator()();

 private:
  double uniform();  // in (0, 1]
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

struct SynthConfig {
  LogPeriodicParams params;
  Window window;
  double sampling = 1.0;  // days between points
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  std::optional<LogPeriodicParams> substructure;  // added at a shorter scale
  std::string label = "synthetic";
};

struct SynthOutput {
  TimeSeries series;
  std::size_t redraws = 0;  // noise draws rejected for a non-positive value
};

SynthOutput generate(const SynthConfig& config);

}  // namespace logperiodic
