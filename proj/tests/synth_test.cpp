#include "doctest.h"

#include <cmath>
#include <random>

#include "logperiodic/errors.hpp"
#include "logperiodic/synth.hpp"

using namespace logperiodic;

namespace {

SynthConfig base() {
  SynthConfig c;
  c.params = {100, 5, -0.4, 1.0, 2.0, 400, Phase::Accelerating};
  c.window = Window(100, 380);
  return c;
}

}  // namespace

TEST_CASE("noise-free output equals the model") {
  const auto out = generate(base());
  REQUIRE(out.series.size() == 281);
  CHECK(out.redraws == 0);
  for (const auto& p : out.series.points()) CHECK(p.value == evaluate(base().params, p.t));
}

TEST_CASE("seeded output is reproducible and seed sensitive") {
  auto c = base();
  c.noise_sigma = 1.0;
  c.seed = 77;
  const auto a = generate(c).series, b = generate(c).series;
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].value == b[i].value);
  c.seed = 78;
  const auto d = generate(c).series;
  std::size_t differ = 0;
  for (std::size_t i = 0; i < a.size(); ++i) differ += a[i].value != d[i].value;
  CHECK(differ == a.size());
}

TEST_CASE("noise standard deviation matches sigma") {
  auto c = base();
  c.params = {100, 5, 0.0, 1.0, 2.0, -1.0, Phase::Decelerating};
  c.window = Window(0, 9999);
  c.noise_sigma = 2.0;
  c.seed = 12345;
  const auto out = generate(c).series;
  REQUIRE(out.size() == 10000);
  double sum = 0, sum2 = 0;
  for (const auto& p : out.points()) {
    const double r = p.value - evaluate(c.params, p.t);
    sum += r;
    sum2 += r * r;
  }
  const double n = out.size();
  const double sd = std::sqrt((sum2 - sum * sum / n) / (n - 1));
  CHECK(std::abs(sd - 2.0) < 0.05 * 2.0);
}

TEST_CASE("NormalSampler is Box-Muller over mt19937_64") {
  NormalSampler sampler(31337);
  std::mt19937_64 engine(31337);
  for (int i = 0; i < 50; ++i) {
    const double u1 = (double(engine() >> 11) + 1.0) / 9007199254740992.0;
    const double u2 = (double(engine() >> 11) + 1.0) / 9007199254740992.0;
    const double r = std::sqrt(-2.0 * std::log(u1));
    CHECK(sampler() == r * std::cos(2 * std::numbers::pi * u2));
    CHECK(sampler() == r * std::sin(2 * std::numbers::pi * u2));
  }
  // fixed by the standard: 10000th output of a default-seeded engine
  std::mt19937_64 reference;
  reference.discard(9999);
  CHECK(reference() == 9981545732273789042ull);
}

TEST_CASE("positivity is repaired by re-drawing") {
  auto c = base();
  c.params = {1.0, 0.5, 0.0, 0.0, 2.0, -1.0, Phase::Decelerating};
  c.window = Window(0, 999);
  c.noise_sigma = 1.0;
  c.seed = 5;
  const auto out = generate(c);
  CHECK(out.redraws > 0);
  for (const auto& p : out.series.points()) CHECK(p.value > 0.0);
}

TEST_CASE("substructure is added on top of the main structure") {
  auto c = base();
  LogPeriodicParams sub{2.0, 1.0, 0.0, 0.3, 2.0, 390, Phase::Accelerating};
  c.substructure = sub;
  const auto out = generate(c).series;
  for (const auto& p : out.points()) CHECK(p.value == evaluate(c.params, p.t) + evaluate(sub, p.t));
  c.substructure->tc = 300;
  CHECK_THROWS_AS(generate(c), Error);
}

TEST_CASE("geometry and argument errors") {
  auto c = base();
  c.window = Window(100, 420);
  CHECK_THROWS_AS(generate(c), Error);
  c = base();
  c.params.phase = Phase::Decelerating;
  CHECK_THROWS_AS(generate(c), Error);
  c = base();
  c.sampling = 0.0;
  CHECK_THROWS_AS(generate(c), Error);
  c = base();
  c.noise_sigma = -1;
  CHECK_THROWS_AS(generate(c), Error);
  c = base();
  c.sampling = 0.5;
  CHECK(generate(c).series.size() == 561);
}
