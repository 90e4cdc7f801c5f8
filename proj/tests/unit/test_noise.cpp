#include <doctest.h>

#include <cmath>

#include "dzo/error.hpp"
#include "dzo/noise.hpp"

using namespace dzo;

TEST_CASE("zero, constant bias and sign-alternating are deterministic") {
  const NoiseModel zero = NoiseModel::zero();
  const NoiseModel bias = NoiseModel::constant_bias(0.5);
  const NoiseModel alt = NoiseModel::sign_alternating(1.0);
  for (std::uint64_t t = 1; t < 50; ++t) {
    CHECK(sample_noise(zero, t, 3, NoiseDraw::First, 1) == 0.0);
    CHECK(sample_noise(bias, t, 3, NoiseDraw::Second, 1) == 0.5);
  }
  CHECK(sample_noise(alt, 3, 0, NoiseDraw::First, 1) == 1.0);
  CHECK(sample_noise(alt, 4, 0, NoiseDraw::First, 1) == -1.0);
  CHECK(sample_noise(alt, 4, 1, NoiseDraw::First, 1) == 1.0);
}

TEST_CASE("random kinds have the stated second moment") {
  for (const NoiseModel& m : {NoiseModel::gaussian(0.5), NoiseModel::uniform(0.5)}) {
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int t = 1; t <= n; ++t) {
      const double x = sample_noise(m, static_cast<std::uint64_t>(t), 2, NoiseDraw::First, 7);
      s += x;
      s2 += x * x;
    }
    CHECK(std::abs(s / n) < 0.005);
    CHECK(std::abs(s2 / n - 0.25) < 0.005);
  }
  const NoiseModel u = NoiseModel::uniform(1.0);
  for (std::uint64_t t = 1; t < 1000; ++t) {
    CHECK(std::abs(sample_noise(u, t, 0, NoiseDraw::First, 3)) <= std::sqrt(3.0));
  }
}

TEST_CASE("first and second draws are different streams") {
  const NoiseModel g = NoiseModel::gaussian(1.0);
  int equal = 0;
  for (std::uint64_t t = 1; t <= 100; ++t) {
    const double a = sample_noise(g, t, 0, NoiseDraw::First, 5);
    const double b = sample_noise(g, t, 0, NoiseDraw::Second, 5);
    CHECK(a == sample_noise(g, t, 0, NoiseDraw::First, 5));
    equal += a == b;
  }
  CHECK(equal == 0);
}

TEST_CASE("precommitted sequence is indexed 2(t-1)+which and can run out") {
  const NoiseModel p = NoiseModel::precommitted({0.1, -0.2, 0.3, -0.4});
  CHECK(p.sigma == doctest::Approx(0.4));
  CHECK(sample_noise(p, 1, 0, NoiseDraw::First, 0) == 0.1);
  CHECK(sample_noise(p, 1, 5, NoiseDraw::Second, 0) == -0.2);
  CHECK(sample_noise(p, 2, 0, NoiseDraw::Second, 0) == -0.4);
  try {
    sample_noise(p, 3, 0, NoiseDraw::First, 0);
    FAIL("expected exhaustion");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SequenceExhausted);
  }
  CHECK_THROWS_AS(NoiseModel::precommitted({1.0, 2.0}, 1.5), Error);
}

TEST_CASE("parameter errors") {
  CHECK_THROWS_AS(NoiseModel::gaussian(-1.0), Error);
  CHECK_THROWS_AS(sample_noise(NoiseModel::zero(), 0, 0, NoiseDraw::First, 0), Error);
  CHECK(parse_noise_kind("precommitted_sequence") == NoiseKind::Precommitted);
  CHECK_THROWS_AS(parse_noise_kind("adaptive"), Error);
}
