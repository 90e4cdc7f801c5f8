#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dzo/error.hpp"
#include "dzo/rand_geometry.hpp"

using namespace dzo;

TEST_CASE("sample_interval: symmetric, second moment 1/3, inside [-1, 1]") {
  RandomStream s(42, {Purpose::Test, 0, 0});
  const int n = 1000000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double r = sample_interval(s);
    REQUIRE(std::abs(r) <= 1.0);
    sum += r;
    sum2 += r * r;
  }
  CHECK(std::abs(sum / n) < 0.002);
  CHECK(std::abs(sum2 / n - 1.0 / 3.0) < 0.002);
}

TEST_CASE("same seed and label give identical sequences") {
  RandomStream a(7, {Purpose::Radius, 3, 11});
  RandomStream b(7, {Purpose::Radius, 3, 11});
  for (int i = 0; i < 1000; ++i) CHECK(a() == b());
}

TEST_CASE("different labels give different, uncorrelated streams") {
  RandomStream a(7, {Purpose::Radius, 3, 11});
  RandomStream b(7, {Purpose::Direction, 3, 11});
  RandomStream c(7, {Purpose::Radius, 4, 11});
  CHECK(a.key() != b.key());
  CHECK(a.key() != c.key());
  const int n = 200000;
  double sab = 0, sa = 0, sb = 0, saa = 0, sbb = 0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_interval(a), y = sample_interval(b);
    sab += x * y;
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double corr = cov / std::sqrt((saa / n - sa * sa / n / n) * (sbb / n - sb * sb / n / n));
  CHECK(std::abs(corr) < 0.01);
}

TEST_CASE("sample_sphere: unit norm, d=1 fair sign, isotropic in d=3") {
  RandomStream s(1, {Purpose::Test, 0, 0});
  for (int d : {1, 2, 5, 50}) {
    for (int i = 0; i < 100; ++i) CHECK(std::abs(sample_sphere(s, d).norm() - 1.0) < 1e-12);
  }
  int plus = 0;
  const int n1 = 100000;
  for (int i = 0; i < n1; ++i) {
    const double z = sample_sphere(s, 1)[0];
    REQUIRE(std::abs(z) == 1.0);
    plus += z > 0;
  }
  CHECK(std::abs(static_cast<double>(plus) / n1 - 0.5) < 0.01);

  const int n = 1000000;
  Eigen::Vector3d diag = Eigen::Vector3d::Zero();
  for (int i = 0; i < n; ++i) diag += sample_sphere(s, 3).cwiseAbs2();
  diag /= n;
  for (int k = 0; k < 3; ++k) CHECK(std::abs(diag[k] - 1.0 / 3.0) < 0.01);
}

TEST_CASE("sample_ball: E||v||^2 = d/(d+2)") {
  RandomStream s(2, {Purpose::Test, 0, 0});
  const int n = 1000000;
  for (int d : {2, 10}) {
    double m = 0;
    for (int i = 0; i < n; ++i) {
      const double q = sample_ball(s, d).squaredNorm();
      REQUIRE(q <= 1.0);
      m += q;
    }
    CHECK(std::abs(m / n - static_cast<double>(d) / (d + 2)) < 0.005);
  }
  for (int i = 0; i < 1000; ++i) CHECK(std::abs(sample_ball(s, 1)[0]) <= 1.0);
}

TEST_CASE("d = 0 is an invalid dimension") {
  RandomStream s(3, {Purpose::Test, 0, 0});
  CHECK_THROWS_AS(sample_sphere(s, 0), Error);
  CHECK_THROWS_AS(sample_ball(s, 0), Error);
  try {
    sample_sphere(s, 0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidDimension);
  }
}

TEST_CASE("a stream is a UniformRandomBitGenerator") {
  RandomStream s(5, {Purpose::Test, 0, 0});
  std::normal_distribution<double> normal;
  double sum = 0, sum2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = normal(s);
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sum2 / n - 1.0) < 0.02);
  CHECK(s.calls() > 0);
}
