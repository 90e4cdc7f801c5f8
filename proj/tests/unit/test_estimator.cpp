#include <doctest.h>

#include <cmath>
#include <vector>

#include "dzo/error.hpp"
#include "dzo/estimator.hpp"

using namespace dzo;

namespace {

ProjectionSet ball(Eigen::Index d, double r = 1.0) {
  return ProjectionSet::ball(Eigen::VectorXd::Zero(d), r);
}

}  // namespace

TEST_CASE("kernel estimator is unbiased on affine functions") {
  const Kernel k = build_legendre_kernel(2.0);
  for (Eigen::Index d : {1, 5, 20}) {
    CAPTURE(d);
    Eigen::VectorXd c(d);
    for (Eigen::Index i = 0; i < d; ++i) c[i] = 0.5 - 0.1 * static_cast<double>(i % 7);
    const Objective lin = make_linear(c, 0.3, ball(d));
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(d, 0.05);
    const GradientMoments m =
        mc_gradient_moments(EstimatorKind::Kernel, lin, x, 0.1, &k, NoiseModel::zero(), 100000, 17);
    for (Eigen::Index i = 0; i < d; ++i) {
      CHECK(std::abs(m.mean[i] - c[i]) <= 3.0 * m.mean_se[i]);
    }
  }
}

TEST_CASE("constant objective without noise gives g = 0 on every draw") {
  const Kernel k = build_legendre_kernel(3.0);
  const Objective c = make_constant(4, 2.0, ball(4));
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(4);
  for (std::uint64_t t = 1; t <= 100; ++t) {
    const QueryLabel label{9, t, 2};
    CHECK(zo_gradient_kernel(c, x, 0.3, k, NoiseModel::zero(), label).g.isZero(0.0));
    CHECK(zo_gradient_plain(c, x, 0.3, NoiseModel::zero(), label).g.isZero(0.0));
  }
}

TEST_CASE("queries sit at x +- h r zeta") {
  const Kernel k = build_legendre_kernel(2.0);
  const Objective q = make_quadratic(Eigen::VectorXd::Ones(3), Eigen::VectorXd::Zero(3), ball(3), 1);
  const Eigen::Vector3d x(0.1, 0.2, -0.1);
  const GradientEstimate e = zo_gradient_kernel(q, x, 0.25, k, NoiseModel::zero(), {4, 7, 1});
  CHECK((e.query_plus - (x + 0.25 * e.r * e.zeta)).norm() < 1e-15);
  CHECK((e.query_minus - (x - 0.25 * e.r * e.zeta)).norm() < 1e-15);
  CHECK(std::abs(e.zeta.norm() - 1.0) < 1e-12);
  const double y = q.f(e.query_plus), yy = q.f(e.query_minus);
  CHECK((e.g - 3.0 / 0.5 * (y - yy) * 3.0 * e.r * e.zeta).norm() < 1e-12);

  const GradientEstimate p = zo_gradient_plain(q, x, 0.25, NoiseModel::zero(), {4, 7, 1});
  CHECK(p.r == 1.0);
  CHECK((p.query_plus - (x + 0.25 * p.zeta)).norm() < 1e-15);
  CHECK(p.zeta == e.zeta);
}

TEST_CASE("x|x| at the origin has bias (3/4) h under K = 3r") {
  const Kernel k = build_legendre_kernel(2.0);
  const Objective p = make_holder_probe(2.0, 1, ball(1));
  const double h = 0.2;
  const GradientMoments m = mc_gradient_moments(EstimatorKind::Kernel, p, Eigen::VectorXd::Zero(1), h,
                                                &k, NoiseModel::zero(), 200000, 3);
  CHECK(std::abs(m.mean[0] - 0.75 * h) <= 3.0 * m.mean_se[0]);
}

TEST_CASE("bias probe slopes") {
  const std::vector<double> hs = {0.4, 0.2, 0.1, 0.05};
  const Kernel k2 = build_legendre_kernel(2.0);
  const BiasProbe b2 = probe_bias(make_holder_probe(2.0, 1, ball(1)), Eigen::VectorXd::Zero(1), hs, k2,
                                  200000, 5);
  CHECK(b2.fit.slope == doctest::Approx(1.0).epsilon(0.05));
  const Kernel k3 = build_legendre_kernel(3.0);
  const BiasProbe b3 = probe_bias(make_holder_probe(3.0, 1, ball(1)), Eigen::VectorXd::Zero(1), hs, k3,
                                  200000, 5);
  CHECK(b3.fit.slope == doctest::Approx(2.0).epsilon(0.05));
  CHECK_THROWS_AS(probe_bias(make_holder_probe(2.0, 1, ball(1)), Eigen::VectorXd::Zero(1),
                             std::vector<double>{0.1, 0.2}, k2, 100, 1),
                  Error);
}

TEST_CASE("affine objective: bias below 3 SE at every h") {
  const Kernel k = build_legendre_kernel(2.0);
  const Objective lin = make_linear(Eigen::Vector2d(1.0, -0.5), 0.0, ball(2));
  const std::vector<double> hs = {0.4, 0.2, 0.1};
  const BiasProbe b = probe_bias(lin, Eigen::Vector2d(0.1, 0.1), hs, k, 100000, 8);
  for (const BiasPoint& pt : b.points) {
    for (Eigen::Index i = 0; i < 2; ++i) CHECK(std::abs(pt.mean[i] - lin.grad(Eigen::Vector2d::Zero())[i]) <= 3 * pt.mean_se[i]);
  }
}

TEST_CASE("plain estimator is unbiased for the surrogate on a quadratic") {
  const Objective q = make_quadratic(Eigen::VectorXd::Ones(3), Eigen::VectorXd::Zero(3), ball(3), 1);
  const Eigen::Vector3d x(0.3, -0.2, 0.1);
  const GradientMoments m = mc_gradient_moments(EstimatorKind::PlainBeta2, q, x, 0.2, nullptr,
                                                NoiseModel::zero(), 100000, 6);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(std::abs(m.mean[i] - x[i]) <= 3.0 * m.mean_se[i]);
}

TEST_CASE("second moment: constant f with gaussian noise") {
  // E||g||^2 = (d^2 / 4h^2) E(xi - xi')^2 kappa = (4 / 0.04) * 2 * 3 = 600
  const Kernel k = build_legendre_kernel(2.0);
  const Objective c = make_constant(2, 0.0, ball(2));
  const SecondMomentProbe p =
      probe_second_moment(c, Eigen::VectorXd::Zero(2), 0.1, NoiseModel::gaussian(1.0), k, 100000, 2);
  CHECK(std::abs(p.value - 600.0) <= 3.0 * p.se);
  CHECK(p.value < 1800.0);
  CHECK(p.bound == doctest::Approx(1800.0));
  const SecondMomentProbe z =
      probe_second_moment(c, Eigen::VectorXd::Zero(2), 0.1, NoiseModel::zero(), k, 10000, 2);
  CHECK(z.value == 0.0);
  CHECK_THROWS_AS(probe_second_moment(c, Eigen::VectorXd::Zero(2), 0.1, NoiseModel::zero(), k, 10, 2),
                  Error);
}

TEST_CASE("surrogate values") {
  const Objective q = make_quadratic(Eigen::VectorXd::Ones(2), Eigen::VectorXd::Zero(2), ball(2), 1);
  const double h = 0.3;
  const SurrogateValue s = surrogate_value(q, Eigen::VectorXd::Zero(2), h, 100000, 4);
  CHECK(std::abs(s.mean - h * h / 4) <= 3.0 * s.se);
  CHECK(std::abs(s.mean - q.f(Eigen::VectorXd::Zero(2))) <= 0.5 * h * h);

  const Objective lin = make_linear(Eigen::Vector2d(2, -1), 1.0, ball(2));
  const Eigen::Vector2d x(0.2, 0.1);
  const SurrogateValue sl = surrogate_value(lin, x, h, 100000, 4);
  CHECK(std::abs(sl.mean - lin.f(x)) <= 3.0 * sl.se);
}

TEST_CASE("parallel kernels agree bit for bit with the serial reference") {
  const Kernel k = build_legendre_kernel(4.0);
  const Objective q = make_quadratic(Eigen::Vector3d(1, 2, 3), Eigen::VectorXd::Zero(3), ball(3), 2);
  const Eigen::Vector3d x(0.1, 0.0, -0.3);
  const NoiseModel noise = NoiseModel::gaussian(0.5);
  for (std::size_t n : {std::size_t{1}, std::size_t{255}, std::size_t{10007}}) {
    CAPTURE(n);
    const GradientMoments a = mc_gradient_moments(EstimatorKind::Kernel, q, x, 0.2, &k, noise, n, 9);
    const GradientMoments b = serial::mc_gradient_moments(EstimatorKind::Kernel, q, x, 0.2, &k, noise, n, 9);
    CHECK(a.mean == b.mean);
    CHECK(a.second_moment == b.second_moment);
    CHECK(a.second_moment_se == b.second_moment_se);
    const GradientMoments c =
        mc_gradient_moments(EstimatorKind::Kernel, q, x, 0.2, &k, noise, n, 9, Exec::Serial);
    CHECK(a.mean == c.mean);
    const SurrogateValue s1 = surrogate_value(q, x, 0.2, n, 3);
    const SurrogateValue s2 = serial::surrogate_value(q, x, 0.2, n, 3);
    CHECK(s1.mean == s2.mean);
    CHECK(s1.se == s2.se);
  }
}

TEST_CASE("argument errors") {
  const Kernel k = build_legendre_kernel(2.0);
  const Objective q = make_quadratic(Eigen::VectorXd::Ones(2), Eigen::VectorXd::Zero(2), ball(2), 1);
  CHECK_THROWS_AS(zo_gradient_kernel(q, Eigen::Vector2d::Zero(), 0.0, k, NoiseModel::zero(), {}), Error);
  CHECK_THROWS_AS(zo_gradient_kernel(q, Eigen::Vector3d::Zero(), 0.1, k, NoiseModel::zero(), {}), Error);
  CHECK(parse_estimator_kind("plain_beta2") == EstimatorKind::PlainBeta2);
  CHECK(to_string(EstimatorKind::Kernel) == "kernel");
  CHECK_THROWS_AS(parse_estimator_kind("gaussian_smoothing"), Error);
}
