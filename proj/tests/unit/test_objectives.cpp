#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "dzo/error.hpp"
#include "dzo/objectives.hpp"

using namespace dzo;

namespace {

ProjectionSet unit_ball(Eigen::Index d, double radius = 1.0) {
  return ProjectionSet::ball(Eigen::VectorXd::Zero(d), radius);
}

double fd_error(const Objective& obj, const Eigen::VectorXd& x) {
  const double eps = 1e-6;
  double worst = 0.0;
  const Eigen::VectorXd g = obj.grad(x);
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Eigen::VectorXd p = x, m = x;
    p[k] += eps;
    m[k] -= eps;
    worst = std::max(worst, std::abs((obj.f(p) - obj.f(m)) / (2 * eps) - g[k]));
  }
  return worst;
}

}  // namespace

TEST_CASE("projection onto balls and boxes") {
  const ProjectionSet ball = unit_ball(2);
  const Eigen::Vector2d p = project(ball, Eigen::Vector2d(3, 4));
  CHECK(p[0] == doctest::Approx(0.6));
  CHECK(p[1] == doctest::Approx(0.8));
  const Eigen::Vector2d inside(0.1, -0.2);
  CHECK(project(ball, inside) == inside);

  const ProjectionSet box = ProjectionSet::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1));
  CHECK(project(box, Eigen::Vector2d(-1, 0.5)) == Eigen::Vector2d(0, 0.5));
  CHECK(box.diameter() == doctest::Approx(std::sqrt(2.0)));
  CHECK(ball.diameter() == 2.0);
  CHECK_THROWS_AS(project(ball, Eigen::Vector3d(1, 1, 1)), Error);
}

TEST_CASE("isotropic quadratic is exactly PL") {
  const Eigen::VectorXd spectrum = Eigen::VectorXd::Constant(2, 1.5);
  const Objective q = make_quadratic(spectrum, Eigen::VectorXd::Zero(2), unit_ball(2), 3);
  const Eigen::Vector2d x(0.3, -0.4);
  CHECK(q.f(x) == doctest::Approx(0.75 * x.squaredNorm()));
  CHECK((q.grad(x) - 1.5 * x).norm() < 1e-12);
  CHECK(q.f_star() == 0.0);
  CHECK(q.grad(x).squaredNorm() == doctest::Approx(2 * 1.5 * q.f(x)).epsilon(1e-12));
  CHECK(verify_pl(q, 1.5, 2000, 4) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("quadratic spectrum is recovered") {
  Eigen::Vector3d spectrum(1, 2, 4);
  const Objective q = make_quadratic(spectrum, Eigen::VectorXd::Zero(3), unit_ball(3), 11);
  Eigen::Matrix3d H;
  const Eigen::Vector3d zero = Eigen::Vector3d::Zero();
  for (int k = 0; k < 3; ++k) H.col(k) = q.grad(Eigen::Vector3d::Unit(k)) - q.grad(zero);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(H);
  CHECK(es.eigenvalues()[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(es.eigenvalues()[2] == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(q.Lbar == doctest::Approx(4.0));
  CHECK(*q.alpha == doctest::Approx(1.0));
}

TEST_CASE("PL verification detects an overestimated constant") {
  const Objective q = make_quadratic(Eigen::Vector2d(1, 4), Eigen::VectorXd::Zero(2), unit_ball(2), 5);
  CHECK(verify_pl(q, 1.0, 5000, 6) <= 1.0 + 1e-6);
  CHECK(verify_pl(q, 2.0, 5000, 6) > 1.0 + 1e-6);
}

TEST_CASE("least squares: identity, rank deficient, residual") {
  const Objective id = make_least_squares(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2),
                                          unit_ball(2), 1);
  CHECK(id.f(Eigen::Vector2d(0.3, 0.4)) == doctest::Approx(0.25));
  CHECK(id.optimum->x.norm() < 1e-12);
  CHECK(*id.alpha == doctest::Approx(2.0).epsilon(1e-6));

  Eigen::Matrix2d A1;
  A1 << 1, 0, 0, 0;
  const Objective rd = make_least_squares(A1, Eigen::VectorXd::Zero(2), unit_ball(2), 1);
  CHECK(rd.f(Eigen::Vector2d(0.5, 0.7)) == doctest::Approx(0.25));
  CHECK(estimate_pl_constant(rd, 2000, 2) == doctest::Approx(2.0).epsilon(1e-6));

  Eigen::Matrix<double, 4, 3> A;
  A << 1, 2, 0, 0, 1, 1, 1, 3, 1, 2, 0, -2;
  Eigen::Vector4d y(1, -1, 0.5, 2);
  const Objective ls = make_least_squares(A, y, unit_ball(3, 3.0), 1);
  CHECK(ls.f_star() == doctest::Approx(0.08333333333333333).epsilon(1e-10));
  CHECK(ls.optimum->x[0] == doctest::Approx(-0.8333333333333333).epsilon(1e-9));
  CHECK(ls.optimum->x[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ls.optimum->x[2] == doctest::Approx(-1.8333333333333333).epsilon(1e-9));
  CHECK(fd_error(ls, Eigen::Vector3d(0.2, -0.1, 0.4)) < 1e-6);
}

TEST_CASE("generated least squares has the requested rank and residual") {
  LeastSquaresSpec spec;
  const auto [A, y] = generate_least_squares(spec, 21);
  CHECK(A.rows() == 8);
  CHECK(A.cols() == 5);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  CHECK(svd.singularValues()[2] >= 1.0 - 1e-9);
  CHECK(svd.singularValues()[3] < 1e-9);
  const Objective ls = make_least_squares(A, y, unit_ball(5), 21);
  CHECK(ls.f_star() == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("logistic values, convexity and finite differences") {
  Eigen::MatrixXd A1(1, 1);
  A1 << 1;
  const Objective l1 = make_logistic(A1, unit_ball(1), 1);
  CHECK(l1.f(Eigen::VectorXd::Zero(1)) == doctest::Approx(std::log(2.0)));
  CHECK(l1.grad(Eigen::VectorXd::Zero(1))[0] == doctest::Approx(0.5));

  Eigen::MatrixXd A2(3, 2);
  A2 << 1, 0.5, -0.3, 1, 0.8, -0.2;
  const Objective l2 = make_logistic(A2, unit_ball(2), 1);
  CHECK(l2.f_star() == doctest::Approx(1.2763717028672063).epsilon(1e-8));
  CHECK(l2.optimum->x[0] == doctest::Approx(-0.7232905273808341).epsilon(1e-5));
  CHECK(l2.optimum->x[1] == doctest::Approx(-0.6905438530615958).epsilon(1e-5));

  RandomStream s(8, {Purpose::Test, 0, 0});
  const double eps = 1e-4;
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd x = sample_in(l2.theta, s);
    CHECK(fd_error(l2, x) < 1e-6);
    // Second differences along a random direction are nonnegative.
    const Eigen::VectorXd u = sample_sphere(s, 2);
    CHECK(l2.f(x + eps * u) + l2.f(x - eps * u) - 2 * l2.f(x) >= -1e-12);
  }
}

TEST_CASE("Holder probe") {
  const Objective p = make_holder_probe(2.0, 1, unit_ball(1));
  Eigen::VectorXd x(1);
  x << -0.5;
  CHECK(p.f(x) == doctest::Approx(-0.25));
  CHECK(p.grad(Eigen::VectorXd::Zero(1))[0] == 0.0);
  CHECK(p.grad(x)[0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(make_holder_probe(2.5, 1, unit_ball(1)), Error);
}

TEST_CASE("gradient bounds") {
  const Objective q = make_quadratic(Eigen::VectorXd::Ones(3), Eigen::VectorXd::Zero(3), unit_ball(3, 2.0), 1);
  CHECK(estimate_grad_bound(q, 2000, 3) == doctest::Approx(2.2).epsilon(1e-6));
  const Objective c = make_constant(3, 1.5, unit_ball(3));
  CHECK(estimate_grad_bound(c, 100, 3) == 0.0);
  const Objective lin = make_linear(Eigen::Vector3d(1, -2, 2), 0.5, unit_ball(3));
  CHECK(estimate_grad_bound(lin, 100, 3) == doctest::Approx(3.3));
  CHECK(lin.f_star() == doctest::Approx(0.5 - 3.0));
}
