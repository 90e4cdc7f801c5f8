#include <doctest.h>

#include <cmath>

#include "dzo/error.hpp"
#include "dzo/hard_instances.hpp"

using namespace dzo;

TEST_CASE("instance parameters match direct formula evaluation") {
  struct Case {
    double beta, alpha, T, h, a, A, c;
  };
  const Case cases[] = {
      {2, 1, 16, 0.5, 0.16031872877023298, 0.25, 3.2659863237109037},
      {2, 0.5, 256, 0.25, 0.22672492052927717, 0.25, 2.309401076758503},
      {3, 0.5, 16, 0.6299605249474366, 0.3599033773555811, 0.6299605249474366, 1.4548315146289619},
  };
  for (const Case& k : cases) {
    CAPTURE(k.beta);
    CAPTURE(k.alpha);
    CAPTURE(k.T);
    const HardInstance inst = hard_instance(1, k.beta, k.alpha, k.T, omega_all(1, -1));
    CHECK(inst.h == doctest::Approx(k.h).epsilon(1e-14));
    CHECK(inst.a == doctest::Approx(k.a).epsilon(1e-14));
    CHECK(inst.amplitude == doctest::Approx(k.A).epsilon(1e-14));
    CHECK(inst.frequency == doctest::Approx(k.c).epsilon(1e-14));
    CHECK(inst.frequency * inst.a == doctest::Approx(M_PI / 6).epsilon(1e-14));
  }
}

TEST_CASE("phi values across the three pieces") {
  const HardInstance a = hard_instance(1, 2, 1, 16, omega_all(1, 1));
  CHECK(a.phi(-1, 0.1) == doctest::Approx(-0.08020583058067972).epsilon(1e-13));
  CHECK(a.phi(1, -0.2) == doctest::Approx(-0.15033214970087222).epsilon(1e-13));
  const HardInstance b = hard_instance(1, 3, 0.5, 16, omega_all(1, 1));
  CHECK(b.phi(1, 0.5) == doctest::Approx(0.41889458244807076).epsilon(1e-13));
}

TEST_CASE("seams are continuous and differentiable") {
  for (double beta : {2.0, 3.0}) {
    const HardInstance inst = hard_instance(2, beta, 1, 16, omega_alternating(2));
    CHECK(std::abs(inst.piece(2, 1, inst.a) - inst.piece(3, 1, inst.a)) < 1e-12);
    CHECK(check_seams(inst).worst() < 1e-8);
  }
}

TEST_CASE("optimum: all plus is zero, all minus disagrees with the closed form") {
  const HardInstance plus = hard_instance(3, 2, 1, 16, omega_all(3, 1));
  const HardOptimum op = hard_instance_optimum(plus);
  CHECK(op.f == 0.0);
  CHECK(op.x == Eigen::VectorXd::Zero(3));
  CHECK(op.f_global == doctest::Approx(3 * -0.2159161044586786).epsilon(1e-9));
  CHECK(op.x_global[0] == doctest::Approx(-0.39039343105233837).epsilon(1e-6));
  CHECK(op.global_leaves_theta);

  const HardInstance minus = hard_instance(1, 2, 1, 16, omega_all(1, -1));
  const HardOptimum om = hard_instance_optimum(minus);
  CHECK(om.f <= -0.125 + 1e-12);
  CHECK(om.f == doctest::Approx(-0.125).epsilon(1e-10));
  CHECK(om.f_closed_form == doctest::Approx(-0.5));
  CHECK(om.closed_form_disagrees);
  CHECK(om.f == doctest::Approx(om.f_closed_form_corrected).epsilon(1e-8));
}

TEST_CASE("gradient formula against finite differences and its scale") {
  const HardInstance inst = hard_instance(1, 2, 1, 16, omega_all(1, 1));
  CHECK(std::abs(inst.formula_gradient(Eigen::VectorXd::Zero(1))[0]) ==
        doctest::Approx(0.8164965809277259).epsilon(1e-14));
  CHECK(std::abs(inst.formula_gradient(Eigen::VectorXd::Zero(1))[0]) ==
        doctest::Approx(2 * std::sqrt(6.0) / 3 * inst.h).epsilon(1e-14));
  const GradientProfile p = hard_instance_gradient_profile(inst, 100);
  CHECK(p.max_fd_error < 1e-6);
  CHECK(p.max_exact_fd_error < 1e-6);

  // max gradient scales like h^{beta-1} between horizons
  const HardInstance late = hard_instance(1, 2, 1, 256, omega_all(1, 1));
  const double ratio = hard_instance_gradient_profile(late).max_norm / p.max_norm;
  CHECK(ratio == doctest::Approx(late.h / inst.h).epsilon(1e-9));
}

TEST_CASE("objective view and argument checks") {
  const Objective obj = make_hard_instance(2, 2, 1, 16, omega_alternating(2));
  CHECK(obj.d == 2);
  CHECK(obj.theta.kind == ProjectionSet::Kind::Box);
  CHECK(obj.optimum.has_value());
  CHECK(omega_alternating(3) == Eigen::Vector3i(1, -1, 1));
  CHECK_THROWS_AS(hard_instance(2, 2, 1, 16, omega_all(1, 1)), Error);
  CHECK_THROWS_AS(hard_instance(1, 1.5, 1, 16, omega_all(1, 1)), Error);
  Eigen::VectorXi bad(1);
  bad << 0;
  CHECK_THROWS_AS(hard_instance(1, 2, 1, 16, bad), Error);
}
