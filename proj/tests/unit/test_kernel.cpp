#include <doctest.h>

#include <cmath>

#include "dzo/error.hpp"
#include "dzo/kernel.hpp"

using namespace dzo;

namespace {

// Exact rational kernels and constants from the symbolic oracle.
struct Frozen {
  double beta;
  std::vector<double> coeffs;
  double kappa;
  double kappa_beta;
};

const Frozen kFrozen[] = {
    {2, {0, 3}, 3.0, 0.75},
    {3, {0, 3}, 3.0, 0.6},
    {4, {0, 75.0 / 4, 0, -105.0 / 4}, 75.0 / 4, 0.72567419825072886},
    {5, {0, 75.0 / 4, 0, -105.0 / 4}, 75.0 / 4, 0.60476288296912596},
    {6, {0, 3675.0 / 64, 0, -6615.0 / 32, 0, 10395.0 / 64}, 3675.0 / 64, 0.74138748138075886},
};

}  // namespace

TEST_CASE("order is the largest integer strictly below beta") {
  CHECK(kernel_order(2.0) == 1);
  CHECK(kernel_order(2.5) == 2);
  CHECK(kernel_order(3.0) == 2);
  CHECK(kernel_order(6.0) == 5);
}

TEST_CASE("Legendre kernels match the symbolic construction") {
  for (const Frozen& f : kFrozen) {
    CAPTURE(f.beta);
    const Kernel k = build_legendre_kernel(f.beta);
    REQUIRE(k.coeffs.size() == f.coeffs.size());
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
      CHECK(k.coeffs[i] == doctest::Approx(f.coeffs[i]).epsilon(1e-12));
    }
    CHECK(k.kappa == doctest::Approx(f.kappa).epsilon(1e-12));
    CHECK(k.kappa_beta == doctest::Approx(f.kappa_beta).epsilon(1e-12));
    CHECK(k.kappa_beta <= 2.0 * std::sqrt(2.0) * f.beta);
  }
}

TEST_CASE("moment conditions hold to 1e-12") {
  for (double beta : {2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 7.5}) {
    CAPTURE(beta);
    const Kernel k = build_legendre_kernel(beta);
    const auto m = kernel_moments(k, k.ell);
    CHECK(std::abs(m[0]) < 1e-12);
    CHECK(std::abs(m[1] - 1.0) < 1e-12);
    for (int j = 2; j <= k.ell; ++j) CHECK(std::abs(m[static_cast<std::size_t>(j)]) < 1e-12);
  }
  const Kernel k4 = build_legendre_kernel(4.0);
  CHECK(std::abs(kernel_moments(k4, 3)[3]) < 1e-12);
}

TEST_CASE("eval_kernel values and domain") {
  const Kernel k2 = build_legendre_kernel(2.0);
  const Kernel k4 = build_legendre_kernel(4.0);
  CHECK(eval_kernel(k2, 0.0) == 0.0);
  CHECK(eval_kernel(k2, 1.0) == doctest::Approx(3.0));
  CHECK(eval_kernel(k4, 1.0) == doctest::Approx(-7.5));
  CHECK_THROWS_AS(eval_kernel(k2, 1.0001), Error);
  try {
    eval_kernel(k2, -2.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
}

TEST_CASE("beta below 2 is unsupported") {
  try {
    build_legendre_kernel(1.5);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedSmoothness);
  }
}

TEST_CASE("kernel_constants agrees with the stored fields") {
  const Kernel k = build_legendre_kernel(4.0);
  const KernelConstants c = kernel_constants(k);
  CHECK(c.kappa == doctest::Approx(k.kappa));
  CHECK(c.kappa_beta == doctest::Approx(k.kappa_beta));
}

TEST_CASE("Legendre polynomials and the Gauss rule") {
  const auto p3 = legendre_coefficients(3);  // (5r^3 - 3r)/2
  REQUIRE(p3.size() == 4);
  CHECK(p3[0] == 0.0);
  CHECK(p3[1] == doctest::Approx(-1.5));
  CHECK(p3[2] == 0.0);
  CHECK(p3[3] == doctest::Approx(2.5));
  const GaussRule& g = gauss_legendre_64();
  REQUIRE(g.nodes.size() == 64);
  double wsum = 0, m126 = 0;
  for (std::size_t i = 0; i < 64; ++i) {
    wsum += g.weights[i];
    m126 += g.weights[i] * std::pow(g.nodes[i], 126);
  }
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(m126 == doctest::Approx(2.0 / 127).epsilon(1e-12));
}
