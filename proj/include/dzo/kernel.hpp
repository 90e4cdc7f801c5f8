#pragma once

#include <span>
#include <vector>

namespace dzo {

/// Polynomial smoothing kernel K on [-1, 1].
///
/// Moments are expectations under r ~ U[-1, 1]:
///   E[K(r)] = 0,  E[r K(r)] = 1,  E[r^j K(r)] = 0 for j = 2..ell,
/// where ell is the largest integer strictly below beta. With this
/// normalization the two-point estimator is exactly unbiased on affine
/// functions.
struct Kernel {
  double beta = 2.0;
  int ell = 1;
  std::vector<double> coeffs;  // monomial basis, coeffs[k] multiplies r^k
  double kappa = 0.0;          // E[K(r)^2]
  double kappa_beta = 0.0;     // E[|r|^beta |K(r)|]

  int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }

  /// Unchecked Horner evaluation; callers guarantee |r| <= 1.
  double operator()(double r) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * r + *it;
    return acc;
  }
};

/// Largest integer strictly below beta.
int kernel_order(double beta);

/// Builds the Legendre kernel for beta >= 2 by solving the (ell+1)x(ell+1)
/// moment system in the span of P_0..P_ell.
Kernel build_legendre_kernel(double beta);

/// Checked evaluation; throws Domain for |r| > 1.
double eval_kernel(const Kernel& k, double r);

/// E[r^j K(r)] for j = 0..j_max by 64-node Gauss-Legendre quadrature.
std::vector<double> kernel_moments(const Kernel& k, int j_max);

struct KernelConstants {
  double kappa;
  double kappa_beta;
};

KernelConstants kernel_constants(const Kernel& k);

/// Monomial coefficients of the Legendre polynomial P_n.
std::vector<double> legendre_coefficients(int n);

/// Fixed 64-node Gauss-Legendre rule on [-1, 1] (weights sum to 2).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre_64();

}  // namespace dzo
