#include "dzo/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <boost/math/special_functions/legendre.hpp>

#include "dzo/error.hpp"

namespace dzo {

namespace {

constexpr int kGaussNodes = 64;

GaussRule make_gauss_rule() {
  // legendre_p_zeros returns the nonnegative zeros of P_n in ascending order.
  const auto positive = boost::math::legendre_p_zeros<double>(kGaussNodes);
  GaussRule rule;
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
    rule.nodes.push_back(-*it);
  }
  for (double x : positive) rule.nodes.push_back(x);
  for (double x : rule.nodes) {
    const double dp = boost::math::legendre_p_prime(kGaussNodes, x);
    rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return rule;
}

// E[g(r)] restricted to [lo, hi], i.e. (1/2) * integral over [lo, hi].
template <typename F>
double uniform_expectation(F&& g, double lo, double hi) {
  const GaussRule& rule = gauss_legendre_64();
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * g(mid + half * rule.nodes[i]);
  }
  return 0.5 * half * acc;
}

double pow_int(double r, int j) {
  double v = 1.0;
  for (int i = 0; i < j; ++i) v *= r;
  return v;
}

// Sign changes of K on (-1, 1), refined by bisection.
std::vector<double> kernel_sign_changes(const Kernel& k) {
  constexpr int kScan = 4096;
  std::vector<double> roots;
  double prev_r = -1.0;
  double prev_v = k(prev_r);
  for (int i = 1; i <= kScan; ++i) {
    const double r = -1.0 + 2.0 * i / kScan;
    const double v = k(r);
    if ((prev_v < 0.0 && v > 0.0) || (prev_v > 0.0 && v < 0.0)) {
      double lo = prev_r, hi = r, flo = prev_v;
      for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = k(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_r = r;
    prev_v = v;
  }
  return roots;
}

}  // namespace

const GaussRule& gauss_legendre_64() {
  static const GaussRule rule = make_gauss_rule();
  return rule;
}

int kernel_order(double beta) {
  // Largest integer strictly below beta: beta = 2 -> 1, beta = 2.5 -> 2.
  return static_cast<int>(std::ceil(beta)) - 1;
}

std::vector<double> legendre_coefficients(int n) {
  if (n < 0) throw Error(ErrorKind::Parameter, "Legendre degree must be >= 0");
  std::vector<double> prev{1.0};
  if (n == 0) return prev;
  std::vector<double> cur{0.0, 1.0};
  // (m+1) P_{m+1} = (2m+1) r P_m - m P_{m-1}
  for (int m = 1; m < n; ++m) {
    std::vector<double> next(static_cast<std::size_t>(m) + 2, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += (2.0 * m + 1.0) * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= m * prev[i];
    for (double& c : next) c /= (m + 1.0);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

Kernel build_legendre_kernel(double beta) {
  if (!(beta >= 2.0) || !std::isfinite(beta)) {
    throw Error(ErrorKind::UnsupportedSmoothness,
                "kernel requires beta >= 2, got " + std::to_string(beta));
  }
  Kernel k;
  k.beta = beta;
  k.ell = kernel_order(beta);
  const int m = k.ell + 1;

  std::vector<std::vector<double>> basis;
  for (int n = 0; n < m; ++n) basis.push_back(legendre_coefficients(n));

  Eigen::MatrixXd moments(m, m);
  for (int j = 0; j < m; ++j) {
    for (int n = 0; n < m; ++n) {
      const Kernel pn{beta, k.ell, basis[static_cast<std::size_t>(n)], 0.0, 0.0};
      moments(j, n) = uniform_expectation([&](double r) { return pow_int(r, j) * pn(r); },
                                          -1.0, 1.0);
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  rhs(1) = 1.0;

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(moments);
  if (!lu.isInvertible()) {
    throw Error(ErrorKind::ConstructionFailed, "singular Legendre moment system");
  }
  const Eigen::VectorXd weights = lu.solve(rhs);

  k.coeffs.assign(static_cast<std::size_t>(m), 0.0);
  for (int n = 0; n < m; ++n) {
    const auto& pn = basis[static_cast<std::size_t>(n)];
    for (std::size_t i = 0; i < pn.size(); ++i) k.coeffs[i] += weights(n) * pn[i];
  }
  // Parity of the moment system zeroes every even coefficient; clear the
  // round-off so K is exactly odd.
  for (std::size_t i = 0; i < k.coeffs.size(); i += 2) k.coeffs[i] = 0.0;
  while (k.coeffs.size() > 2 && k.coeffs.back() == 0.0) k.coeffs.pop_back();

  const auto c = kernel_constants(k);
  k.kappa = c.kappa;
  k.kappa_beta = c.kappa_beta;
  return k;
}

double eval_kernel(const Kernel& k, double r) {
  if (!(std::abs(r) <= 1.0)) {
    throw Error(ErrorKind::Domain, "kernel argument outside [-1, 1]: " + std::to_string(r));
  }
  return k(r);
}

std::vector<double> kernel_moments(const Kernel& k, int j_max) {
  if (j_max < 0) throw Error(ErrorKind::Parameter, "j_max must be >= 0");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(j_max) + 1);
  for (int j = 0; j <= j_max; ++j) {
    out.push_back(uniform_expectation([&](double r) { return pow_int(r, j) * k(r); }, -1.0, 1.0));
  }
  return out;
}

KernelConstants kernel_constants(const Kernel& k) {
  const double kappa = uniform_expectation([&](double r) { return k(r) * k(r); }, -1.0, 1.0);

  // |r|^beta |K(r)| has kinks at 0 and at the sign changes of K; integrate
  // each smooth piece separately.
  std::vector<double> cuts{-1.0, 0.0, 1.0};
  for (double root : kernel_sign_changes(k)) cuts.push_back(root);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-14; }),
             cuts.end());
  double kappa_beta = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    kappa_beta += uniform_expectation(
        [&](double r) { return std::pow(std::abs(r), k.beta) * std::abs(k(r)); }, cuts[i],
        cuts[i + 1]);
  }
  return {kappa, kappa_beta};
}

}  // namespace dzo
