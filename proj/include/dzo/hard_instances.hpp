#pragma once

#include <vector>

#include <Eigen/Core>

#include "dzo/objectives.hpp"

namespace dzo {

/// Separable lower-bound family f_omega(x) = sum_i phi_{omega_i}(x_i) with
///   phi(x) = x^{2 beta} + A sin(c x)        x < 0
///          = A sin(c x)                     0 <= x <= a
///          = (x - a)^{2 beta} + A sin(c x)  x > a
/// where A = tau h^{2(beta-1)} / alpha_tilde, c = (2 sqrt 6 / 3) alpha_bar h^{1-beta},
/// h = T^{-1/(2 beta)} and a = (pi sqrt 6 / 24) h^{beta-1} / alpha_bar, so c a = pi/6.
struct HardInstance {
  Eigen::Index d = 1;
  double beta = 2.0;
  double alpha = 1.0;
  double T = 1.0;
  Eigen::VectorXi omega;

  double alpha_tilde = 1.0;  // min(alpha, alpha^2)
  double alpha_bar = 1.0;    // min(alpha, alpha^{3/2})
  double h = 1.0;
  double a = 0.0;
  double amplitude = 0.0;    // h^{2(beta-1)} / alpha_tilde, without the sign
  double frequency = 0.0;    // c

  /// phi for one coordinate with sign tau.
  double phi(int tau, double x) const;
  double dphi(int tau, double x) const;

  /// The individual pieces, for seam checks (piece = 1, 2, 3).
  double piece(int which, int tau, double x) const;
  double dpiece(int which, int tau, double x) const;

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;

  /// The closed-form gradient valid on Theta:
  /// omega_i (2 sqrt 6/3)(alpha_bar/alpha_tilde) h^{beta-1} cos(c x_i).
  Eigen::VectorXd formula_gradient(const Eigen::VectorXd& x) const;

  ProjectionSet theta() const;
};

HardInstance hard_instance(Eigen::Index d, double beta, double alpha, double T,
                           const Eigen::VectorXi& omega);

struct HardOptimum {
  Eigen::VectorXd x;          // minimizer over Theta = [0, a]^d (attached to the Objective)
  double f = 0.0;
  Eigen::VectorXd x_global;   // minimizer over the bracket [-1, 4a]^d
  double f_global = 0.0;
  Eigen::VectorXd x_closed_form;    // (1 - omega_i)/2 * a
  double f_closed_form = 0.0;       // -sum (1 - omega_i)/(4 alpha_tilde) h^{2(beta-2)}
  double f_closed_form_corrected = 0.0;  // same formula with exponent 2(beta-1)
  bool closed_form_disagrees = false;
  bool global_leaves_theta = false;
};

/// Per-coordinate 1-D minimization: dense grid (1e4 points) + golden-section
/// refinement to 1e-10, over Theta and over the bracket [-1, 4a].
HardOptimum hard_instance_optimum(const HardInstance& inst);

/// Objective view of the instance with the Theta optimum attached; PL
/// constant is left to the caller (alpha is recorded as the nominal one).
Objective make_hard_instance(Eigen::Index d, double beta, double alpha, double T,
                             const Eigen::VectorXi& omega);
Objective make_hard_objective(const HardInstance& inst);

struct SeamReport {
  double value_jump_0 = 0.0;
  double slope_jump_0 = 0.0;
  double value_jump_a = 0.0;
  double slope_jump_a = 0.0;
  double fd_slope_jump_0 = 0.0;  // one-sided finite differences of phi itself
  double fd_slope_jump_a = 0.0;

  double worst() const;
};

SeamReport check_seams(const HardInstance& inst);

struct GradientProfile {
  double max_norm = 0.0;            // max ||formula gradient|| over the grid on Theta
  double max_fd_error = 0.0;        // formula vs central differences on Theta
  double max_exact_fd_error = 0.0;  // piecewise exact gradient vs central differences on [-1, 4a]
};

/// Evaluates the closed-form gradient at `grid` points of Theta (the diagonal
/// and shifted copies of it) and cross-checks it against central differences.
GradientProfile hard_instance_gradient_profile(const HardInstance& inst, int grid = 100);

/// omega helpers.
Eigen::VectorXi omega_all(Eigen::Index d, int sign);
Eigen::VectorXi omega_alternating(Eigen::Index d);

}  // namespace dzo
