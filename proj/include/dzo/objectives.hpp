#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "dzo/rand_geometry.hpp"

namespace dzo {

/// Compact convex feasible set with a closed-form Euclidean projection.
struct ProjectionSet {
  enum class Kind { Ball, Box };

  Kind kind = Kind::Ball;
  Eigen::VectorXd center;  // ball
  double radius = 1.0;     // ball
  Eigen::VectorXd lo, hi;  // box

  static ProjectionSet ball(Eigen::VectorXd center, double radius);
  static ProjectionSet box(Eigen::VectorXd lo, Eigen::VectorXd hi);

  Eigen::Index dim() const noexcept { return kind == Kind::Ball ? center.size() : lo.size(); }
  double diameter() const;
  bool contains(const Eigen::VectorXd& x, double tol = 1e-12) const;
};

Eigen::VectorXd project(const ProjectionSet& theta, const Eigen::VectorXd& x);
void project_in_place(const ProjectionSet& theta, Eigen::Ref<Eigen::VectorXd> x);

/// Uniform sample from theta (ball or box).
Eigen::VectorXd sample_in(const ProjectionSet& theta, RandomStream& stream);

enum class ObjectiveClass { StronglyConvex, GradientDominant, SmoothOnly };

struct Optimum {
  Eigen::VectorXd x;
  double f = 0.0;
};

/// Function/gradient bundle with the smoothness metadata the theory uses.
struct Objective {
  using Value = std::function<double(const Eigen::VectorXd&)>;
  using Gradient = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  std::string name;
  Eigen::Index d = 0;
  Value f;
  Gradient grad;
  std::optional<Optimum> optimum;
  std::optional<double> alpha;  // strong-convexity or PL constant
  double beta = 2.0;            // Hölder smoothness order
  double L = 0.0;               // Hölder constant
  double Lbar = 0.0;            // gradient Lipschitz constant
  std::optional<double> G;      // gradient bound on theta
  ObjectiveClass cls = ObjectiveClass::SmoothOnly;
  ProjectionSet theta;

  double f_star() const;
};

/// f(x) = 1/2 (x - x*)^T H (x - x*), H = Q diag(spectrum) Q^T with a random
/// orthogonal Q drawn from the Objective stream of `seed`.
Objective make_quadratic(const Eigen::VectorXd& spectrum, const Eigen::VectorXd& xstar,
                         const ProjectionSet& theta, std::uint64_t seed);

/// Spectrum evenly spaced on [alpha, Lbar] (both endpoints present for d >= 2).
Objective make_quadratic(Eigen::Index d, double alpha, double Lbar, const Eigen::VectorXd& xstar,
                         const ProjectionSet& theta, std::uint64_t seed);

/// f(x) = ||A x - y||^2. Minimizer: the point of the solution set closest to
/// the centre of theta. alpha is the numerically estimated PL constant.
Objective make_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                             const ProjectionSet& theta, std::uint64_t seed);

struct LeastSquaresSpec {
  Eigen::Index m = 8;
  Eigen::Index d = 5;
  Eigen::Index rank = 3;
  double sv_min = 1.0;
  double sv_max = 2.0;
  double residual = 0.5;    // norm of the part of y outside range(A)
  double xstar_norm = 0.5;  // norm of the min-norm solution
};

/// Random rank-deficient instance: A = U diag(s) V^T, y = A x0 + e, e in range(A)^perp.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> generate_least_squares(const LeastSquaresSpec& spec,
                                                                   std::uint64_t seed);

/// f(x) = sum_i log(1 + exp(a_i^T x)); f* by projected gradient over theta.
Objective make_logistic(const Eigen::MatrixXd& A, const ProjectionSet& theta, std::uint64_t seed);

/// f(x) = sum_i sign(x_i) |x_i|^beta: odd, in the Hölder class of order beta
/// with L = 1, and the kernel estimator's bias at the origin is of exact
/// order h^{beta-1}.
Objective make_holder_probe(double beta, Eigen::Index d, const ProjectionSet& theta);

Objective make_constant(Eigen::Index d, double value, const ProjectionSet& theta);

/// f(x) = <c, x> + b, with its minimum over theta attached.
Objective make_linear(const Eigen::VectorXd& c, double b, const ProjectionSet& theta);

/// Max over sampled x in theta of 2 alpha (f(x) - f*) / max(||grad f(x)||^2, tiny).
/// A value <= 1 + 1e-6 certifies the PL inequality at level alpha on the sample.
double verify_pl(const Objective& obj, double alpha, int n_samples, std::uint64_t seed);

/// Min over sampled x in theta of ||grad f||^2 / (2 (f - f*)).
double estimate_pl_constant(const Objective& obj, int n_samples, std::uint64_t seed);

/// 1.1 * max sampled ||grad f|| over theta, boundary points included.
double estimate_grad_bound(const Objective& obj, int n_samples, std::uint64_t seed);

}  // namespace dzo
