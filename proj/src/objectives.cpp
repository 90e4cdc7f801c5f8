#include "dzo/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "dzo/error.hpp"

namespace dzo {

namespace {

void require_dim(const ProjectionSet& theta, Eigen::Index d) {
  if (theta.dim() != d) {
    throw Error(ErrorKind::Shape, "feasible set has dimension " + std::to_string(theta.dim()) +
                                      ", objective has " + std::to_string(d));
  }
}

Eigen::MatrixXd random_orthogonal(Eigen::Index d, RandomStream& stream) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) g(i, j) = normal(stream);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

// Orthonormal m x k matrix with Haar-random column span.
Eigen::MatrixXd random_orthonormal_columns(Eigen::Index m, Eigen::Index k, RandomStream& stream) {
  return random_orthogonal(m, stream).leftCols(k);
}

Eigen::VectorXd sample_boundary(const ProjectionSet& theta, RandomStream& stream) {
  if (theta.kind == ProjectionSet::Kind::Ball) {
    return theta.center + theta.radius * sample_sphere(stream, theta.dim());
  }
  Eigen::VectorXd v(theta.dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = (stream() & 1U) ? theta.hi[i] : theta.lo[i];
  return v;
}

double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double logistic_sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Points used by the sampling-based certificates: interior, boundary, and a
// shell around the attached minimizer.
template <typename Visit>
void for_each_sample(const Objective& obj, int n_samples, std::uint64_t seed, Visit&& visit) {
  RandomStream stream(seed, {Purpose::Sampling, 0, 0});
  for (int s = 0; s < n_samples; ++s) {
    Eigen::VectorXd x;
    switch (s % 4) {
      case 0:
      case 1: x = sample_in(obj.theta, stream); break;
      case 2: x = sample_boundary(obj.theta, stream); break;
      default:
        if (obj.optimum) {
          const double scale = std::pow(10.0, -3.0 * stream.unit()) * obj.theta.diameter();
          x = project(obj.theta, obj.optimum->x + scale * sample_ball(stream, obj.d));
        } else {
          x = sample_in(obj.theta, stream);
        }
    }
    visit(x);
  }
}

}  // namespace

ProjectionSet ProjectionSet::ball(Eigen::VectorXd center, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::Parameter, "ball radius must be positive");
  if (center.size() < 1) throw Error(ErrorKind::InvalidDimension, "ball needs dimension >= 1");
  ProjectionSet s;
  s.kind = Kind::Ball;
  s.center = std::move(center);
  s.radius = radius;
  return s;
}

ProjectionSet ProjectionSet::box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  if (lo.size() != hi.size()) throw Error(ErrorKind::Shape, "box bounds differ in dimension");
  if (lo.size() < 1) throw Error(ErrorKind::InvalidDimension, "box needs dimension >= 1");
  if (!(lo.array() <= hi.array()).all()) throw Error(ErrorKind::Parameter, "box needs lo <= hi");
  ProjectionSet s;
  s.kind = Kind::Box;
  s.lo = std::move(lo);
  s.hi = std::move(hi);
  return s;
}

double ProjectionSet::diameter() const {
  return kind == Kind::Ball ? 2.0 * radius : (hi - lo).norm();
}

bool ProjectionSet::contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != dim()) return false;
  if (kind == Kind::Ball) return (x - center).norm() <= radius + tol;
  return ((x.array() >= lo.array() - tol) && (x.array() <= hi.array() + tol)).all();
}

void project_in_place(const ProjectionSet& theta, Eigen::Ref<Eigen::VectorXd> x) {
  if (x.size() != theta.dim()) {
    throw Error(ErrorKind::Shape, "projection: point has dimension " + std::to_string(x.size()) +
                                      ", set has " + std::to_string(theta.dim()));
  }
  if (theta.kind == ProjectionSet::Kind::Ball) {
    const double dist = (x - theta.center).norm();
    if (dist > theta.radius) x = theta.center + (theta.radius / dist) * (x - theta.center);
  } else {
    x = x.cwiseMax(theta.lo).cwiseMin(theta.hi);
  }
}

Eigen::VectorXd project(const ProjectionSet& theta, const Eigen::VectorXd& x) {
  Eigen::VectorXd out = x;
  project_in_place(theta, out);
  return out;
}

Eigen::VectorXd sample_in(const ProjectionSet& theta, RandomStream& stream) {
  if (theta.kind == ProjectionSet::Kind::Ball) {
    return theta.center + theta.radius * sample_ball(stream, theta.dim());
  }
  Eigen::VectorXd v(theta.dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = theta.lo[i] + stream.unit() * (theta.hi[i] - theta.lo[i]);
  }
  return v;
}

double Objective::f_star() const {
  if (!optimum) throw Error(ErrorKind::UnavailableOptimum, "objective '" + name + "' has no optimum");
  return optimum->f;
}

Objective make_quadratic(const Eigen::VectorXd& spectrum, const Eigen::VectorXd& xstar,
                         const ProjectionSet& theta, std::uint64_t seed) {
  const Eigen::Index d = spectrum.size();
  if (d < 1) throw Error(ErrorKind::InvalidDimension, "quadratic needs d >= 1");
  if (xstar.size() != d) throw Error(ErrorKind::Shape, "x* dimension mismatch");
  if (!(spectrum.array() > 0.0).all()) {
    throw Error(ErrorKind::Spectrum, "quadratic spectrum must be positive");
  }
  require_dim(theta, d);
  if (!theta.contains(xstar)) throw Error(ErrorKind::Input, "quadratic minimizer outside theta");

  RandomStream stream(seed, {Purpose::Objective, 0, 0});
  const Eigen::MatrixXd q = random_orthogonal(d, stream);
  Eigen::MatrixXd H = q * spectrum.asDiagonal() * q.transpose();
  H = 0.5 * (H + H.transpose()).eval();

  const double lo = spectrum.minCoeff();
  const double hi = spectrum.maxCoeff();
  Objective obj;
  obj.name = "quadratic";
  obj.d = d;
  obj.f = [H, xstar](const Eigen::VectorXd& x) {
    const Eigen::VectorXd z = x - xstar;
    return 0.5 * z.dot(H * z);
  };
  obj.grad = [H, xstar](const Eigen::VectorXd& x) -> Eigen::VectorXd { return H * (x - xstar); };
  obj.optimum = Optimum{xstar, 0.0};
  obj.alpha = lo;
  obj.beta = 2.0;
  obj.L = 0.5 * hi;
  obj.Lbar = hi;
  obj.cls = ObjectiveClass::StronglyConvex;
  obj.theta = theta;
  return obj;
}

Objective make_quadratic(Eigen::Index d, double alpha, double Lbar, const Eigen::VectorXd& xstar,
                         const ProjectionSet& theta, std::uint64_t seed) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::Spectrum, "alpha must be positive");
  if (alpha > Lbar) throw Error(ErrorKind::Spectrum, "alpha exceeds Lbar");
  if (d < 1) throw Error(ErrorKind::InvalidDimension, "quadratic needs d >= 1");
  Eigen::VectorXd spectrum(d);
  if (d == 1) {
    spectrum[0] = alpha;
  } else {
    spectrum = Eigen::VectorXd::LinSpaced(d, alpha, Lbar);
  }
  return make_quadratic(spectrum, xstar, theta, seed);
}

Objective make_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                             const ProjectionSet& theta, std::uint64_t seed) {
  if (A.size() == 0 || A.cwiseAbs().maxCoeff() == 0.0) {
    throw Error(ErrorKind::Input, "least squares needs a nonzero A");
  }
  if (y.size() != A.rows()) throw Error(ErrorKind::Shape, "y has wrong length");
  const Eigen::Index d = A.cols();
  require_dim(theta, d);

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double tol = std::max(A.rows(), A.cols()) * s[0] * std::numeric_limits<double>::epsilon();
  Eigen::Index rank = 0;
  while (rank < s.size() && s[rank] > tol) ++rank;

  Eigen::VectorXd xplus = Eigen::VectorXd::Zero(d);
  for (Eigen::Index k = 0; k < rank; ++k) {
    xplus += (svd.matrixU().col(k).dot(y) / s[k]) * svd.matrixV().col(k);
  }
  const Eigen::MatrixXd null_basis = svd.matrixV().rightCols(d - rank);
  const Eigen::VectorXd anchor =
      theta.kind == ProjectionSet::Kind::Ball ? theta.center : Eigen::VectorXd(0.5 * (theta.lo + theta.hi));
  const Eigen::VectorXd xstar = xplus + null_basis * (null_basis.transpose() * (anchor - xplus));
  if (!theta.contains(xstar, 1e-10)) {
    throw Error(ErrorKind::Input, "least-squares solution set does not meet theta");
  }

  Objective obj;
  obj.name = "least_squares";
  obj.d = d;
  obj.f = [A, y](const Eigen::VectorXd& x) { return (A * x - y).squaredNorm(); };
  obj.grad = [A, y](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return 2.0 * A.transpose() * (A * x - y);
  };
  obj.optimum = Optimum{xstar, (A * xstar - y).squaredNorm()};
  obj.beta = 2.0;
  obj.L = s[0] * s[0];
  obj.Lbar = 2.0 * s[0] * s[0];
  obj.cls = ObjectiveClass::GradientDominant;
  obj.theta = theta;
  obj.alpha = estimate_pl_constant(obj, 20000, seed);
  return obj;
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> generate_least_squares(const LeastSquaresSpec& spec,
                                                                   std::uint64_t seed) {
  if (spec.rank < 1 || spec.rank > std::min(spec.m, spec.d)) {
    throw Error(ErrorKind::Parameter, "least-squares rank must be in [1, min(m, d)]");
  }
  if (!(spec.sv_min > 0.0) || spec.sv_min > spec.sv_max) {
    throw Error(ErrorKind::Parameter, "need 0 < sv_min <= sv_max");
  }
  RandomStream stream(seed, {Purpose::Objective, 1, 0});
  const Eigen::MatrixXd U = random_orthogonal(spec.m, stream);
  const Eigen::MatrixXd V = random_orthonormal_columns(spec.d, spec.rank, stream);
  const Eigen::VectorXd s =
      spec.rank == 1 ? Eigen::VectorXd::Constant(1, spec.sv_min)
                     : Eigen::VectorXd(Eigen::VectorXd::LinSpaced(spec.rank, spec.sv_min, spec.sv_max));
  const Eigen::MatrixXd A = U.leftCols(spec.rank) * s.asDiagonal() * V.transpose();

  // x0 in the row space, so it is the min-norm solution.
  Eigen::VectorXd x0 = V * sample_sphere(stream, spec.rank);
  x0 *= spec.xstar_norm;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(spec.m);
  if (spec.m > spec.rank) {
    e = U.rightCols(spec.m - spec.rank) * sample_sphere(stream, spec.m - spec.rank);
    e *= spec.residual;
  }
  return {A, A * x0 + e};
}

Objective make_logistic(const Eigen::MatrixXd& A, const ProjectionSet& theta, std::uint64_t seed) {
  if (A.size() == 0 || A.cwiseAbs().maxCoeff() == 0.0) {
    throw Error(ErrorKind::Input, "logistic needs a nonzero A");
  }
  const Eigen::Index d = A.cols();
  require_dim(theta, d);

  Objective obj;
  obj.name = "logistic";
  obj.d = d;
  obj.f = [A](const Eigen::VectorXd& x) {
    const Eigen::VectorXd z = A * x;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) acc += softplus(z[i]);
    return acc;
  };
  obj.grad = [A](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::VectorXd z = A * x;
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = logistic_sigmoid(z[i]);
    return A.transpose() * z;
  };
  const double op_norm = Eigen::JacobiSVD<Eigen::MatrixXd>(A).singularValues()[0];
  obj.beta = 2.0;
  obj.Lbar = 0.25 * op_norm * op_norm;
  obj.L = 0.5 * obj.Lbar;
  obj.cls = ObjectiveClass::GradientDominant;
  obj.theta = theta;

  // Projected gradient with exact gradients; step 1/Lbar.
  Eigen::VectorXd x =
      theta.kind == ProjectionSet::Kind::Ball ? theta.center : Eigen::VectorXd(0.5 * (theta.lo + theta.hi));
  const double step = 1.0 / obj.Lbar;
  for (int it = 0; it < 500000; ++it) {
    Eigen::VectorXd next = project(theta, x - step * obj.grad(x));
    const double moved = (next - x).norm();
    x = std::move(next);
    if (moved < 1e-10) break;
  }
  obj.optimum = Optimum{x, obj.f(x)};
  obj.alpha = estimate_pl_constant(obj, 20000, seed);
  return obj;
}

Objective make_holder_probe(double beta, Eigen::Index d, const ProjectionSet& theta) {
  if (!(beta >= 2.0) || beta != std::floor(beta)) {
    throw Error(ErrorKind::UnsupportedSmoothness, "Hölder probes are defined for integer beta >= 2");
  }
  if (d < 1) throw Error(ErrorKind::InvalidDimension, "probe needs d >= 1");
  require_dim(theta, d);

  Objective obj;
  obj.name = "holder_probe";
  obj.d = d;
  obj.f = [beta](const Eigen::VectorXd& x) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      acc += std::copysign(std::pow(std::abs(x[i]), beta), x[i]);
    }
    return acc;
  };
  obj.grad = [beta](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = beta * std::pow(std::abs(x[i]), beta - 1.0);
    return g;
  };
  double coord_max = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double m = theta.kind == ProjectionSet::Kind::Ball
                         ? std::abs(theta.center[i]) + theta.radius
                         : std::max(std::abs(theta.lo[i]), std::abs(theta.hi[i]));
    coord_max = std::max(coord_max, m);
  }
  obj.beta = beta;
  obj.L = 1.0;
  obj.Lbar = beta * (beta - 1.0) * std::pow(coord_max, beta - 2.0);
  obj.cls = ObjectiveClass::SmoothOnly;
  obj.theta = theta;
  return obj;
}

Objective make_constant(Eigen::Index d, double value, const ProjectionSet& theta) {
  require_dim(theta, d);
  Objective obj;
  obj.name = "constant";
  obj.d = d;
  obj.f = [value](const Eigen::VectorXd&) { return value; };
  obj.grad = [d](const Eigen::VectorXd&) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(d); };
  const Eigen::VectorXd anchor =
      theta.kind == ProjectionSet::Kind::Ball ? theta.center : Eigen::VectorXd(theta.lo);
  obj.optimum = Optimum{anchor, value};
  obj.beta = 2.0;
  obj.L = 0.0;
  obj.Lbar = 0.0;
  obj.cls = ObjectiveClass::SmoothOnly;
  obj.theta = theta;
  return obj;
}

Objective make_linear(const Eigen::VectorXd& c, double b, const ProjectionSet& theta) {
  const Eigen::Index d = c.size();
  require_dim(theta, d);
  Objective obj;
  obj.name = "linear";
  obj.d = d;
  obj.f = [c, b](const Eigen::VectorXd& x) { return c.dot(x) + b; };
  obj.grad = [c](const Eigen::VectorXd&) -> Eigen::VectorXd { return c; };
  Eigen::VectorXd xmin;
  if (theta.kind == ProjectionSet::Kind::Ball) {
    const double cn = c.norm();
    xmin = cn > 0.0 ? Eigen::VectorXd(theta.center - theta.radius * c / cn) : theta.center;
  } else {
    xmin.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) xmin[i] = c[i] >= 0.0 ? theta.lo[i] : theta.hi[i];
  }
  obj.optimum = Optimum{xmin, c.dot(xmin) + b};
  obj.beta = 2.0;
  obj.L = 0.0;
  obj.Lbar = 0.0;
  obj.cls = ObjectiveClass::SmoothOnly;
  obj.theta = theta;
  return obj;
}

double verify_pl(const Objective& obj, double alpha, int n_samples, std::uint64_t seed) {
  const double fstar = obj.f_star();
  constexpr double kTiny = 1e-300;
  double worst = 0.0;
  for_each_sample(obj, n_samples, seed, [&](const Eigen::VectorXd& x) {
    const double gap = obj.f(x) - fstar;
    const double ratio = 2.0 * alpha * gap / std::max(obj.grad(x).squaredNorm(), kTiny);
    worst = std::max(worst, ratio);
  });
  return worst;
}

double estimate_pl_constant(const Objective& obj, int n_samples, std::uint64_t seed) {
  const double fstar = obj.f_star();
  const double floor = 1e-12 * std::max(1.0, std::abs(fstar));
  double best = std::numeric_limits<double>::infinity();
  for_each_sample(obj, n_samples, seed, [&](const Eigen::VectorXd& x) {
    const double gap = obj.f(x) - fstar;
    if (gap > floor) best = std::min(best, obj.grad(x).squaredNorm() / (2.0 * gap));
  });
  if (!std::isfinite(best)) {
    throw Error(ErrorKind::Numerical, "PL constant estimate: no sample above the optimum");
  }
  return best;
}

double estimate_grad_bound(const Objective& obj, int n_samples, std::uint64_t seed) {
  RandomStream stream(seed, {Purpose::Sampling, 1, 0});
  double worst = 0.0;
  auto visit = [&](const Eigen::VectorXd& x) { worst = std::max(worst, obj.grad(x).norm()); };
  for (int s = 0; s < n_samples; ++s) {
    visit(s % 2 == 0 ? sample_in(obj.theta, stream) : sample_boundary(obj.theta, stream));
  }
  if (obj.theta.kind == ProjectionSet::Kind::Box && obj.d <= 12) {
    const Eigen::Index d = obj.d;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
      Eigen::VectorXd v(d);
      for (Eigen::Index i = 0; i < d; ++i) v[i] = (mask >> i) & 1U ? obj.theta.hi[i] : obj.theta.lo[i];
      visit(v);
    }
  }
  return 1.1 * worst;
}

}  // namespace dzo
