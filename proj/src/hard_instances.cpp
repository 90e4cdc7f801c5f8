#include "dzo/hard_instances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "dzo/error.hpp"

namespace dzo {

namespace {

constexpr double kSqrt6 = 2.449489742783178098197284;

struct Min1D {
  double x;
  double f;
};

// Dense grid plus golden-section refinement around the best grid point.
template <typename F>
Min1D minimize_1d(F&& f, double lo, double hi) {
  constexpr int kGrid = 10000;
  int best = 0;
  double fbest = f(lo);
  for (int k = 1; k <= kGrid; ++k) {
    const double x = lo + (hi - lo) * k / kGrid;
    const double v = f(x);
    if (v < fbest) {
      fbest = v;
      best = k;
    }
  }
  const double xbest = lo + (hi - lo) * best / kGrid;
  double a = lo + (hi - lo) * std::max(best - 1, 0) / kGrid;
  double b = lo + (hi - lo) * std::min(best + 1, kGrid) / kGrid;

  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-10) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double xr = 0.5 * (a + b);
  const double fr = f(xr);
  // A grid point (typically an endpoint of the bracket) is kept when the
  // refinement does not strictly improve on it.
  return fr < fbest ? Min1D{xr, fr} : Min1D{xbest, fbest};
}

double ipow(double x, int n) {
  double v = 1.0;
  for (int i = 0; i < n; ++i) v *= x;
  return v;
}

}  // namespace

HardInstance hard_instance(Eigen::Index d, double beta, double alpha, double T,
                           const Eigen::VectorXi& omega) {
  if (d < 1) throw Error(ErrorKind::InvalidDimension, "hard instance needs d >= 1");
  if (!(alpha > 0.0)) throw Error(ErrorKind::Input, "hard instance needs alpha > 0");
  if (!(beta >= 2.0)) throw Error(ErrorKind::UnsupportedSmoothness, "hard instance needs beta >= 2");
  if (!(T >= 1.0)) throw Error(ErrorKind::Input, "hard instance needs T >= 1");
  if (omega.size() != d) throw Error(ErrorKind::Input, "omega must have d entries");
  for (Eigen::Index i = 0; i < d; ++i) {
    if (omega[i] != 1 && omega[i] != -1) {
      throw Error(ErrorKind::Input, "omega entries must be +1 or -1");
    }
  }
  HardInstance inst;
  inst.d = d;
  inst.beta = beta;
  inst.alpha = alpha;
  inst.T = T;
  inst.omega = omega;
  inst.alpha_tilde = std::min(alpha, alpha * alpha);
  inst.alpha_bar = std::min(alpha, std::pow(alpha, 1.5));
  inst.h = std::pow(T, -1.0 / (2.0 * beta));
  inst.a = std::numbers::pi * kSqrt6 / 24.0 * std::pow(inst.h, beta - 1.0) / inst.alpha_bar;
  inst.amplitude = std::pow(inst.h, 2.0 * (beta - 1.0)) / inst.alpha_tilde;
  inst.frequency = 2.0 * kSqrt6 / 3.0 * inst.alpha_bar * std::pow(inst.h, 1.0 - beta);
  return inst;
}

double HardInstance::piece(int which, int tau, double x) const {
  const double wave = tau * amplitude * std::sin(frequency * x);
  const int p = static_cast<int>(std::lround(2.0 * beta));
  const bool integer_power = std::abs(2.0 * beta - p) == 0.0;
  auto power = [&](double z) { return integer_power ? ipow(z, p) : std::pow(std::abs(z), 2.0 * beta); };
  switch (which) {
    case 1: return power(x) + wave;
    case 2: return wave;
    default: return power(x - a) + wave;
  }
}

double HardInstance::dpiece(int which, int tau, double x) const {
  const double dwave = tau * amplitude * frequency * std::cos(frequency * x);
  const int p = static_cast<int>(std::lround(2.0 * beta));
  const bool integer_power = std::abs(2.0 * beta - p) == 0.0;
  auto dpower = [&](double z) {
    return integer_power ? p * ipow(z, p - 1)
                         : 2.0 * beta * std::copysign(std::pow(std::abs(z), 2.0 * beta - 1.0), z);
  };
  switch (which) {
    case 1: return dpower(x) + dwave;
    case 2: return dwave;
    default: return dpower(x - a) + dwave;
  }
}

double HardInstance::phi(int tau, double x) const {
  if (x < 0.0) return piece(1, tau, x);
  if (x <= a) return piece(2, tau, x);
  return piece(3, tau, x);
}

double HardInstance::dphi(int tau, double x) const {
  if (x < 0.0) return dpiece(1, tau, x);
  if (x <= a) return dpiece(2, tau, x);
  return dpiece(3, tau, x);
}

double HardInstance::value(const Eigen::VectorXd& x) const {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) acc += phi(omega[i], x[i]);
  return acc;
}

Eigen::VectorXd HardInstance::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g(d);
  for (Eigen::Index i = 0; i < d; ++i) g[i] = dphi(omega[i], x[i]);
  return g;
}

Eigen::VectorXd HardInstance::formula_gradient(const Eigen::VectorXd& x) const {
  const double scale = 2.0 * kSqrt6 / 3.0 * alpha_bar / alpha_tilde * std::pow(h, beta - 1.0);
  Eigen::VectorXd g(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    g[i] = omega[i] * scale * std::cos(2.0 * kSqrt6 / 3.0 * alpha_bar * x[i] * std::pow(h, 1.0 - beta));
  }
  return g;
}

ProjectionSet HardInstance::theta() const {
  return ProjectionSet::box(Eigen::VectorXd::Zero(d), Eigen::VectorXd::Constant(d, a));
}

HardOptimum hard_instance_optimum(const HardInstance& inst) {
  HardOptimum out;
  out.x.resize(inst.d);
  out.x_global.resize(inst.d);
  out.x_closed_form.resize(inst.d);

  Min1D on_theta[2], on_bracket[2];  // index 0: tau=-1, 1: tau=+1
  for (int k = 0; k < 2; ++k) {
    const int tau = k == 0 ? -1 : 1;
    auto f = [&](double x) { return inst.phi(tau, x); };
    on_theta[k] = minimize_1d(f, 0.0, inst.a);
    on_bracket[k] = minimize_1d(f, -1.0, 4.0 * inst.a);
  }
  int minus_count = 0;
  for (Eigen::Index i = 0; i < inst.d; ++i) {
    const int k = inst.omega[i] > 0 ? 1 : 0;
    out.x[i] = on_theta[k].x;
    out.f += on_theta[k].f;
    out.x_global[i] = on_bracket[k].x;
    out.f_global += on_bracket[k].f;
    out.x_closed_form[i] = 0.5 * (1 - inst.omega[i]) * inst.a;
    if (inst.omega[i] < 0) ++minus_count;
  }
  const double per_minus = 1.0 / (2.0 * inst.alpha_tilde);
  out.f_closed_form = -minus_count * per_minus * std::pow(inst.h, 2.0 * (inst.beta - 2.0));
  out.f_closed_form_corrected = -minus_count * per_minus * std::pow(inst.h, 2.0 * (inst.beta - 1.0));
  out.closed_form_disagrees = std::abs(out.f_closed_form - out.f) > 1e-8 * std::max(1.0, std::abs(out.f));
  out.global_leaves_theta = out.f_global < out.f - 1e-12;
  return out;
}

Objective make_hard_objective(const HardInstance& inst) {
  const HardOptimum opt = hard_instance_optimum(inst);
  Objective obj;
  obj.name = "hard";
  obj.d = inst.d;
  obj.f = [inst](const Eigen::VectorXd& x) { return inst.value(x); };
  obj.grad = [inst](const Eigen::VectorXd& x) { return inst.gradient(x); };
  obj.optimum = Optimum{opt.x, opt.f};
  obj.alpha = inst.alpha;
  obj.beta = inst.beta;
  // phi'' on Theta is bounded by amplitude * frequency^2.
  obj.Lbar = inst.amplitude * inst.frequency * inst.frequency;
  obj.L = obj.Lbar;
  obj.cls = ObjectiveClass::GradientDominant;
  obj.theta = inst.theta();
  return obj;
}

Objective make_hard_instance(Eigen::Index d, double beta, double alpha, double T,
                             const Eigen::VectorXi& omega) {
  return make_hard_objective(hard_instance(d, beta, alpha, T, omega));
}

double SeamReport::worst() const {
  return std::max({value_jump_0, slope_jump_0, value_jump_a, slope_jump_a, fd_slope_jump_0,
                   fd_slope_jump_a});
}

SeamReport check_seams(const HardInstance& inst) {
  SeamReport r;
  constexpr double kStep = 1e-5;
  for (int tau : {-1, 1}) {
    r.value_jump_0 = std::max(r.value_jump_0, std::abs(inst.piece(1, tau, 0.0) - inst.piece(2, tau, 0.0)));
    r.slope_jump_0 = std::max(r.slope_jump_0, std::abs(inst.dpiece(1, tau, 0.0) - inst.dpiece(2, tau, 0.0)));
    r.value_jump_a = std::max(r.value_jump_a, std::abs(inst.piece(2, tau, inst.a) - inst.piece(3, tau, inst.a)));
    r.slope_jump_a = std::max(r.slope_jump_a, std::abs(inst.dpiece(2, tau, inst.a) - inst.dpiece(3, tau, inst.a)));

    // Second-order one-sided differences of the assembled phi across each seam.
    auto one_sided = [&](double s, double dir) {
      const double f0 = inst.phi(tau, s);
      const double f1 = inst.phi(tau, s + dir * kStep);
      const double f2 = inst.phi(tau, s + dir * 2.0 * kStep);
      return dir * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * kStep);
    };
    r.fd_slope_jump_0 = std::max(r.fd_slope_jump_0, std::abs(one_sided(0.0, -1.0) - one_sided(0.0, 1.0)));
    r.fd_slope_jump_a = std::max(r.fd_slope_jump_a, std::abs(one_sided(inst.a, -1.0) - one_sided(inst.a, 1.0)));
  }
  return r;
}

GradientProfile hard_instance_gradient_profile(const HardInstance& inst, int grid) {
  GradientProfile p;
  constexpr double kStep = 1e-5;
  auto central = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd g(inst.d);
    for (Eigen::Index i = 0; i < inst.d; ++i) {
      Eigen::VectorXd xp = x, xm = x;
      xp[i] += kStep;
      xm[i] -= kStep;
      g[i] = (inst.value(xp) - inst.value(xm)) / (2.0 * kStep);
    }
    return g;
  };
  for (int k = 0; k < grid; ++k) {
    const double t = grid > 1 ? static_cast<double>(k) / (grid - 1) : 0.0;
    Eigen::VectorXd x(inst.d);
    for (Eigen::Index i = 0; i < inst.d; ++i) {
      double shifted = t + static_cast<double>(i) / static_cast<double>(inst.d);
      if (shifted > 1.0) shifted -= 1.0;
      x[i] = shifted * inst.a;
    }
    const Eigen::VectorXd formula = inst.formula_gradient(x);
    p.max_norm = std::max(p.max_norm, formula.norm());
    p.max_fd_error = std::max(p.max_fd_error, (formula - central(x)).cwiseAbs().maxCoeff());

    Eigen::VectorXd wide(inst.d);
    for (Eigen::Index i = 0; i < inst.d; ++i) {
      const double u = std::fmod(t + 0.37 * static_cast<double>(i), 1.0);
      wide[i] = -1.0 + u * (1.0 + 4.0 * inst.a);
    }
    p.max_exact_fd_error =
        std::max(p.max_exact_fd_error, (inst.gradient(wide) - central(wide)).cwiseAbs().maxCoeff());
  }
  return p;
}

Eigen::VectorXi omega_all(Eigen::Index d, int sign) {
  return Eigen::VectorXi::Constant(d, sign >= 0 ? 1 : -1);
}

Eigen::VectorXi omega_alternating(Eigen::Index d) {
  Eigen::VectorXi w(d);
  for (Eigen::Index i = 0; i < d; ++i) w[i] = i % 2 == 0 ? 1 : -1;
  return w;
}

}  // namespace dzo
