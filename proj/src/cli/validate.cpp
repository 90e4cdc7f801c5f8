#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "dzo/cli/commands.hpp"
#include "dzo/estimator.hpp"
#include "dzo/hard_instances.hpp"
#include "dzo/kernel.hpp"
#include "dzo/metrics.hpp"
#include "dzo/network.hpp"
#include "dzo/objectives.hpp"

namespace dzo::cli {

namespace {

class Detail {
 public:
  template <typename T>
  Detail& operator()(const char* key, const T& value) {
    if (!first_) s_ << ' ';
    first_ = false;
    s_ << key << '=';
    if constexpr (std::is_floating_point_v<T>) {
      s_ << format_double(value);
    } else {
      s_ << value;
    }
    return *this;
  }
  std::string str() const { return s_.str(); }

 private:
  std::ostringstream s_;
  bool first_ = true;
};

std::string beta_tag(double beta) { return format_double(beta); }

}  // namespace

std::vector<CheckResult> validate_kernel(const ValidateOptions& opt) {
  std::vector<CheckResult> out;
  for (double beta : opt.betas) {
    const Kernel k = build_legendre_kernel(beta);
    const auto m = kernel_moments(k, k.ell);
    double worst = std::abs(m[0]);
    worst = std::max(worst, std::abs(m[1] - 1.0));
    for (int j = 2; j <= k.ell; ++j) worst = std::max(worst, std::abs(m[static_cast<std::size_t>(j)]));
    out.push_back({"kernel.moments.beta" + beta_tag(beta), worst <= 1e-10,
                   Detail()("ell", k.ell)("degree", k.degree())("max_error", worst).str()});
    const double cap = 2.0 * std::sqrt(2.0) * beta;
    out.push_back({"kernel.kappa_beta.beta" + beta_tag(beta), k.kappa_beta <= cap,
                   Detail()("kappa", k.kappa)("kappa_beta", k.kappa_beta)("cap", cap).str()});
  }
  return out;
}

std::vector<CheckResult> validate_mixing(const ValidateOptions& opt) {
  std::vector<CheckResult> out;
  auto check = [&](const std::string& name, const GraphTopology& g) {
    const MixingMatrix m = metropolis_matrix(g);
    const Eigen::MatrixXd& W = m.W;
    const double sym = (W - W.transpose()).cwiseAbs().maxCoeff();
    const double rows = (W.rowwise().sum().array() - 1.0).abs().maxCoeff();
    const double cols = (W.colwise().sum().array() - 1.0).abs().maxCoeff();
    bool sparsity = W.minCoeff() >= 0.0;
    for (int i = 0; i < g.n; ++i) {
      for (int j = 0; j < g.n; ++j) {
        if (i != j && (W(i, j) != 0.0) != g.has_edge(i, j)) sparsity = false;
      }
    }
    const double bound = rho_upper_bound(g.n);
    const bool rho_ok = g.is_complete() ? m.rho == 0.0 : m.rho < bound;
    const bool pass = sym <= 1e-12 && rows <= 1e-12 && cols <= 1e-12 && sparsity && rho_ok;
    out.push_back({name, pass,
                   Detail()("n", g.n)("edges", g.edges.size())("sym", sym)("row", std::max(rows, cols))(
                       "sparsity", sparsity ? "ok" : "bad")("rho", m.rho)("bound", bound)
                       .str()});
  };
  for (GraphKind kind : {GraphKind::Ring, GraphKind::Path}) {
    for (int n = 3; n <= opt.n_max; ++n) {
      check("mixing." + std::string(to_string(kind)) + ".n" + std::to_string(n),
            build_topology(kind, n, std::nullopt, 0));
    }
  }
  for (int s = 2; s * s <= opt.n_max; ++s) {
    check("mixing.grid.n" + std::to_string(s * s), build_topology(GraphKind::Grid, s * s, std::nullopt, 0));
  }
  for (int k = 0; k < opt.er_samples; ++k) {
    const int n = 10 + k;
    check("mixing.erdos_renyi.sample" + std::to_string(k),
          build_topology(GraphKind::ErdosRenyi, n, 0.3, opt.seed + static_cast<std::uint64_t>(k)));
  }
  for (int n : {1, 2, 3, 10, 50}) {
    check("mixing.complete.n" + std::to_string(n), build_topology(GraphKind::Complete, n, std::nullopt, 0));
  }
  return out;
}

std::vector<CheckResult> estimator_unbiased_checks(const ValidateOptions& opt) {
  std::vector<CheckResult> out;
  const Kernel k2 = build_legendre_kernel(2.0);
  for (int d : {1, 5, 20}) {
    const ProjectionSet theta = ProjectionSet::ball(Eigen::VectorXd::Zero(d), 1.0);
    Eigen::VectorXd c(d);
    for (int i = 0; i < d; ++i) c[i] = 1.0 - 0.1 * i + 0.05 * (i % 3);
    const Objective f = make_linear(c, 0.3, theta);
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(d, 0.2);
    const GradientMoments m = mc_gradient_moments(EstimatorKind::Kernel, f, x, 0.1, &k2,
                                                  NoiseModel::zero(), opt.samples, opt.seed + d);
    const Eigen::VectorXd diff = m.mean - c;
    const double se = m.mean_se.norm();
    const double max_z = (diff.cwiseAbs().array() / m.mean_se.array().max(1e-300)).maxCoeff();
    out.push_back({"estimator.unbiased.d" + std::to_string(d), max_z <= 3.0,
                   Detail()("samples", opt.samples)("error", diff.norm())("se", se)("max_z", max_z).str()});
  }
  return out;
}

std::vector<CheckResult> estimator_bias_checks(const ValidateOptions& opt) {
  std::vector<CheckResult> out;
  const std::vector<double> hs = {0.4, 0.2, 0.1, 0.05};
  for (double beta : {2.0, 3.0}) {
    const Kernel k = build_legendre_kernel(beta);
    const ProjectionSet theta = ProjectionSet::ball(Eigen::VectorXd::Zero(1), 1.0);
    const Objective probe = make_holder_probe(beta, 1, theta);
    const BiasProbe bp = probe_bias(probe, Eigen::VectorXd::Zero(1), hs, k, opt.bias_samples, opt.seed);
    const double target = beta - 1.0;
    const double tol = beta == 2.0 ? 0.15 : 0.2;
    out.push_back({"estimator.bias_slope.beta" + beta_tag(beta), std::abs(bp.fit.slope - target) <= tol,
                   Detail()("slope", bp.fit.slope)("target", target)("tol", tol).str()});
    for (const BiasPoint& p : bp.points) {
      out.push_back({"estimator.bias_bound.beta" + beta_tag(beta) + ".h" + format_double(p.h),
                     p.bias <= 1.1 * p.bound,
                     Detail()("bias", p.bias)("se", p.bias_se)("bound", p.bound).str()});
    }
  }
  return out;
}

// Second-moment envelope, and the noise term's scaling in h and d.
std::vector<CheckResult> estimator_moment_checks(const ValidateOptions& opt) {
  std::vector<CheckResult> out;
  const Kernel k2 = build_legendre_kernel(2.0);
  for (double sigma : {0.5, 1.0}) {
    double noise_term[2][2] = {};
    const int dims[2] = {2, 8};
    const double hv[2] = {0.1, 0.05};
    for (int di = 0; di < 2; ++di) {
      const int d = dims[di];
      const ProjectionSet theta = ProjectionSet::ball(Eigen::VectorXd::Zero(d), 1.0);
      const Objective q = make_quadratic(d, 1.0, 4.0, Eigen::VectorXd::Zero(d), theta, 7);
      const Eigen::VectorXd x = Eigen::VectorXd::Constant(d, 0.5 / std::sqrt(static_cast<double>(d)));
      for (int hi = 0; hi < 2; ++hi) {
        const double h = hv[hi];
        const SecondMomentProbe noisy =
            probe_second_moment(q, x, h, NoiseModel::gaussian(sigma), k2, opt.samples, opt.seed);
        const SecondMomentProbe quiet =
            probe_second_moment(q, x, h, NoiseModel::zero(), k2, opt.samples, opt.seed);
        noise_term[di][hi] = noisy.value - quiet.value;
        out.push_back({"estimator.second_moment.sigma" + format_double(sigma) + ".d" + std::to_string(d) +
                           ".h" + format_double(h),
                       noisy.value <= 1.1 * noisy.bound,
                       Detail()("value", noisy.value)("se", noisy.se)("bound", noisy.bound).str()});
      }
    }
    for (int di = 0; di < 2; ++di) {
      const double slope = std::log(noise_term[di][1] / noise_term[di][0]) / std::log(hv[1] / hv[0]);
      out.push_back({"estimator.noise_slope_h.sigma" + format_double(sigma) + ".d" + std::to_string(dims[di]),
                     std::abs(slope + 2.0) <= 0.3, Detail()("slope", slope)("target", -2.0).str()});
    }
    for (int hi = 0; hi < 2; ++hi) {
      const double slope = std::log(noise_term[1][hi] / noise_term[0][hi]) /
                           std::log(static_cast<double>(dims[1]) / dims[0]);
      out.push_back({"estimator.noise_slope_d.sigma" + format_double(sigma) + ".h" + format_double(hv[hi]),
                     std::abs(slope - 2.0) <= 0.3, Detail()("slope", slope)("target", 2.0).str()});
    }
  }
  return out;
}

std::vector<CheckResult> validate_estimator(const ValidateOptions& opt) {
  std::vector<CheckResult> out = estimator_unbiased_checks(opt);
  for (auto* part : {&estimator_bias_checks, &estimator_moment_checks}) {
    auto c = (*part)(opt);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

std::vector<CheckResult> hard_checks(double beta, double alpha, double T, int d, std::ostream* report) {
  std::vector<CheckResult> out;
  const std::string tag = "beta" + format_double(beta) + ".alpha" + format_double(alpha) + ".T" +
                          format_double(T) + ".d" + std::to_string(d);
  struct Pattern {
    const char* name;
    Eigen::VectorXi omega;
  };
  const Pattern patterns[] = {{"plus", omega_all(d, 1)},
                              {"minus", omega_all(d, -1)},
                              {"alternating", omega_alternating(d)}};
  bool first = true;
  for (const Pattern& p : patterns) {
    const HardInstance inst = hard_instance(d, beta, alpha, T, p.omega);
    const std::string name = "hard." + tag + "." + p.name;
    if (first) {
      const SeamReport seams = check_seams(inst);
      out.push_back({"hard." + tag + ".seams", seams.worst() <= 1e-8,
                     Detail()("value_0", seams.value_jump_0)("slope_0", seams.slope_jump_0)(
                         "value_a", seams.value_jump_a)("slope_a", seams.slope_jump_a)(
                         "fd_slope_0", seams.fd_slope_jump_0)("fd_slope_a", seams.fd_slope_jump_a)
                         .str()});
      if (report) {
        *report << "INSTANCE " << tag << ' '
                << Detail()("h", inst.h)("a", inst.a)("amplitude", inst.amplitude)(
                       "frequency", inst.frequency)("alpha_tilde", inst.alpha_tilde)("alpha_bar",
                                                                                    inst.alpha_bar)
                       .str()
                << '\n';
      }
      first = false;
    }
    const GradientProfile gp = hard_instance_gradient_profile(inst);
    out.push_back({name + ".gradient", gp.max_fd_error <= 1e-6 && gp.max_exact_fd_error <= 1e-6,
                   Detail()("max_norm", gp.max_norm)("formula_vs_fd", gp.max_fd_error)(
                       "piecewise_vs_fd", gp.max_exact_fd_error)
                       .str()});
    const HardOptimum opt = hard_instance_optimum(inst);
    Detail info;
    info("f_star", opt.f)("f_closed_form", opt.f_closed_form)("f_closed_form_corrected", opt.f_closed_form_corrected)(
        "closed_form_disagrees", opt.closed_form_disagrees ? "yes" : "no")("f_unconstrained", opt.f_global)(
        "unconstrained_leaves_theta", opt.global_leaves_theta ? "yes" : "no");
    bool optimum_ok = std::isfinite(opt.f) && (opt.x.array() >= 0.0).all() &&
                      (opt.x.array() <= inst.a).all();
    if (p.omega.minCoeff() == 1) {
      optimum_ok = optimum_ok && opt.f == 0.0 && opt.x.isZero(0.0);
      info("x_star_is_zero", opt.x.isZero(0.0) ? "yes" : "no");
    } else {
      // The optimum should agree with the corrected closed form.
      const double rel = std::abs(opt.f - opt.f_closed_form_corrected) / std::max(std::abs(opt.f_closed_form_corrected), 1e-300);
      info("rel_vs_corrected", rel);
      optimum_ok = optimum_ok && rel <= 1e-8;
    }
    out.push_back({name + ".optimum", optimum_ok, info.str()});
  }
  return out;
}

std::vector<CheckResult> validate_hard(const ValidateOptions&) {
  std::vector<CheckResult> out;
  for (double beta : {2.0, 3.0}) {
    for (double alpha : {0.5, 1.0}) {
      for (double T : {16.0, 256.0}) {
        for (int d : {1, 4}) {
          auto c = hard_checks(beta, alpha, T, d, nullptr);
          out.insert(out.end(), c.begin(), c.end());
        }
      }
    }
  }
  return out;
}

int report_checks(const std::string& suite, const std::vector<CheckResult>& checks, std::ostream& out) {
  std::size_t failed = 0;
  for (const CheckResult& c : checks) {
    out << "CHECK " << c.name << ' ' << (c.pass ? "PASS" : "FAIL") << ' ' << c.detail << '\n';
    if (!c.pass) ++failed;
  }
  out << "SUITE " << suite << ' ' << (failed == 0 ? "PASS" : "FAIL") << " checks=" << checks.size()
      << " failed=" << failed << '\n';
  return failed == 0 ? kOk : kValidation;
}

}  // namespace dzo::cli
