#include "dzo/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dzo/rand_geometry.hpp"

namespace dzo {

namespace {

void check_step_shapes(const Eigen::MatrixXd& states, const Eigen::MatrixXd& grads,
                       const Eigen::MatrixXd& W, const ProjectionSet& theta) {
  if (states.rows() != grads.rows() || states.cols() != grads.cols() ||
      W.rows() != states.cols() || W.cols() != states.cols() || theta.dim() != states.rows()) {
    throw Error(ErrorKind::Shape, "consensus step: states, gradients, W and theta disagree");
  }
}

// Column i of the mixed point: sum_j W_ij y_j, j ascending.
void mix_column(const Eigen::MatrixXd& y, const Eigen::MatrixXd& W, Eigen::Index i,
                Eigen::Ref<Eigen::VectorXd> out) {
  out.setZero();
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    const double w = W(i, j);
    if (w != 0.0) out += w * y.col(j);
  }
}

}  // namespace

ScheduleKind parse_schedule_kind(std::string_view name) {
  if (name == "strongly_convex_pl") return ScheduleKind::StronglyConvexPL;
  if (name == "improved_beta2") return ScheduleKind::ImprovedBeta2;
  if (name == "custom") return ScheduleKind::Custom;
  throw Error(ErrorKind::Input, "unknown schedule '" + std::string(name) + "'");
}

std::string_view to_string(ScheduleKind kind) noexcept {
  switch (kind) {
    case ScheduleKind::StronglyConvexPL: return "strongly_convex_pl";
    case ScheduleKind::ImprovedBeta2: return "improved_beta2";
    case ScheduleKind::Custom: return "custom";
  }
  return "unknown";
}

StepSizes schedule_values(const Schedule& s, std::uint64_t t) {
  if (t == 0) throw Error(ErrorKind::UndefinedSchedule, "schedules start at t = 1");
  const double tt = static_cast<double>(t);
  switch (s.kind) {
    case ScheduleKind::StronglyConvexPL:
      return {2.0 / (s.alpha * tt), std::pow(tt, -1.0 / (2.0 * s.beta))};
    case ScheduleKind::ImprovedBeta2:
      return {1.0 / (s.alpha * tt), std::sqrt(s.d) * std::pow(tt, -0.25)};
    case ScheduleKind::Custom:
      return {s.eta0 * std::pow(tt, -s.eta_power), s.h0 * std::pow(tt, -s.h_power)};
  }
  return {};
}

void consensus_step(Eigen::MatrixXd& states, const Eigen::MatrixXd& grads,
                    const Eigen::MatrixXd& W, double eta, const ProjectionSet& theta,
                    Exec exec) {
  if (exec == Exec::Serial) {
    serial::consensus_step(states, grads, W, eta, theta);
    return;
  }
  check_step_shapes(states, grads, W, theta);
  const Eigen::MatrixXd y = states - eta * grads;
  const long long n = static_cast<long long>(states.cols());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    auto col = states.col(static_cast<Eigen::Index>(i));
    mix_column(y, W, static_cast<Eigen::Index>(i), col);
    project_in_place(theta, col);
  }
}

namespace serial {

void consensus_step(Eigen::MatrixXd& states, const Eigen::MatrixXd& grads,
                    const Eigen::MatrixXd& W, double eta, const ProjectionSet& theta) {
  check_step_shapes(states, grads, W, theta);
  const Eigen::MatrixXd y = states - eta * grads;
  for (Eigen::Index i = 0; i < states.cols(); ++i) {
    auto col = states.col(i);
    mix_column(y, W, i, col);
    project_in_place(theta, col);
  }
}

}  // namespace serial

InitKind parse_init_kind(std::string_view name) {
  if (name == "vertex") return InitKind::Vertex;
  if (name == "point") return InitKind::Point;
  if (name == "uniform") return InitKind::Uniform;
  throw Error(ErrorKind::Input, "unknown init kind '" + std::string(name) + "'");
}

Eigen::VectorXd vertex_point(const ProjectionSet& theta) {
  if (theta.kind == ProjectionSet::Kind::Box) return theta.hi;
  const auto d = static_cast<double>(theta.dim());
  return theta.center + Eigen::VectorXd::Constant(theta.dim(), theta.radius / std::sqrt(d));
}

Eigen::MatrixXd initial_states(const InitSpec& init, const ProjectionSet& theta, int n,
                               std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::Parameter, "need at least one agent");
  Eigen::MatrixXd x(theta.dim(), n);
  switch (init.kind) {
    case InitKind::Vertex: {
      const Eigen::VectorXd v = project(theta, vertex_point(theta));
      x.colwise() = v;
      break;
    }
    case InitKind::Point: {
      if (init.point.size() != theta.dim()) {
        throw Error(ErrorKind::Shape, "init point has wrong dimension");
      }
      x.colwise() = project(theta, init.point);
      break;
    }
    case InitKind::Uniform:
      for (int i = 0; i < n; ++i) {
        RandomStream stream(seed, {Purpose::Init, static_cast<std::uint64_t>(i), 0});
        x.col(i) = project(theta, sample_in(theta, stream));
      }
      break;
  }
  return x;
}

std::vector<std::uint64_t> record_times(const RecordSpec& spec, std::uint64_t T) {
  if (T < 1) throw Error(ErrorKind::Parameter, "T must be >= 1");
  std::vector<std::uint64_t> out;
  if (spec.every > 0) {
    for (std::uint64_t t = spec.every; t <= T; t += spec.every) out.push_back(t);
  } else if (spec.log_spaced) {
    if (spec.points < 2) throw Error(ErrorKind::Parameter, "log-spaced recording needs >= 2 points");
    const double logT = std::log(static_cast<double>(T));
    for (std::size_t k = 0; k < spec.points; ++k) {
      const double frac = static_cast<double>(k) / static_cast<double>(spec.points - 1);
      auto t = static_cast<std::uint64_t>(std::llround(std::exp(frac * logT)));
      t = std::clamp<std::uint64_t>(t, 1, T);
      if (out.empty() || t > out.back()) out.push_back(t);
    }
  } else {
    for (std::uint64_t t = 1; t <= T; ++t) out.push_back(t);
  }
  if (out.empty() || out.back() != T) out.push_back(T);
  return out;
}

RunResult run_detailed(const RunConfig& cfg, Exec exec) {
  const Objective& obj = cfg.objective;
  const int n = cfg.mixing.n();
  const Eigen::Index d = obj.d;
  if (cfg.T < 1) throw Error(ErrorKind::Parameter, "T must be >= 1");
  if (n < 1) throw Error(ErrorKind::Parameter, "mixing matrix is empty");
  if (obj.theta.dim() != d) throw Error(ErrorKind::Shape, "theta and objective dimensions differ");
  if (cfg.estimator == EstimatorKind::Kernel && !cfg.kernel) {
    throw Error(ErrorKind::Parameter, "kernel estimator needs a kernel");
  }
  if (cfg.estimator == EstimatorKind::PlainBeta2 && cfg.schedule.beta != 2.0) {
    throw Error(ErrorKind::Parameter, "plain_beta2 estimator requires beta = 2");
  }
  const double f_star = obj.f_star();
  const Kernel* kernel = cfg.kernel ? &*cfg.kernel : nullptr;
  const double guard = 1e6 * std::max(obj.theta.diameter(), 1e-300);

  RunResult res;
  res.trace.seed = cfg.seed;
  res.trace.config_hash = cfg.config_hash;
  const std::vector<std::uint64_t> times = record_times(cfg.record, cfg.T);
  res.trace.rows.reserve(times.size());
  std::size_t next_record = 0;

  Eigen::MatrixXd x = initial_states(cfg.init, obj.theta, n, cfg.seed);
  Eigen::MatrixXd g(d, n);
  Eigen::VectorXd x_hat(d);
  double regret = 0.0;
  const long long nn = n;

  for (std::uint64_t t = 1; t <= cfg.T; ++t) {
    const StepSizes step = schedule_values(cfg.schedule, t);

    if (exec == Exec::Parallel) {
#pragma omp parallel
      {
        Eigen::VectorXd scratch(d), xi(d);
#pragma omp for schedule(static)
        for (long long i = 0; i < nn; ++i) {
          xi = x.col(static_cast<Eigen::Index>(i));
          zo_gradient_into(cfg.estimator, obj, xi, step.h, kernel, cfg.noise,
                           {cfg.seed, t, static_cast<std::uint64_t>(i)}, scratch,
                           g.col(static_cast<Eigen::Index>(i)));
        }
      }
    } else {
      Eigen::VectorXd scratch(d), xi(d);
      for (int i = 0; i < n; ++i) {
        xi = x.col(i);
        zo_gradient_into(cfg.estimator, obj, xi, step.h, kernel, cfg.noise,
                         {cfg.seed, t, static_cast<std::uint64_t>(i)}, scratch, g.col(i));
      }
    }

    if (!g.allFinite()) throw DivergenceError(t, x);
    const Eigen::MatrixXd before = x;
    consensus_step(x, g, cfg.mixing.W, step.eta, obj.theta, exec);

    const Eigen::VectorXd x_bar = mean_iterate(x);
    if (!x.allFinite() || x_bar.norm() > guard) throw DivergenceError(t, before);
    update_average(x_hat, x_bar, t);
    const double err = obj.f(x_bar) - f_star;
    regret = update_regret(regret, err);

    if (next_record < times.size() && times[next_record] == t) {
      TraceRow row;
      row.t = t;
      row.eta = step.eta;
      row.h = step.h;
      row.f_mean_err = err;
      row.f_avg_err = obj.f(x_hat) - f_star;
      row.cum_regret = regret;
      row.consensus_e = consensus_error(x);
      res.trace.rows.push_back(row);
      ++next_record;
    }
  }
  res.states = std::move(x);
  res.x_hat = std::move(x_hat);
  return res;
}

Trace run(const RunConfig& config, Exec exec) { return run_detailed(config, exec).trace; }

}  // namespace dzo
