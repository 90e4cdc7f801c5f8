#include "dzo/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dzo/error.hpp"
#include "dzo/rand_geometry.hpp"

namespace dzo {

namespace {

void require_h(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorKind::Parameter, "smoothing parameter h must be positive");
  }
}

// Running sums for the gradient moments.
struct MomentSums {
  Eigen::VectorXd sum, sum_sq;
  double norm2 = 0.0, norm4 = 0.0;
  std::size_t count = 0;

  explicit MomentSums(Eigen::Index d = 0)
      : sum(Eigen::VectorXd::Zero(d)), sum_sq(Eigen::VectorXd::Zero(d)) {}

  void add(const Eigen::VectorXd& g) {
    sum += g;
    sum_sq += g.cwiseAbs2();
    const double n2 = g.squaredNorm();
    norm2 += n2;
    norm4 += n2 * n2;
    ++count;
  }
  void merge(const MomentSums& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    norm2 += o.norm2;
    norm4 += o.norm4;
    count += o.count;
  }
};

struct ScalarSums {
  double sum = 0.0, sum_sq = 0.0;
  std::size_t count = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++count;
  }
  void merge(const ScalarSums& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    count += o.count;
  }
};

double standard_error(double sum, double sum_sq, std::size_t n) {
  if (n < 2) return 0.0;
  const double mean = sum / static_cast<double>(n);
  const double var = std::max(0.0, (sum_sq - static_cast<double>(n) * mean * mean) /
                                       static_cast<double>(n - 1));
  return std::sqrt(var / static_cast<double>(n));
}

GradientMoments finish(const MomentSums& s) {
  GradientMoments m;
  const double n = static_cast<double>(s.count);
  m.samples = s.count;
  m.mean = s.sum / n;
  m.mean_se.resize(s.sum.size());
  for (Eigen::Index j = 0; j < s.sum.size(); ++j) {
    m.mean_se[j] = standard_error(s.sum[j], s.sum_sq[j], s.count);
  }
  m.second_moment = s.norm2 / n;
  m.second_moment_se = standard_error(s.norm2, s.norm4, s.count);
  return m;
}

// Fixed-block reduction: block b covers samples [b n / B, (b+1) n / B) and the
// blocks are merged in index order, so the result does not depend on the
// number of threads.
std::size_t block_count(std::size_t n) {
  return std::min<std::size_t>(kReductionBlocks, std::max<std::size_t>(n, 1));
}

template <typename Acc, typename Sample>
Acc block_reduce(std::size_t n, const Acc& zero, Sample&& sample) {
  const std::size_t blocks = block_count(n);
  std::vector<Acc> partial(blocks, zero);
  const long long nb = static_cast<long long>(blocks);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * n / blocks;
    const std::size_t hi = static_cast<std::size_t>(b + 1) * n / blocks;
    Acc& acc = partial[static_cast<std::size_t>(b)];
    for (std::size_t s = lo; s < hi; ++s) sample(acc, s);
  }
  Acc total = zero;
  for (const Acc& p : partial) total.merge(p);
  return total;
}

// Same blocks, same merge order, one thread.
template <typename Acc, typename Sample>
Acc serial_block_reduce(std::size_t n, const Acc& zero, Sample&& sample) {
  const std::size_t blocks = block_count(n);
  Acc total = zero;
  for (std::size_t b = 0; b < blocks; ++b) {
    Acc acc = zero;
    for (std::size_t s = b * n / blocks; s < (b + 1) * n / blocks; ++s) sample(acc, s);
    total.merge(acc);
  }
  return total;
}

void check_query_shape(const Objective& obj, const Eigen::VectorXd& x) {
  if (x.size() != obj.d) throw Error(ErrorKind::Shape, "query point has wrong dimension");
}

}  // namespace

EstimatorKind parse_estimator_kind(std::string_view name) {
  if (name == "kernel") return EstimatorKind::Kernel;
  if (name == "plain_beta2") return EstimatorKind::PlainBeta2;
  throw Error(ErrorKind::Input, "unknown estimator '" + std::string(name) + "'");
}

std::string_view to_string(EstimatorKind kind) noexcept {
  return kind == EstimatorKind::Kernel ? "kernel" : "plain_beta2";
}

void zo_gradient_into(EstimatorKind kind, const Objective& obj, const Eigen::VectorXd& x, double h,
                      const Kernel* kernel, const NoiseModel& noise, QueryLabel label,
                      Eigen::VectorXd& scratch, Eigen::Ref<Eigen::VectorXd> g) {
  const Eigen::Index d = obj.d;
  double r = 1.0;
  double weight = 1.0;
  if (kind == EstimatorKind::Kernel) {
    RandomStream radius(label.seed, {Purpose::Radius, label.agent, label.t});
    r = sample_interval(radius);
    weight = (*kernel)(r);
  }
  RandomStream direction(label.seed, {Purpose::Direction, label.agent, label.t});
  sample_sphere_into(direction, g);  // g temporarily holds zeta

  scratch = x + (h * r) * g;
  const double y_plus =
      obj.f(scratch) + sample_noise(noise, label.t, label.agent, NoiseDraw::First, label.seed);
  scratch = x - (h * r) * g;
  const double y_minus =
      obj.f(scratch) + sample_noise(noise, label.t, label.agent, NoiseDraw::Second, label.seed);

  g *= static_cast<double>(d) / (2.0 * h) * (y_plus - y_minus) * weight;
}

GradientEstimate zo_gradient_kernel(const Objective& obj, const Eigen::VectorXd& x, double h,
                                    const Kernel& k, const NoiseModel& noise, QueryLabel label) {
  require_h(h);
  check_query_shape(obj, x);
  GradientEstimate e;
  RandomStream radius(label.seed, {Purpose::Radius, label.agent, label.t});
  e.r = sample_interval(radius);
  RandomStream direction(label.seed, {Purpose::Direction, label.agent, label.t});
  e.zeta = sample_sphere(direction, obj.d);
  e.query_plus = x + (h * e.r) * e.zeta;
  e.query_minus = x - (h * e.r) * e.zeta;
  const double y_plus =
      obj.f(e.query_plus) + sample_noise(noise, label.t, label.agent, NoiseDraw::First, label.seed);
  const double y_minus = obj.f(e.query_minus) +
                         sample_noise(noise, label.t, label.agent, NoiseDraw::Second, label.seed);
  e.g = (static_cast<double>(obj.d) / (2.0 * h) * (y_plus - y_minus) * k(e.r)) * e.zeta;
  return e;
}

GradientEstimate zo_gradient_plain(const Objective& obj, const Eigen::VectorXd& x, double h,
                                   const NoiseModel& noise, QueryLabel label) {
  require_h(h);
  check_query_shape(obj, x);
  GradientEstimate e;
  e.r = 1.0;
  RandomStream direction(label.seed, {Purpose::Direction, label.agent, label.t});
  e.zeta = sample_sphere(direction, obj.d);
  e.query_plus = x + h * e.zeta;
  e.query_minus = x - h * e.zeta;
  const double y_plus =
      obj.f(e.query_plus) + sample_noise(noise, label.t, label.agent, NoiseDraw::First, label.seed);
  const double y_minus = obj.f(e.query_minus) +
                         sample_noise(noise, label.t, label.agent, NoiseDraw::Second, label.seed);
  e.g = (static_cast<double>(obj.d) / (2.0 * h) * (y_plus - y_minus)) * e.zeta;
  return e;
}

GradientMoments mc_gradient_moments(EstimatorKind kind, const Objective& obj,
                                    const Eigen::VectorXd& x, double h, const Kernel* kernel,
                                    const NoiseModel& noise, std::size_t n, std::uint64_t seed,
                                    Exec exec) {
  if (exec == Exec::Serial) return serial::mc_gradient_moments(kind, obj, x, h, kernel, noise, n, seed);
  require_h(h);
  check_query_shape(obj, x);
  if (n < 1) throw Error(ErrorKind::Parameter, "Monte-Carlo needs n >= 1");
  if (kind == EstimatorKind::Kernel && kernel == nullptr) {
    throw Error(ErrorKind::Parameter, "kernel estimator needs a kernel");
  }
  const MomentSums total = block_reduce(n, MomentSums(obj.d), [&](MomentSums& acc, std::size_t s) {
    Eigen::VectorXd scratch(obj.d), g(obj.d);
    zo_gradient_into(kind, obj, x, h, kernel, noise, {seed, s + 1, 0}, scratch, g);
    acc.add(g);
  });
  return finish(total);
}

SurrogateValue surrogate_value(const Objective& obj, const Eigen::VectorXd& x, double h,
                               std::size_t n, std::uint64_t seed, Exec exec) {
  if (exec == Exec::Serial) return serial::surrogate_value(obj, x, h, n, seed);
  require_h(h);
  check_query_shape(obj, x);
  if (n < 1) throw Error(ErrorKind::Parameter, "Monte-Carlo needs n >= 1");
  const ScalarSums total = block_reduce(n, ScalarSums{}, [&](ScalarSums& acc, std::size_t s) {
    RandomStream stream(seed, {Purpose::Surrogate, 0, s + 1});
    acc.add(obj.f(x + h * sample_ball(stream, obj.d)));
  });
  return {total.sum / static_cast<double>(total.count),
          standard_error(total.sum, total.sum_sq, total.count)};
}

namespace serial {

GradientMoments mc_gradient_moments(EstimatorKind kind, const Objective& obj,
                                    const Eigen::VectorXd& x, double h, const Kernel* kernel,
                                    const NoiseModel& noise, std::size_t n, std::uint64_t seed) {
  require_h(h);
  check_query_shape(obj, x);
  if (n < 1) throw Error(ErrorKind::Parameter, "Monte-Carlo needs n >= 1");
  if (kind == EstimatorKind::Kernel && kernel == nullptr) {
    throw Error(ErrorKind::Parameter, "kernel estimator needs a kernel");
  }
  Eigen::VectorXd scratch(obj.d), g(obj.d);
  const MomentSums total = serial_block_reduce(n, MomentSums(obj.d), [&](MomentSums& acc, std::size_t s) {
    zo_gradient_into(kind, obj, x, h, kernel, noise, {seed, s + 1, 0}, scratch, g);
    acc.add(g);
  });
  return finish(total);
}

SurrogateValue surrogate_value(const Objective& obj, const Eigen::VectorXd& x, double h,
                               std::size_t n, std::uint64_t seed) {
  require_h(h);
  check_query_shape(obj, x);
  if (n < 1) throw Error(ErrorKind::Parameter, "Monte-Carlo needs n >= 1");
  const ScalarSums acc = serial_block_reduce(n, ScalarSums{}, [&](ScalarSums& a, std::size_t s) {
    RandomStream stream(seed, {Purpose::Surrogate, 0, s + 1});
    a.add(obj.f(x + h * sample_ball(stream, obj.d)));
  });
  return {acc.sum / static_cast<double>(n), standard_error(acc.sum, acc.sum_sq, n)};
}

}  // namespace serial

BiasProbe probe_bias(const Objective& obj, const Eigen::VectorXd& x, std::span<const double> hs,
                     const Kernel& k, std::size_t n_mc, std::uint64_t seed, Exec exec) {
  if (hs.size() < 3) throw Error(ErrorKind::Fit, "bias probe needs at least three h values");
  const Eigen::VectorXd truth = obj.grad(x);
  const NoiseModel quiet = NoiseModel::zero();
  BiasProbe probe;
  std::vector<double> hv, bv;
  for (double h : hs) {
    const GradientMoments m =
        mc_gradient_moments(EstimatorKind::Kernel, obj, x, h, &k, quiet, n_mc, seed, exec);
    BiasPoint p;
    p.h = h;
    p.mean = m.mean;
    p.mean_se = m.mean_se;
    const Eigen::VectorXd diff = m.mean - truth;
    p.bias = diff.norm();
    p.bias_se = p.bias > 0.0 ? std::sqrt((diff.cwiseAbs2().cwiseProduct(m.mean_se.cwiseAbs2())).sum()) / p.bias
                             : m.mean_se.norm();
    p.bound = k.kappa_beta * obj.L * static_cast<double>(obj.d) * std::pow(h, k.beta - 1.0);
    probe.points.push_back(p);
    hv.push_back(h);
    bv.push_back(p.bias);
  }
  probe.fit = fit_loglog(hv, bv);
  return probe;
}

double second_moment_bound(const Objective& obj, const Eigen::VectorXd& x, double h, double sigma,
                           const Kernel& k) {
  const double d = static_cast<double>(obj.d);
  return 9.0 * k.kappa * d * obj.grad(x).squaredNorm() +
         9.0 * k.kappa * obj.Lbar * d * d * h * h / 8.0 +
         3.0 * k.kappa * sigma * sigma * d * d / (2.0 * h * h);
}

SecondMomentProbe probe_second_moment(const Objective& obj, const Eigen::VectorXd& x, double h,
                                      const NoiseModel& noise, const Kernel& k, std::size_t n_mc,
                                      std::uint64_t seed, Exec exec) {
  if (n_mc < 10000) throw Error(ErrorKind::Parameter, "second-moment probe needs n_mc >= 1e4");
  const GradientMoments m =
      mc_gradient_moments(EstimatorKind::Kernel, obj, x, h, &k, noise, n_mc, seed, exec);
  return {m.second_moment, m.second_moment_se, second_moment_bound(obj, x, h, noise.sigma, k)};
}

}  // namespace dzo
