#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "dzo/kernel.hpp"
#include "dzo/noise.hpp"
#include "dzo/objectives.hpp"
#include "dzo/parallel.hpp"
#include "dzo/stats.hpp"

namespace dzo {

enum class EstimatorKind {
  Kernel,      // (d / 2h)(y - y') zeta K(r), queries at x +- h r zeta
  PlainBeta2,  // (d / 2h)(y - y') zeta,      queries at x +- h zeta
};

EstimatorKind parse_estimator_kind(std::string_view name);
std::string_view to_string(EstimatorKind kind) noexcept;

struct GradientEstimate {
  Eigen::VectorXd g;
  Eigen::VectorXd query_plus;
  Eigen::VectorXd query_minus;
  Eigen::VectorXd zeta;
  double r = 1.0;  // 1 for the plain estimator
};

/// Identifies the randomness of one query pair: r, zeta and the two noise
/// values come from the (seed, agent, t) labels of their purpose streams.
struct QueryLabel {
  std::uint64_t seed = 0;
  std::uint64_t t = 1;
  std::uint64_t agent = 0;
};

GradientEstimate zo_gradient_kernel(const Objective& obj, const Eigen::VectorXd& x, double h,
                                    const Kernel& k, const NoiseModel& noise, QueryLabel label);

GradientEstimate zo_gradient_plain(const Objective& obj, const Eigen::VectorXd& x, double h,
                                   const NoiseModel& noise, QueryLabel label);

/// Allocation-light form used inside the optimizer loop. `kernel` is ignored
/// for PlainBeta2. `scratch` must have size d.
void zo_gradient_into(EstimatorKind kind, const Objective& obj, const Eigen::VectorXd& x, double h,
                      const Kernel* kernel, const NoiseModel& noise, QueryLabel label,
                      Eigen::VectorXd& scratch, Eigen::Ref<Eigen::VectorXd> g);

/// Monte-Carlo moments of the estimator at a fixed point; sample s uses the
/// label (seed, t = s + 1, agent = 0).
struct GradientMoments {
  Eigen::VectorXd mean;
  Eigen::VectorXd mean_se;
  double second_moment = 0.0;  // E ||g||^2
  double second_moment_se = 0.0;
  std::size_t samples = 0;
};

GradientMoments mc_gradient_moments(EstimatorKind kind, const Objective& obj,
                                    const Eigen::VectorXd& x, double h, const Kernel* kernel,
                                    const NoiseModel& noise, std::size_t n, std::uint64_t seed,
                                    Exec exec = Exec::Parallel);

struct SurrogateValue {
  double mean = 0.0;
  double se = 0.0;
};

/// Monte-Carlo value of f_hat(x) = E f(x + h u), u uniform on the unit ball.
SurrogateValue surrogate_value(const Objective& obj, const Eigen::VectorXd& x, double h,
                               std::size_t n, std::uint64_t seed, Exec exec = Exec::Parallel);

struct BiasPoint {
  double h = 0.0;
  double bias = 0.0;     // ||E g - grad f(x)||
  double bias_se = 0.0;
  double bound = 0.0;    // kappa_beta L d h^{beta-1}
  Eigen::VectorXd mean;
  Eigen::VectorXd mean_se;
};

struct BiasProbe {
  std::vector<BiasPoint> points;
  LineFit fit;  // log bias against log h
};

/// Noise-free bias of the kernel estimator at x for each h (>= 3 values).
BiasProbe probe_bias(const Objective& obj, const Eigen::VectorXd& x, std::span<const double> hs,
                     const Kernel& k, std::size_t n_mc, std::uint64_t seed,
                     Exec exec = Exec::Parallel);

struct SecondMomentProbe {
  double value = 0.0;
  double se = 0.0;
  double bound = 0.0;  // 9 kappa d |grad|^2 + 9 kappa Lbar d^2 h^2 / 8 + 3 kappa sigma^2 d^2 / (2 h^2)
};

double second_moment_bound(const Objective& obj, const Eigen::VectorXd& x, double h, double sigma,
                           const Kernel& k);

/// E ||g||^2 of the kernel estimator with the given noise (n_mc >= 1e4).
SecondMomentProbe probe_second_moment(const Objective& obj, const Eigen::VectorXd& x, double h,
                                      const NoiseModel& noise, const Kernel& k, std::size_t n_mc,
                                      std::uint64_t seed, Exec exec = Exec::Parallel);

namespace serial {

/// Reference single-loop versions of the Monte-Carlo kernels.
GradientMoments mc_gradient_moments(EstimatorKind kind, const Objective& obj,
                                    const Eigen::VectorXd& x, double h, const Kernel* kernel,
                                    const NoiseModel& noise, std::size_t n, std::uint64_t seed);

SurrogateValue surrogate_value(const Objective& obj, const Eigen::VectorXd& x, double h,
                               std::size_t n, std::uint64_t seed);

}  // namespace serial

}  // namespace dzo
