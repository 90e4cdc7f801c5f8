#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "dzo/error.hpp"
#include "dzo/estimator.hpp"
#include "dzo/kernel.hpp"
#include "dzo/metrics.hpp"
#include "dzo/network.hpp"
#include "dzo/noise.hpp"
#include "dzo/objectives.hpp"
#include "dzo/parallel.hpp"

namespace dzo {

enum class ScheduleKind {
  StronglyConvexPL,  // eta = 2/(alpha t),  h = t^{-1/(2 beta)}
  ImprovedBeta2,     // eta = 1/(alpha t),  h = sqrt(d) t^{-1/4}
  Custom,            // eta = eta0 t^{-eta_power}, h = h0 t^{-h_power}
};

ScheduleKind parse_schedule_kind(std::string_view name);
std::string_view to_string(ScheduleKind kind) noexcept;

struct Schedule {
  ScheduleKind kind = ScheduleKind::StronglyConvexPL;
  double alpha = 1.0;
  double beta = 2.0;
  double d = 1.0;
  double eta0 = 1.0;
  double eta_power = 1.0;
  double h0 = 1.0;
  double h_power = 0.25;
};

struct StepSizes {
  double eta = 0.0;
  double h = 0.0;
};

/// Throws UndefinedSchedule for t = 0.
StepSizes schedule_values(const Schedule& s, std::uint64_t t);

/// Synchronous update x^i <- Proj(sum_j W_ij (x^j - eta g^j)) for all agents
/// from one snapshot. States and gradients are d x n (one agent per column);
/// the sum over j runs in index order.
void consensus_step(Eigen::MatrixXd& states, const Eigen::MatrixXd& grads,
                    const Eigen::MatrixXd& W, double eta, const ProjectionSet& theta,
                    Exec exec = Exec::Parallel);

namespace serial {
void consensus_step(Eigen::MatrixXd& states, const Eigen::MatrixXd& grads,
                    const Eigen::MatrixXd& W, double eta, const ProjectionSet& theta);
}

enum class InitKind {
  Vertex,   // all agents at a deterministic boundary point of theta
  Point,    // all agents at a given point (projected onto theta)
  Uniform,  // independent uniform draws from theta
};

InitKind parse_init_kind(std::string_view name);

struct InitSpec {
  InitKind kind = InitKind::Vertex;
  Eigen::VectorXd point;
};

/// Box: the upper corner. Ball: center + R (1, ..., 1)/sqrt(d).
Eigen::VectorXd vertex_point(const ProjectionSet& theta);

Eigen::MatrixXd initial_states(const InitSpec& init, const ProjectionSet& theta, int n,
                               std::uint64_t seed);

struct RecordSpec {
  std::uint64_t every = 0;  // > 0 records t = every, 2 every, ... (and T)
  bool log_spaced = true;
  std::size_t points = 200;
};

/// Recorded time indices in [1, T], increasing; always contains T.
std::vector<std::uint64_t> record_times(const RecordSpec& spec, std::uint64_t T);

struct RunConfig {
  std::uint64_t seed = 0;
  std::uint64_t T = 1;
  Objective objective;  // must carry an optimum
  MixingMatrix mixing;
  EstimatorKind estimator = EstimatorKind::Kernel;
  std::optional<Kernel> kernel;  // required for the kernel estimator
  NoiseModel noise;
  Schedule schedule;
  InitSpec init;
  RecordSpec record;
  std::uint64_t config_hash = 0;
};

struct RunResult {
  Trace trace;
  Eigen::MatrixXd states;  // final agent states
  Eigen::VectorXd x_hat;   // final running average of the mean iterate
};

/// Thrown when the mean iterate leaves 1e6 diam(theta); carries the last
/// finite agent states.
class DivergenceError : public Error {
 public:
  DivergenceError(std::uint64_t t, Eigen::MatrixXd last_states)
      : Error(ErrorKind::Divergence, "iterates diverged at t=" + std::to_string(t)),
        t_(t),
        states_(std::move(last_states)) {}

  std::uint64_t t() const noexcept { return t_; }
  const Eigen::MatrixXd& last_states() const noexcept { return states_; }

 private:
  std::uint64_t t_;
  Eigen::MatrixXd states_;
};

RunResult run_detailed(const RunConfig& config, Exec exec = Exec::Parallel);
Trace run(const RunConfig& config, Exec exec = Exec::Parallel);

}  // namespace dzo
