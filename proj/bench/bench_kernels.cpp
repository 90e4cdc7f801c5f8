// Serial reference vs OpenMP versions of the two hot kernels.
#include <benchmark/benchmark.h>

#include "dzo/estimator.hpp"
#include "dzo/network.hpp"
#include "dzo/optimizer.hpp"

namespace {

using namespace dzo;

struct EstimatorFixture {
  Kernel k = build_legendre_kernel(4.0);
  Objective q;
  Eigen::VectorXd x;
  explicit EstimatorFixture(Eigen::Index d)
      : q(make_quadratic(d, 1.0, 4.0, Eigen::VectorXd::Zero(d),
                         ProjectionSet::ball(Eigen::VectorXd::Zero(d), 1.0), 1)),
        x(Eigen::VectorXd::Constant(d, 0.1)) {}
};

void BM_moments_serial(benchmark::State& state) {
  const EstimatorFixture f(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(serial::mc_gradient_moments(EstimatorKind::Kernel, f.q, f.x, 0.1, &f.k,
                                                         NoiseModel::gaussian(0.5), 100000, 1));
  }
}

void BM_moments_parallel(benchmark::State& state) {
  const EstimatorFixture f(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_gradient_moments(EstimatorKind::Kernel, f.q, f.x, 0.1, &f.k,
                                                 NoiseModel::gaussian(0.5), 100000, 1));
  }
}

struct StepFixture {
  MixingMatrix mix;
  ProjectionSet theta;
  Eigen::MatrixXd x, g;
  StepFixture(int n, Eigen::Index d)
      : mix(metropolis_matrix(build_topology(GraphKind::Ring, n, std::nullopt, 0))),
        theta(ProjectionSet::ball(Eigen::VectorXd::Zero(d), 1.0)),
        x(Eigen::MatrixXd::Constant(d, n, 0.1)),
        g(Eigen::MatrixXd::Random(d, n)) {}
};

void BM_step_serial(benchmark::State& state) {
  StepFixture f(static_cast<int>(state.range(0)), 50);
  for (auto _ : state) {
    serial::consensus_step(f.x, f.g, f.mix.W, 1e-3, f.theta);
    benchmark::ClobberMemory();
  }
}

void BM_step_parallel(benchmark::State& state) {
  StepFixture f(static_cast<int>(state.range(0)), 50);
  for (auto _ : state) {
    consensus_step(f.x, f.g, f.mix.W, 1e-3, f.theta);
    benchmark::ClobberMemory();
  }
}

}  // namespace

BENCHMARK(BM_moments_serial)->Arg(5)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_moments_parallel)->Arg(5)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_step_serial)->Arg(16)->Arg(256);
BENCHMARK(BM_step_parallel)->Arg(16)->Arg(256);

BENCHMARK_MAIN();
