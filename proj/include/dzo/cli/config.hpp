#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dzo/error.hpp"
#include "dzo/optimizer.hpp"

namespace dzo::cli {

/// Every schema problem found in a config document, in document order.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct GraphSpec {
  GraphKind kind = GraphKind::Complete;
  std::optional<double> p;
};

struct ThetaSpec {
  ProjectionSet::Kind kind = ProjectionSet::Kind::Ball;
  std::vector<double> center;  // ball; empty means the origin
  double radius = 1.0;
  std::vector<double> lo, hi;  // box; one entry broadcasts
};

enum class ObjectiveKind { Quadratic, LeastSquares, Logistic, Hard, Constant, Linear };

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::Quadratic;
  std::uint64_t instance_seed = 0;  // random parts of the instance, fixed across run seeds

  // quadratic
  double alpha = 1.0;
  double Lbar = 4.0;
  std::vector<double> xstar;     // empty means the centre of theta
  std::vector<double> spectrum;  // overrides alpha/Lbar when present

  // least squares / logistic: explicit data or generator parameters
  std::vector<std::vector<double>> A;
  std::vector<double> y;
  LeastSquaresSpec generate;

  // hard
  std::string omega = "alternating";  // plus | minus | alternating
  std::vector<int> omega_values;

  // constant / linear
  double value = 0.0;
  std::vector<double> c;
  double b = 0.0;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::uint64_t T = 1;
  int n = 1;
  int d = 1;
  GraphSpec graph;
  double beta = 2.0;
  EstimatorKind estimator = EstimatorKind::Kernel;
  ObjectiveSpec objective;
  ThetaSpec theta;
  bool theta_given = false;
  NoiseModel noise;
  Schedule schedule;
  bool schedule_alpha_given = false;
  InitSpec init;
  RecordSpec record;
  std::vector<std::uint64_t> seeds;  // explicit sweep seeds
  std::optional<int> seed_count;     // sweep seed count

  nlohmann::json canonical;  // the document with every default filled in
};

/// Validates and fills defaults. Throws ConfigError listing all problems.
ExperimentConfig parse_config(std::string_view text);

/// 64-bit FNV-1a of the canonical document, as 16 hex digits.
std::uint64_t config_hash(const ExperimentConfig& cfg);
std::string hash_hex(std::uint64_t h);

/// Builds objective, graph, kernel and the rest for one seed.
RunConfig build_run_config(const ExperimentConfig& cfg, std::uint64_t seed);

/// Seeds for a sweep: explicit list, or seed, seed+1, ... (k values).
std::vector<std::uint64_t> sweep_seeds(const ExperimentConfig& cfg, std::optional<int> k);

}  // namespace dzo::cli
