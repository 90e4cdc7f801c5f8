#include "dzo/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "dzo/error.hpp"
#include "dzo/rand_geometry.hpp"

namespace dzo {

namespace {

void require_sigma(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorKind::Parameter, "noise sigma must be finite and >= 0");
  }
}

NoiseModel with(NoiseKind kind, double sigma) {
  require_sigma(sigma);
  NoiseModel m;
  m.kind = kind;
  m.sigma = sigma;
  return m;
}

}  // namespace

NoiseKind parse_noise_kind(std::string_view name) {
  if (name == "zero") return NoiseKind::Zero;
  if (name == "gaussian") return NoiseKind::Gaussian;
  if (name == "uniform") return NoiseKind::Uniform;
  if (name == "sign_alternating") return NoiseKind::SignAlternating;
  if (name == "constant_bias") return NoiseKind::ConstantBias;
  if (name == "precommitted_sequence") return NoiseKind::Precommitted;
  throw Error(ErrorKind::Input, "unknown noise kind '" + std::string(name) + "'");
}

std::string_view to_string(NoiseKind kind) noexcept {
  switch (kind) {
    case NoiseKind::Zero: return "zero";
    case NoiseKind::Gaussian: return "gaussian";
    case NoiseKind::Uniform: return "uniform";
    case NoiseKind::SignAlternating: return "sign_alternating";
    case NoiseKind::ConstantBias: return "constant_bias";
    case NoiseKind::Precommitted: return "precommitted_sequence";
  }
  return "unknown";
}

NoiseModel NoiseModel::gaussian(double sigma) { return with(NoiseKind::Gaussian, sigma); }
NoiseModel NoiseModel::uniform(double sigma) { return with(NoiseKind::Uniform, sigma); }
NoiseModel NoiseModel::sign_alternating(double sigma) {
  return with(NoiseKind::SignAlternating, sigma);
}
NoiseModel NoiseModel::constant_bias(double sigma) { return with(NoiseKind::ConstantBias, sigma); }

NoiseModel NoiseModel::precommitted(std::vector<double> values, double sigma) {
  double largest = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::Parameter, "precommitted noise must be finite");
    largest = std::max(largest, std::abs(v));
  }
  if (sigma < 0.0) sigma = largest;
  if (largest > sigma) {
    throw Error(ErrorKind::Parameter, "precommitted noise value exceeds sigma");
  }
  NoiseModel m = with(NoiseKind::Precommitted, sigma);
  m.sequence = std::move(values);
  return m;
}

double sample_noise(const NoiseModel& model, std::uint64_t t, std::uint64_t agent, NoiseDraw which,
                    std::uint64_t seed) {
  if (t < 1) throw Error(ErrorKind::Parameter, "noise time index starts at 1");
  switch (model.kind) {
    case NoiseKind::Zero:
      return 0.0;
    case NoiseKind::Gaussian:
    case NoiseKind::Uniform: {
      const Purpose purpose = which == NoiseDraw::First ? Purpose::NoiseFirst : Purpose::NoiseSecond;
      RandomStream stream(seed, {purpose, agent, t});
      if (model.kind == NoiseKind::Uniform) {
        return std::sqrt(3.0) * model.sigma * sample_interval(stream);
      }
      if (model.sigma == 0.0) return 0.0;
      std::normal_distribution<double> normal(0.0, model.sigma);
      return normal(stream);
    }
    case NoiseKind::SignAlternating:
      return (t + agent) % 2 == 1 ? model.sigma : -model.sigma;
    case NoiseKind::ConstantBias:
      return model.sigma;
    case NoiseKind::Precommitted: {
      const std::uint64_t index = 2 * (t - 1) + static_cast<std::uint64_t>(which);
      if (index >= model.sequence.size()) {
        throw Error(ErrorKind::SequenceExhausted,
                    "precommitted noise exhausted at t=" + std::to_string(t));
      }
      return model.sequence[index];
    }
  }
  return 0.0;
}

}  // namespace dzo
