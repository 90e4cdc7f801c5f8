#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace dzo {

enum class NoiseKind { Zero, Gaussian, Uniform, SignAlternating, ConstantBias, Precommitted };

NoiseKind parse_noise_kind(std::string_view name);
std::string_view to_string(NoiseKind kind) noexcept;

/// Query noise with E[xi^2] <= sigma^2. Deterministic kinds are fixed before
/// the run and never look at the query point, so they stay independent of
/// the randomization (r, zeta).
struct NoiseModel {
  NoiseKind kind = NoiseKind::Zero;
  double sigma = 0.0;
  std::vector<double> sequence;  // precommitted values, index 2(t-1) + which

  static NoiseModel zero() { return {}; }
  static NoiseModel gaussian(double sigma);
  static NoiseModel uniform(double sigma);
  /// +sigma when t + agent is odd, -sigma when even (t = 3, agent 0 gives +sigma).
  static NoiseModel sign_alternating(double sigma);
  static NoiseModel constant_bias(double sigma);
  /// sigma defaults to max |value| when negative.
  static NoiseModel precommitted(std::vector<double> values, double sigma = -1.0);
};

enum class NoiseDraw : std::uint32_t { First = 0, Second = 1 };

/// xi_{agent,t} (First) or xi'_{agent,t} (Second). Random kinds read the
/// NoiseFirst/NoiseSecond purpose stream of `seed` at label (agent, t).
double sample_noise(const NoiseModel& model, std::uint64_t t, std::uint64_t agent, NoiseDraw which,
                    std::uint64_t seed);

}  // namespace dzo
