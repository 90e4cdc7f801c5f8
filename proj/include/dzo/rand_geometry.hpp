#pragma once

#include <cstdint>
#include <limits>

#include <Eigen/Core>

namespace dzo {

/// Purpose tags keep randomness for different roles in disjoint streams.
enum class Purpose : std::uint32_t {
  Radius = 1,       // r_{i,t}
  Direction = 2,    // zeta_{i,t}
  NoiseFirst = 3,   // xi_{i,t}
  NoiseSecond = 4,  // xi'_{i,t}
  Init = 5,
  Graph = 6,
  Objective = 7,
  Sampling = 8,     // verification sampling over Theta
  Surrogate = 9,    // ball samples for surrogate values
  Test = 10,
};

struct StreamLabel {
  Purpose purpose = Purpose::Test;
  std::uint64_t agent = 0;
  std::uint64_t time = 0;

  friend bool operator==(const StreamLabel&, const StreamLabel&) = default;
};

/// Counter-based random stream. The key is a hash of (master_seed, label);
/// draw k is SplitMix64(key + k * gamma), so any (seed, label, call index)
/// reproduces bit-identical output no matter which thread asks for it.
///
/// Satisfies UniformRandomBitGenerator, so it can drive <random>
/// distributions directly.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t master_seed, StreamLabel label) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() noexcept;

  std::uint64_t master_seed() const noexcept { return seed_; }
  const StreamLabel& label() const noexcept { return label_; }
  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t calls() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  StreamLabel label_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer, exposed for hashing configs and labels.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Uniform scalar on [-1, 1].
double sample_interval(RandomStream& stream) noexcept;

/// Uniform point on the unit sphere in R^d (normalized Gaussian vector).
Eigen::VectorXd sample_sphere(RandomStream& stream, Eigen::Index d);

/// In-place variant used by the hot loops; `out` must have size d >= 1.
void sample_sphere_into(RandomStream& stream, Eigen::Ref<Eigen::VectorXd> out);

/// Uniform point in the unit ball in R^d (sphere sample scaled by U^{1/d}).
Eigen::VectorXd sample_ball(RandomStream& stream, Eigen::Index d);

}  // namespace dzo
