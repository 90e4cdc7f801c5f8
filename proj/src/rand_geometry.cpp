#include "dzo/rand_geometry.hpp"

#include <cmath>
#include <random>

#include "dzo/error.hpp"

namespace dzo {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t derive_key(std::uint64_t seed, const StreamLabel& label) noexcept {
  std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
  h = mix64(h ^ (static_cast<std::uint64_t>(label.purpose) * kGamma));
  h = mix64(h ^ mix64(label.agent + 0xbb67ae8584caa73bULL));
  h = mix64(h ^ mix64(label.time + 0x3c6ef372fe94f82bULL));
  return h;
}

void check_dimension(Eigen::Index d) {
  if (d < 1) throw Error(ErrorKind::InvalidDimension, "dimension must be >= 1");
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t master_seed, StreamLabel label) noexcept
    : seed_(master_seed), label_(label), key_(derive_key(master_seed, label)) {}

RandomStream::result_type RandomStream::operator()() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double RandomStream::unit() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double sample_interval(RandomStream& stream) noexcept {
  // 2u - 1 with u on the 2^-53 grid of [0,1); the endpoint 1 is added back by
  // symmetry so the support is the closed interval.
  const std::uint64_t bits = stream();
  const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
  return (bits & 1U) ? -(2.0 * u - 1.0) : (2.0 * u - 1.0);
}

void sample_sphere_into(RandomStream& stream, Eigen::Ref<Eigen::VectorXd> out) {
  check_dimension(out.size());
  double norm2 = 0.0;
  do {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index j = 0; j < out.size(); ++j) out[j] = normal(stream);
    norm2 = out.squaredNorm();
  } while (!(norm2 > 0.0));
  out /= std::sqrt(norm2);
}

Eigen::VectorXd sample_sphere(RandomStream& stream, Eigen::Index d) {
  check_dimension(d);
  Eigen::VectorXd v(d);
  sample_sphere_into(stream, v);
  return v;
}

Eigen::VectorXd sample_ball(RandomStream& stream, Eigen::Index d) {
  Eigen::VectorXd v = sample_sphere(stream, d);
  const double u = stream.unit();
  v *= std::pow(u, 1.0 / static_cast<double>(d));
  return v;
}

}  // namespace dzo
