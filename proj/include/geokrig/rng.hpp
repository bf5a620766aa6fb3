#pragma once

#include <cmath>
#include <cstdint>

namespace geokrig {

/// Counter-based random numbers built on the splitmix64 finalizer. Every
/// draw is a pure function of (seed, stream, counter), so generation order
/// and thread layout cannot change the values assigned to a given key.

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t keyed_u64(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return mix64(mix64(mix64(seed) ^ stream) ^ counter);
}

/// Uniform in (0, 1]; never returns 0 so it is safe under log().
inline double keyed_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return ((keyed_u64(seed, stream, counter) >> 11) + 1) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on two keyed uniforms.
inline double keyed_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const double u1 = keyed_uniform(seed, stream, 2 * counter);
  const double u2 = keyed_uniform(seed, stream, 2 * counter + 1);
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

/// Sequential convenience wrapper over the keyed generator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64() { return keyed_u64(seed_, stream_, counter_++); }
  double uniform() { return keyed_uniform(seed_, stream_, counter_++); }
  double normal() { return keyed_normal(seed_, stream_, counter_++); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

/// Stream labels keeping independent uses of one seed uncorrelated.
namespace rng_stream {
constexpr std::uint64_t kGrf = 0x67726600;            // gaussian random field draws
constexpr std::uint64_t kTrackJitter = 0x6a697400;    // cross-track position jitter
constexpr std::uint64_t kTrackValue = 0x74726b00;     // per-track value offsets
constexpr std::uint64_t kObservationNoise = 0x6e7300; // per-footprint noise
constexpr std::uint64_t kSubsample = 0x73756200;      // semivariogram subsampling
}  // namespace rng_stream

}  // namespace geokrig
