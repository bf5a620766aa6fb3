#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "geokrig/types.hpp"

namespace geokrig {

/// One distance bin of an empirical semivariogram. semivariance is NaN while
/// pair_count is zero.
struct LagBin {
  double lag_lo = 0.0;
  double lag_hi = 0.0;
  double lag_center = 0.0;
  double semivariance = 0.0;  // m^2, sum / pair_count
  double sum = 0.0;           // accumulated half squared differences
  std::size_t pair_count = 0;
};

/// Directional restriction: separation azimuths (degrees clockwise from
/// north, folded modulo 180) within tolerance_deg of azimuth_deg.
struct Direction {
  double azimuth_deg = 0.0;
  double tolerance_deg = 1.0;
};

/// Binned lag / semivariance / pair-count table over [0, max_lag).
struct EmpiricalSemivariogram {
  std::vector<LagBin> bins;  // contiguous, sorted, covering [0, max_lag)
  double bin_width = 0.0;
  double max_lag = 0.0;
  std::optional<Direction> direction;
  std::size_t coincident_pairs = 0;  // zero-distance pairs, excluded from bins

  std::size_t populated_bins() const {
    std::size_t n = 0;
    for (const auto& b : bins) n += (b.pair_count > 0) ? 1 : 0;
    return n;
  }
};

/// Accumulation contract: the pair triangle is split into fixed chunks of
/// this many outer indices; per-chunk partial sums (accumulated in ascending
/// pair order) are merged in chunk order. Results are therefore bit-identical
/// for any thread count.
constexpr std::size_t kPairChunkRows = 64;

/// Omnidirectional empirical semivariogram: for every unordered sample pair
/// closer than max_lag, half the squared value difference is accumulated into
/// the bin containing the pair distance.
EmpiricalSemivariogram empirical(std::span<const Sample> samples, double bin_width,
                                 double max_lag);

/// Directional variant: a pair contributes only when the azimuth of its
/// separation vector (folded modulo 180 degrees) lies within tolerance_deg of
/// azimuth_deg. The angular window is half-open, [-tol, +tol), so tolerance
/// windows can tile [0, 180) without double counting.
EmpiricalSemivariogram empirical_directional(std::span<const Sample> samples, double bin_width,
                                             double max_lag, double azimuth_deg,
                                             double tolerance_deg);

/// Samples matching every provided criterion, original order preserved.
std::vector<Sample> filter_samples(std::span<const Sample> samples,
                                   std::optional<BeamClass> beam,
                                   std::optional<TrackAzimuthClass> azimuth_class);

/// Uniform random subsample without replacement (deterministic under seed).
/// Returns the input unchanged when n >= samples.size().
std::vector<Sample> subsample(std::span<const Sample> samples, std::size_t n,
                              std::uint64_t seed);

/// Ratio-based periodicity diagnostic: mean over multiples k*period of the
/// semivariance at the multiple divided by the local off-peak baseline.
struct PeriodicityScore {
  double period = 0.0;
  double score = 0.0;              // 1 = flat, > 1 = peaks at the period
  std::vector<double> peak_lags;   // multiples whose ratio exceeds 1
};

PeriodicityScore periodicity_score(const EmpiricalSemivariogram& sv, double period);

/// Azimuth of a separation vector in degrees clockwise from north, folded to
/// [0, 180) because semivariance is symmetric in pair order.
double fold_azimuth_deg(double dx, double dy);

}  // namespace geokrig
