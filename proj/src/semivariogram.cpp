#include "geokrig/semivariogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "geokrig/rng.hpp"
#include "geokrig/threading.hpp"

namespace geokrig {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<LagBin> make_bins(double bin_width, double max_lag) {
  std::vector<LagBin> bins;
  const std::size_t n = static_cast<std::size_t>(std::ceil(max_lag / bin_width));
  bins.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    LagBin b;
    b.lag_lo = i * bin_width;
    b.lag_hi = std::min((i + 1) * bin_width, max_lag);
    b.lag_center = 0.5 * (b.lag_lo + b.lag_hi);
    b.semivariance = kNaN;
    bins.push_back(b);
  }
  return bins;
}

struct PartialBins {
  std::vector<double> sums;
  std::vector<std::size_t> counts;
  std::size_t coincident = 0;
};

// Signed angular difference folded to [-90, 90).
double fold_delta_deg(double a, double b) {
  double d = std::fmod(a - b, 180.0);
  if (d < -90.0) d += 180.0;
  if (d >= 90.0) d -= 180.0;
  return d;
}

EmpiricalSemivariogram accumulate(std::span<const Sample> samples, double bin_width,
                                  double max_lag, std::optional<Direction> direction) {
  if (samples.size() < 2) throw ArgumentError("semivariogram: need at least 2 samples");
  if (!(bin_width > 0.0)) throw ArgumentError("semivariogram: bin_width must be > 0");
  if (!(max_lag >= bin_width)) throw ArgumentError("semivariogram: max_lag must be >= bin_width");
  if (direction && !(direction->tolerance_deg > 0.0 && direction->tolerance_deg <= 90.0))
    throw ArgumentError("semivariogram: tolerance must be in (0, 90] degrees");

  EmpiricalSemivariogram sv;
  sv.bin_width = bin_width;
  sv.max_lag = max_lag;
  sv.direction = direction;
  sv.bins = make_bins(bin_width, max_lag);

  const std::size_t n = samples.size();
  const std::size_t n_bins = sv.bins.size();

  // Fixed-size chunks over the outer pair index: per-chunk partial sums are
  // merged in chunk order, so results do not depend on the thread count.
  const std::size_t n_chunks = (n + kPairChunkRows - 1) / kPairChunkRows;
  std::vector<PartialBins> partials(n_chunks);

  parallel_chunks(n, kPairChunkRows, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    PartialBins local;
    local.sums.assign(n_bins, 0.0);
    local.counts.assign(n_bins, 0);
    for (std::size_t i = begin; i < end; ++i) {
      const Sample& a = samples[i];
      for (std::size_t j = i + 1; j < n; ++j) {
        const Sample& b = samples[j];
        const double dx = b.position.x - a.position.x;
        const double dy = b.position.y - a.position.y;
        const double d = std::sqrt(dx * dx + dy * dy);
        if (d == 0.0) {
          ++local.coincident;
          continue;
        }
        if (d >= max_lag) continue;
        if (direction) {
          const double az = fold_azimuth_deg(dx, dy);
          const double delta = fold_delta_deg(az, direction->azimuth_deg);
          if (delta < -direction->tolerance_deg || delta >= direction->tolerance_deg) continue;
        }
        const std::size_t bin = static_cast<std::size_t>(d / bin_width);
        const double dv = a.value - b.value;
        local.sums[bin] += 0.5 * dv * dv;
        ++local.counts[bin];
      }
    }
    partials[chunk] = std::move(local);
  });

  std::vector<double> sums(n_bins, 0.0);
  std::vector<std::size_t> counts(n_bins, 0);
  for (const PartialBins& p : partials) {
    for (std::size_t b = 0; b < n_bins; ++b) {
      sums[b] += p.sums[b];
      counts[b] += p.counts[b];
    }
    sv.coincident_pairs += p.coincident;
  }
  for (std::size_t b = 0; b < n_bins; ++b) {
    sv.bins[b].pair_count = counts[b];
    sv.bins[b].sum = sums[b];
    sv.bins[b].semivariance = counts[b] > 0 ? sums[b] / static_cast<double>(counts[b]) : kNaN;
  }
  return sv;
}

}  // namespace

double fold_azimuth_deg(double dx, double dy) {
  double az = std::atan2(dx, dy) * (180.0 / std::numbers::pi);
  az = std::fmod(az + 360.0, 180.0);
  return az;
}

EmpiricalSemivariogram empirical(std::span<const Sample> samples, double bin_width,
                                 double max_lag) {
  return accumulate(samples, bin_width, max_lag, std::nullopt);
}

EmpiricalSemivariogram empirical_directional(std::span<const Sample> samples, double bin_width,
                                             double max_lag, double azimuth_deg,
                                             double tolerance_deg) {
  return accumulate(samples, bin_width, max_lag, Direction{azimuth_deg, tolerance_deg});
}

std::vector<Sample> filter_samples(std::span<const Sample> samples,
                                   std::optional<BeamClass> beam,
                                   std::optional<TrackAzimuthClass> azimuth_class) {
  std::vector<Sample> out;
  out.reserve(samples.size());
  for (const Sample& s : samples) {
    if (beam && s.beam != *beam) continue;
    if (azimuth_class && s.azimuth_class != *azimuth_class) continue;
    out.push_back(s);
  }
  return out;
}

std::vector<Sample> subsample(std::span<const Sample> samples, std::size_t n,
                              std::uint64_t seed) {
  if (n >= samples.size()) return {samples.begin(), samples.end()};
  // Partial Fisher-Yates over an index vector; keeps input order untouched.
  std::vector<std::size_t> idx(samples.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Rng rng(seed, rng_stream::kSubsample);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  std::vector<Sample> out;
  out.reserve(n);
  for (std::size_t i : idx) out.push_back(samples[i]);
  return out;
}

PeriodicityScore periodicity_score(const EmpiricalSemivariogram& sv, double period) {
  if (!(period > sv.bin_width))
    throw ArgumentError("periodicity: period must exceed the bin width");

  double lo_populated = kNaN, hi_populated = kNaN;
  std::size_t populated = 0;
  for (const LagBin& b : sv.bins) {
    if (b.pair_count == 0) continue;
    if (populated == 0) lo_populated = b.lag_lo;
    hi_populated = b.lag_hi;
    ++populated;
  }
  if (populated < 3 || !(hi_populated - lo_populated >= 2.0 * period)) {
    std::ostringstream msg;
    msg << "periodicity: need >= 3 populated bins spanning at least " << 2.0 * period
        << " m; have " << populated << " bins";
    if (populated > 0) msg << " spanning " << (hi_populated - lo_populated) << " m";
    throw DataError(msg.str());
  }

  // Nearest populated bin to a target lag, by center distance (lower center
  // wins ties).
  auto nearest_populated = [&](double target) -> const LagBin& {
    const LagBin* best = nullptr;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const LagBin& b : sv.bins) {
      if (b.pair_count == 0) continue;
      const double dist = std::abs(b.lag_center - target);
      if (dist < best_dist) {
        best_dist = dist;
        best = &b;
      }
    }
    return *best;
  };

  PeriodicityScore result;
  result.period = period;
  std::vector<double> missing;
  double ratio_sum = 0.0;
  std::size_t n_multiples = 0;

  for (std::size_t k = 1;; ++k) {
    const double m = static_cast<double>(k) * period;
    if (!(m < sv.max_lag)) break;
    const std::size_t bin = static_cast<std::size_t>(m / sv.bin_width);
    if (bin >= sv.bins.size()) break;
    if (sv.bins[bin].pair_count == 0) {
      missing.push_back(m);
      continue;
    }
    const double peak = sv.bins[bin].semivariance;
    const double base_lo = nearest_populated(m - 0.5 * period).semivariance;
    const double base_hi = nearest_populated(m + 0.5 * period).semivariance;
    const double baseline = 0.5 * (base_lo + base_hi);
    double ratio;
    if (baseline > 0.0)
      ratio = peak / baseline;
    else
      ratio = (peak <= 0.0) ? 1.0 : std::numeric_limits<double>::infinity();
    ratio_sum += ratio;
    ++n_multiples;
    if (ratio > 1.0) result.peak_lags.push_back(m);
  }

  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "periodicity: unpopulated bins at required lags:";
    for (double m : missing) msg << " " << m;
    throw DataError(msg.str());
  }
  if (n_multiples == 0) throw DataError("periodicity: no multiple of the period below max_lag");

  result.score = ratio_sum / static_cast<double>(n_multiples);
  return result;
}

}  // namespace geokrig
