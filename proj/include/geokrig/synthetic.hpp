#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "geokrig/types.hpp"
#include "geokrig/variogram_model.hpp"

namespace geokrig {

/// Stationary Gaussian random field with covariance sill - gamma(h).
struct GrfSpec {
  VariogramModel model;
  double mean = 0.0;
  std::uint64_t seed = 0;
  std::size_t max_points = 4000;  // dense-factorization cap
};

/// One realization of the field at the requested points, via Cholesky
/// factorization of the dense covariance matrix. Deterministic given the
/// seed. Throws NumericError when the covariance matrix is not positive
/// semidefinite after jitter escalation (possible for the circular and
/// linear kinds).
std::vector<double> sample_grf_at(std::span<const Point2D> points, const GrfSpec& spec);

struct GediPass {
  TrackAzimuthClass azimuth_class = TrackAzimuthClass::Nwd;
  double cross_offset = 0.0;  // meters, shifts the whole 8-beam swath
};

/// Acquisition geometry replay: parallel beam tracks per pass, footprints
/// along each track, power/coverage beams interleaved P P C C across the
/// swath, observation effects keyed to beam class and track.
struct GediPatternSpec {
  Aabb extent;
  double track_spacing_cross = 600.0;    // meters between adjacent beam tracks
  double footprint_spacing_along = 60.0; // meters between footprints on a track
  int beams_per_pass = 8;                // alternating 4 power / 4 coverage
  double azimuth_nwd_deg = 36.0;         // degrees clockwise from north
  double azimuth_swd_deg = 144.0;
  std::vector<GediPass> passes;
  double coverage_bias = -3.0;     // meters added to coverage-beam observations
  double coverage_noise_sd = 0.0;  // extra coverage-beam noise
  double per_track_offset_sd = 0.0;  // cross-track position jitter and per-track value offsets
  std::uint64_t seed = 0;
};

/// Footprint positions and metadata (values unset). Tracks that miss the
/// extent contribute nothing; an extent too small for any footprint yields
/// an empty list.
std::vector<Sample> generate_pattern(const GediPatternSpec& spec);

/// Observation of a truth field on a generated pattern. Power beams observe
/// the truth exactly; coverage beams add coverage_bias and
/// N(0, coverage_noise_sd^2) noise; when per_track_offset_sd > 0 every track
/// additionally carries its own value offset.
std::vector<Sample> observe(std::span<const Sample> pattern,
                            const std::function<double(Point2D)>& truth_at,
                            const GediPatternSpec& spec);

/// Same observation effects with precomputed truth values aligned to the
/// pattern (for joint-realization workflows).
std::vector<Sample> observe(std::span<const Sample> pattern, std::span<const double> truth,
                            const GediPatternSpec& spec);

}  // namespace geokrig
