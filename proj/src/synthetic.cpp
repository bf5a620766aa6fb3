#include "geokrig/synthetic.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "geokrig/rng.hpp"

namespace geokrig {

std::vector<double> sample_grf_at(std::span<const Point2D> points, const GrfSpec& spec) {
  validate(spec.model);
  const std::size_t n = points.size();
  if (n == 0) return {};
  if (n > spec.max_points) {
    std::ostringstream msg;
    msg << "grf: " << n << " points exceeds the dense-factorization cap of " << spec.max_points;
    throw ArgumentError(msg.str());
  }

  Eigen::MatrixXd cov(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    cov(i, i) = spec.model.sill;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = covariance_from_model(spec.model, distance(points[i], points[j]));
      cov(i, j) = c;
      cov(j, i) = c;
    }
  }

  Eigen::LLT<Eigen::MatrixXd> llt;
  bool factored = false;
  for (double step : {0.0, 1e-12, 1e-10, 1e-8, 1e-6}) {
    Eigen::MatrixXd trial = cov;
    if (step > 0.0)
      for (std::size_t i = 0; i < n; ++i) trial(i, i) += step * spec.model.sill;
    llt.compute(trial);
    if (llt.info() == Eigen::Success) {
      factored = true;
      break;
    }
  }
  if (!factored) {
    std::ostringstream msg;
    msg << "grf: covariance matrix for kind '" << to_string(spec.model.kind)
        << "' is not positive semidefinite after jitter escalation";
    throw NumericError(msg.str());
  }

  Eigen::VectorXd normals(n);
  for (std::size_t i = 0; i < n; ++i)
    normals(i) = keyed_normal(spec.seed, rng_stream::kGrf, i);

  const Eigen::VectorXd field = llt.matrixL() * normals;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = spec.mean + field(i);
  return out;
}

namespace {

double pass_azimuth_deg(const GediPatternSpec& spec, TrackAzimuthClass cls) {
  return cls == TrackAzimuthClass::Nwd ? spec.azimuth_nwd_deg : spec.azimuth_swd_deg;
}

}  // namespace

std::vector<Sample> generate_pattern(const GediPatternSpec& spec) {
  if (!(spec.track_spacing_cross > 0.0) || !(spec.footprint_spacing_along > 0.0))
    throw ArgumentError("gedi pattern: spacings must be > 0");
  if (spec.beams_per_pass < 2 || spec.beams_per_pass % 2 != 0)
    throw ArgumentError("gedi pattern: beams_per_pass must be even and >= 2");
  if (spec.extent.min.x > spec.extent.max.x || spec.extent.min.y > spec.extent.max.y)
    throw ArgumentError("gedi pattern: invalid extent");

  const Point2D center{0.5 * (spec.extent.min.x + spec.extent.max.x),
                       0.5 * (spec.extent.min.y + spec.extent.max.y)};
  const Point2D corners[4] = {spec.extent.min,
                              {spec.extent.max.x, spec.extent.min.y},
                              spec.extent.max,
                              {spec.extent.min.x, spec.extent.max.y}};

  std::vector<Sample> out;
  std::int64_t track_id = 0;
  for (std::size_t pass_idx = 0; pass_idx < spec.passes.size(); ++pass_idx) {
    const GediPass& pass = spec.passes[pass_idx];
    const double az_rad =
        pass_azimuth_deg(spec, pass.azimuth_class) * std::numbers::pi / 180.0;
    const double along_x = std::sin(az_rad), along_y = std::cos(az_rad);
    const double cross_x = std::cos(az_rad), cross_y = -std::sin(az_rad);

    for (int beam = 0; beam < spec.beams_per_pass; ++beam, ++track_id) {
      double offset = (beam - 0.5 * (spec.beams_per_pass - 1)) * spec.track_spacing_cross +
                      pass.cross_offset;
      if (spec.per_track_offset_sd > 0.0)
        offset += spec.per_track_offset_sd *
                  keyed_normal(spec.seed, rng_stream::kTrackJitter,
                               static_cast<std::uint64_t>(track_id));
      const Point2D line_origin{center.x + cross_x * offset, center.y + cross_y * offset};

      // Along-track parameter window covering the extent.
      double t_min = std::numeric_limits<double>::infinity();
      double t_max = -std::numeric_limits<double>::infinity();
      for (const Point2D& corner : corners) {
        const double t = (corner.x - line_origin.x) * along_x + (corner.y - line_origin.y) * along_y;
        t_min = std::min(t_min, t);
        t_max = std::max(t_max, t);
      }

      // Beams are interleaved P P C C across the swath.
      const BeamClass beam_class = (beam % 4 < 2) ? BeamClass::Power : BeamClass::Coverage;
      const long long k_lo =
          static_cast<long long>(std::ceil(t_min / spec.footprint_spacing_along));
      const long long k_hi =
          static_cast<long long>(std::floor(t_max / spec.footprint_spacing_along));
      for (long long k = k_lo; k <= k_hi; ++k) {
        const double t = static_cast<double>(k) * spec.footprint_spacing_along;
        const Point2D p{line_origin.x + along_x * t, line_origin.y + along_y * t};
        if (!spec.extent.contains(p)) continue;
        Sample s;
        s.position = p;
        s.beam = beam_class;
        s.azimuth_class = pass.azimuth_class;
        s.track_id = track_id;
        out.push_back(s);
      }
    }
  }
  return out;
}

namespace {

std::vector<Sample> apply_observation_effects(std::span<const Sample> pattern,
                                              const std::vector<double>& truth,
                                              const GediPatternSpec& spec) {
  std::vector<Sample> out(pattern.begin(), pattern.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double v = truth[i];
    if (spec.per_track_offset_sd > 0.0)
      v += spec.per_track_offset_sd *
           keyed_normal(spec.seed, rng_stream::kTrackValue,
                        static_cast<std::uint64_t>(out[i].track_id));
    if (out[i].beam == BeamClass::Coverage) {
      v += spec.coverage_bias;
      if (spec.coverage_noise_sd > 0.0)
        v += spec.coverage_noise_sd * keyed_normal(spec.seed, rng_stream::kObservationNoise, i);
    }
    out[i].value = v;
  }
  return out;
}

}  // namespace

std::vector<Sample> observe(std::span<const Sample> pattern,
                            const std::function<double(Point2D)>& truth_at,
                            const GediPatternSpec& spec) {
  std::vector<double> truth(pattern.size());
  for (std::size_t i = 0; i < pattern.size(); ++i) truth[i] = truth_at(pattern[i].position);
  return apply_observation_effects(pattern, truth, spec);
}

std::vector<Sample> observe(std::span<const Sample> pattern, std::span<const double> truth,
                            const GediPatternSpec& spec) {
  if (truth.size() != pattern.size())
    throw ArgumentError("observe: truth values must align with the pattern");
  return apply_observation_effects(pattern, {truth.begin(), truth.end()}, spec);
}

}  // namespace geokrig
