#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "geokrig/semivariogram.hpp"
#include "geokrig/synthetic.hpp"
#include "geokrig/variogram_fit.hpp"
#include "test_helpers.hpp"

using namespace geokrig;
using testutil::approx_rel;

namespace {

GediPatternSpec one_pass_spec() {
  GediPatternSpec spec;
  spec.extent = make_aabb({0, 0}, {5000, 5000});
  spec.passes = {{TrackAzimuthClass::Nwd, 0.0}};
  spec.seed = 7;
  return spec;
}

double normal_cdf(double x, double mean, double sd) {
  return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

double ks_statistic(std::vector<double> values, double mean, double sd) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = normal_cdf(values[i], mean, sd);
    ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
    ks = std::max(ks, std::abs(f - static_cast<double>(i + 1) / n));
  }
  return ks;
}

// Criterion-5-style scenario: continuous 600-m lattice of NWD passes with
// per-track value offsets and the coverage-beam bias.
GediPatternSpec lattice_spec(std::uint64_t seed) {
  GediPatternSpec spec;
  spec.extent = make_aabb({0, 0}, {10000, 10000});
  spec.footprint_spacing_along = 300.0;
  spec.passes = {{TrackAzimuthClass::Nwd, -4800.0},
                 {TrackAzimuthClass::Nwd, 0.0},
                 {TrackAzimuthClass::Nwd, 4800.0}};
  spec.per_track_offset_sd = 3.5;
  spec.seed = seed;
  return spec;
}

std::vector<Sample> observe_grf(const GediPatternSpec& spec, std::uint64_t grf_seed) {
  const auto pattern = generate_pattern(spec);
  GrfSpec grf{{VariogramKind::Exponential, 2.0, 20.0, 2500.0}, 30.0, grf_seed};
  std::vector<Point2D> pts(pattern.size());
  for (std::size_t i = 0; i < pattern.size(); ++i) pts[i] = pattern[i].position;
  return observe(pattern, sample_grf_at(pts, grf), spec);
}

}  // namespace

TEST_CASE("generate_pattern: swath geometry of a single pass") {
  const auto pattern = generate_pattern(one_pass_spec());
  REQUIRE(!pattern.empty());

  // 8 tracks, classes P P C C P P C C by track order.
  std::vector<std::int64_t> track_ids;
  for (const Sample& s : pattern)
    if (track_ids.empty() || track_ids.back() != s.track_id) track_ids.push_back(s.track_id);
  CHECK(track_ids.size() == 8);
  for (const Sample& s : pattern) {
    const int beam = static_cast<int>(s.track_id % 8);
    CHECK(s.beam == ((beam % 4 < 2) ? BeamClass::Power : BeamClass::Coverage));
    CHECK(s.azimuth_class == TrackAzimuthClass::Nwd);
  }

  // Consecutive footprints 60 m apart along the 36-degree direction.
  for (std::size_t i = 1; i < pattern.size(); ++i) {
    if (pattern[i].track_id != pattern[i - 1].track_id) continue;
    CHECK(distance(pattern[i].position, pattern[i - 1].position) ==
          doctest::Approx(60.0).epsilon(1e-9));
  }

  // Perpendicular separation between adjacent tracks is the 600-m spacing;
  // the full swath spans (8 - 1) * 600 = 4200 m.
  const double az = 36.0 * std::numbers::pi / 180.0;
  const double cross_x = std::cos(az), cross_y = -std::sin(az);
  auto cross_coord = [&](Point2D p) { return p.x * cross_x + p.y * cross_y; };
  std::vector<double> offsets(8, NAN);
  for (const Sample& s : pattern) offsets[static_cast<std::size_t>(s.track_id)] = cross_coord(s.position);
  for (int t = 1; t < 8; ++t)
    CHECK(offsets[t] - offsets[t - 1] == doctest::Approx(600.0).epsilon(1e-9));
  CHECK(offsets[7] - offsets[0] == doctest::Approx(4200.0).epsilon(1e-9));
}

TEST_CASE("generate_pattern: due-north pass keeps x fixed per track") {
  GediPatternSpec spec = one_pass_spec();
  spec.azimuth_nwd_deg = 0.0;
  const auto pattern = generate_pattern(spec);
  REQUIRE(!pattern.empty());
  std::vector<double> track_x(8, NAN);
  for (const Sample& s : pattern) {
    double& x = track_x[static_cast<std::size_t>(s.track_id)];
    if (std::isnan(x))
      x = s.position.x;
    else
      CHECK(s.position.x == doctest::Approx(x).epsilon(1e-12));
    CHECK(spec.extent.contains(s.position));
  }
}

TEST_CASE("generate_pattern: jittered tracks stay within 3 sigma of the spacing") {
  GediPatternSpec spec = one_pass_spec();
  spec.per_track_offset_sd = 4.0;
  const auto pattern = generate_pattern(spec);
  const double az = 36.0 * std::numbers::pi / 180.0;
  auto cross_coord = [&](Point2D p) {
    return p.x * std::cos(az) - p.y * std::sin(az);
  };
  std::vector<double> offsets(8, NAN);
  for (const Sample& s : pattern) offsets[static_cast<std::size_t>(s.track_id)] = cross_coord(s.position);
  for (int t = 1; t < 8; ++t)
    CHECK(std::abs(offsets[t] - offsets[t - 1] - 600.0) <= 3.0 * 4.0 * 2.0);
}

TEST_CASE("generate_pattern: tiny extent yields no footprints") {
  GediPatternSpec spec = one_pass_spec();
  spec.extent = make_aabb({2499, 2499}, {2501, 2501});
  spec.passes = {{TrackAzimuthClass::Nwd, 2000.0}};  // swath far from the extent
  CHECK(generate_pattern(spec).empty());
}

TEST_CASE("determinism: identical specs and seeds reproduce bit-identical synthetic data") {
  const GediPatternSpec spec = lattice_spec(99);
  const auto a = observe_grf(spec, 100);
  const auto b = observe_grf(spec, 100);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].position.x == b[i].position.x);
    CHECK(a[i].position.y == b[i].position.y);
    CHECK(a[i].value == b[i].value);
    CHECK(a[i].track_id == b[i].track_id);
  }
}

TEST_CASE("sample_grf_at: pure nugget realizations are iid normal") {
  std::vector<Point2D> pts;
  Rng rng(5, 11);
  for (int i = 0; i < 2000; ++i)
    pts.push_back({rng.uniform() * 5000, rng.uniform() * 5000});
  GrfSpec spec{{VariogramKind::Exponential, 9.0, 9.0, 1000.0}, 12.0, 77};
  const auto values = sample_grf_at(pts, spec);

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= values.size();
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= values.size();
  CHECK(approx_rel(var, 9.0, 0.15));
  CHECK(ks_statistic(values, 12.0, 3.0) < 0.05);
}

TEST_CASE("sample_grf_at: single point reproducible and cap enforced") {
  const std::vector<Point2D> one = {{100, 100}};
  GrfSpec spec{{VariogramKind::Exponential, 2.0, 20.0, 2500.0}, 30.0, 123};
  const auto a = sample_grf_at(one, spec);
  const auto b = sample_grf_at(one, spec);
  CHECK(a[0] == b[0]);

  GrfSpec capped = spec;
  capped.max_points = 10;
  const std::vector<Point2D> many(11, Point2D{0, 0});
  CHECK_THROWS_AS(sample_grf_at(many, capped), ArgumentError);
}

TEST_CASE("sample_grf_at: empirical semivariogram of a realization recovers the model") {
  Rng pos_rng(43, 999);
  std::vector<Point2D> pts(2000);
  for (auto& p : pts) p = Point2D{pos_rng.uniform() * 8000, pos_rng.uniform() * 8000};
  GrfSpec spec{{VariogramKind::Exponential, 2.0, 20.0, 2500.0}, 30.0, 43};
  const auto values = sample_grf_at(pts, spec);
  std::vector<Sample> samples(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    samples[i].position = pts[i];
    samples[i].value = values[i];
  }
  const FitResult fr = fit(empirical(samples, 100, 5000), VariogramKind::Exponential);
  CHECK(approx_rel(fr.model.range, 2500.0, 0.25));
  CHECK(approx_rel(fr.model.sill, 20.0, 0.15));
}

TEST_CASE("observe: identity and constant-bias observation") {
  GediPatternSpec spec = one_pass_spec();
  spec.coverage_bias = 0.0;
  const auto pattern = generate_pattern(spec);
  const auto exact = observe(pattern, [](Point2D) { return 30.0; }, spec);
  for (const Sample& s : exact) CHECK(s.value == 30.0);

  spec.coverage_bias = -3.0;
  const auto biased = observe(pattern, [](Point2D) { return 30.0; }, spec);
  for (const Sample& s : biased)
    CHECK(s.value == (s.beam == BeamClass::Power ? 30.0 : 27.0));

  CHECK_THROWS_AS(observe(pattern, std::vector<double>(3, 1.0), spec), ArgumentError);
}

TEST_CASE("observe: beam-type bias produces the 600-m periodicity signature") {
  // All-beam periodicity exceeds the power-only score by a wide factor, and
  // the all-beam score itself flags the acquisition pattern.
  const GediPatternSpec spec = lattice_spec(523);
  const auto observed = observe_grf(spec, 524);
  const auto power = filter_samples(observed, BeamClass::Power, std::nullopt);

  const double score_all = periodicity_score(empirical(observed, 88, 1600), 600).score;
  const double score_power = periodicity_score(empirical(power, 88, 1600), 600).score;
  CHECK(score_all >= 1.2);
  CHECK(score_all >= 1.2 * score_power);
}

TEST_CASE("observe: cross-track periodicity exceeds along-track with repeat passes") {
  GediPatternSpec spec = lattice_spec(523);
  spec.passes.push_back({TrackAzimuthClass::Nwd, 18.0});
  spec.passes.push_back({TrackAzimuthClass::Nwd, -4800.0 + 31.0});
  spec.passes.push_back({TrackAzimuthClass::Nwd, 4800.0 - 27.0});
  const auto observed = observe_grf(spec, 524);

  const double along =
      periodicity_score(empirical_directional(observed, 88, 1600, 36.0, 2.0), 600).score;
  const double cross =
      periodicity_score(empirical_directional(observed, 88, 1600, 126.0, 2.0), 600).score;
  CHECK(cross > along);
}
