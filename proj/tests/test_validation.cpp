#include "doctest.h"

#include <cmath>
#include <limits>

#include "geokrig/validation.hpp"
#include "test_helpers.hpp"

using namespace geokrig;
using testutil::random_raster;
using testutil::random_samples;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("metrics: identity, constant offset, and errors") {
  const Raster ref = random_raster({0, 0}, 10, 15, 15, 10, 40, 3);
  const MetricSet same = metrics(ref, ref);
  CHECK(same.bias == 0.0);
  CHECK(same.rmse == 0.0);
  CHECK(same.n == ref.cell_count());

  Raster shifted = ref;
  for (int r = 0; r < ref.n_rows(); ++r)
    for (int c = 0; c < ref.n_cols(); ++c) shifted.at(r, c) += 2.0;
  const MetricSet off = metrics(shifted, ref);
  CHECK(off.bias == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(off.rmse == doctest::Approx(2.0).epsilon(1e-12));
  double ref_mean = 0.0;
  for (double v : ref.values()) ref_mean += v;
  ref_mean /= static_cast<double>(ref.cell_count());
  REQUIRE(off.rrmse.has_value());
  CHECK(*off.rrmse == doctest::Approx(2.0 / ref_mean).epsilon(1e-12));

  const Raster other_geom({0, 0}, 10, 15, 14);
  CHECK_THROWS_AS(metrics(other_geom, ref), ArgumentError);

  Raster all_nodata({0, 0}, 10, 2, 2);
  CHECK_THROWS_AS(metrics(all_nodata, all_nodata), DataError);
}

TEST_CASE("metrics: random rasters match a flat-loop recomputation") {
  const Raster ref = random_raster({50, 70}, 12, 20, 18, 5, 45, 5, 0.15);
  const Raster pred = random_raster({50, 70}, 12, 20, 18, 5, 45, 6, 0.1);

  double sum = 0, sq = 0, ref_sum = 0;
  std::size_t n = 0;
  for (int r = 0; r < ref.n_rows(); ++r)
    for (int c = 0; c < ref.n_cols(); ++c) {
      if (pred.is_nodata(r, c) || ref.is_nodata(r, c)) continue;
      const double e = pred.at(r, c) - ref.at(r, c);
      sum += e;
      sq += e * e;
      ref_sum += ref.at(r, c);
      ++n;
    }
  const MetricSet m = metrics(pred, ref);
  CHECK(m.n == n);
  CHECK(m.bias == doctest::Approx(sum / n).epsilon(1e-13));
  CHECK(m.rmse == doctest::Approx(std::sqrt(sq / n)).epsilon(1e-13));
  REQUIRE(m.rrmse.has_value());
  CHECK(*m.rrmse == doctest::Approx(std::sqrt(sq / n) / (ref_sum / n)).epsilon(1e-13));
}

TEST_CASE("proximity_analysis: infinity row equals plain metrics; saturation at R0") {
  const Raster ref = random_raster({0, 0}, 10, 12, 12, 10, 30, 7);
  const Raster pred = random_raster({0, 0}, 10, 12, 12, 10, 30, 8);

  // one sample per cell saturates every radius
  std::vector<Sample> everywhere;
  for (int r = 0; r < ref.n_rows(); ++r)
    for (int c = 0; c < ref.n_cols(); ++c) {
      Sample s;
      s.position = ref.cell_center(r, c);
      everywhere.push_back(s);
    }
  const std::vector<double> radii = {0.0, 50.0, kInf};
  const ProximityReport rep = proximity_analysis(pred, ref, everywhere, radii);
  REQUIRE(rep.rows.size() == 3);
  const MetricSet whole = metrics(pred, ref);
  for (const auto& row : rep.rows) {
    REQUIRE(row.metrics.has_value());
    CHECK(row.n == whole.n);
    CHECK(row.metrics->rmse == whole.rmse);
    CHECK(row.metrics->bias == whole.bias);
  }
}

TEST_CASE("proximity_analysis: nested qualifying sets and brute-force distances") {
  const Raster ref = random_raster({0, 0}, 10, 40, 40, 10, 30, 9);
  const Raster pred = random_raster({0, 0}, 10, 40, 40, 10, 30, 10);
  const auto samples = random_samples(60, {{0, 0}, {400, 400}}, 0, 1, 11);

  const std::vector<double> radii = {0.0, 30.0, 90.0, 200.0, kInf};
  const ProximityReport rep = proximity_analysis(pred, ref, samples, radii);
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    CHECK(rep.rows[i].n >= rep.rows[i - 1].n);

  // distance field matches a per-cell min-over-samples loop
  const auto dist = distance_to_nearest(ref, samples);
  std::size_t k = 0;
  for (int r = 0; r < ref.n_rows(); ++r)
    for (int c = 0; c < ref.n_cols(); ++c, ++k) {
      double best = kInf;
      for (const Sample& s : samples)
        best = std::min(best, distance(ref.cell_center(r, c), s.position));
      CHECK(dist[k] == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("proximity_analysis: empty rows flagged, not fatal") {
  const Raster ref = random_raster({0, 0}, 10, 5, 5, 10, 30, 12);
  const Raster pred = random_raster({0, 0}, 10, 5, 5, 10, 30, 13);
  Sample far_sample;
  far_sample.position = {100000, 100000};
  const std::vector<double> radii = {0.0, 10.0, kInf};
  const ProximityReport rep =
      proximity_analysis(pred, ref, std::vector<Sample>{far_sample}, radii);
  CHECK(rep.rows[0].n == 0);
  CHECK_FALSE(rep.rows[0].metrics.has_value());
  CHECK(rep.rows[1].n == 0);
  CHECK(rep.rows[2].n == 25);
}

TEST_CASE("pooled_metrics: invariances and concatenation oracle") {
  const std::vector<double> v = {1.0, -2.0, 0.5, 3.25};
  const MetricSet single = pooled_metrics({v});
  const MetricSet direct = metrics_from_errors(v);
  CHECK(single.bias == direct.bias);
  CHECK(single.rmse == direct.rmse);

  const MetricSet doubled = pooled_metrics({v, v});
  CHECK(doubled.bias == doctest::Approx(direct.bias).epsilon(1e-15));
  CHECK(doubled.rmse == doctest::Approx(direct.rmse).epsilon(1e-15));
  CHECK(doubled.n == 2 * v.size());

  Rng rng(14);
  std::vector<std::vector<double>> vectors;
  std::vector<double> all;
  for (int i = 0; i < 5; ++i) {
    std::vector<double> vec;
    for (int j = 0; j < 20 + i; ++j) vec.push_back(rng.uniform() * 10 - 5);
    all.insert(all.end(), vec.begin(), vec.end());
    vectors.push_back(std::move(vec));
  }
  const MetricSet pooled = pooled_metrics(vectors);
  const MetricSet concat = metrics_from_errors(all);
  CHECK(pooled.bias == concat.bias);
  CHECK(pooled.rmse == concat.rmse);

  CHECK_THROWS_AS(pooled_metrics({{}, {}}), DataError);
}

TEST_CASE("sample_along_segment: profile values and validity") {
  Raster r({0, 0}, 10, 4, 10);
  for (int row = 0; row < 4; ++row)
    for (int col = 0; col < 10; ++col) r.at(row, col) = col;
  r.set_nodata(1, 3);

  // horizontal transect through row 1 centers
  const auto profile = sample_along_segment(r, {5, 15}, {95, 15}, 10);
  REQUIRE(profile.size() == 10);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    CHECK(profile[i].distance == doctest::Approx(10.0 * i));
    if (i == 3) {
      CHECK_FALSE(profile[i].valid);  // the no-data hole
    } else {
      REQUIRE(profile[i].valid);
      CHECK(profile[i].value == static_cast<double>(i));
    }
  }

  // endpoints outside the raster are flagged invalid, segment end included
  const auto past = sample_along_segment(r, {85, 15}, {115, 15}, 10);
  REQUIRE(past.size() == 4);
  CHECK(past[0].valid);
  CHECK_FALSE(past[2].valid);
  CHECK(past[3].distance == doctest::Approx(30.0));

  CHECK_THROWS_AS(sample_along_segment(r, {0, 0}, {1, 1}, 0.0), ArgumentError);
}

TEST_CASE("metrics identity rmse^2 = bias^2 + variance holds") {
  Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> errors;
    for (int i = 0; i < 30; ++i) errors.push_back(rng.uniform() * 8 - 3);
    const MetricSet m = metrics_from_errors(errors);
    double var = 0.0;
    for (double e : errors) var += (e - m.bias) * (e - m.bias);
    var /= errors.size();
    CHECK(std::abs(m.rmse * m.rmse - (m.bias * m.bias + var)) <=
          1e-9 * std::max(1.0, m.rmse * m.rmse));
  }
}
