#include "doctest.h"

#include <cmath>

#include "geokrig/core.hpp"
#include "geokrig/residual_kriging.hpp"
#include "geokrig/synthetic.hpp"
#include "geokrig/validation.hpp"
#include "test_helpers.hpp"

using namespace geokrig;

namespace {

double smooth_truth(Point2D p) {
  return 30.0 + 6.0 * std::sin(p.x / 1100.0) * std::cos(p.y / 800.0) +
         3.0 * std::sin((p.x + p.y) / 1700.0);
}

struct Scenario {
  Aabb site;
  Raster prediction;
  std::vector<Sample> observed;
};

// Smooth analytic truth; prediction carries a correlated GRF error field;
// power beams observe the truth exactly.
Scenario make_scenario(std::uint64_t seed, double injected_bias = 0.0) {
  const Aabb site = make_aabb({480, 480}, {2880, 2880});
  const double margin = 480.0, cell = 80.0;
  const Aabb buffered = buffer_extent(site, margin);
  const int n = static_cast<int>(std::round(buffered.width() / cell));

  Raster prediction({buffered.min.x, buffered.min.y}, cell, n, n);
  std::vector<Point2D> centers;
  centers.reserve(prediction.cell_count());
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) centers.push_back(prediction.cell_center(r, c));
  GrfSpec egrf{{VariogramKind::Exponential, 2.0, 20.0, 2500.0}, 0.0, seed};
  const auto err = sample_grf_at(centers, egrf);
  std::size_t k = 0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c, ++k)
      prediction.at(r, c) = smooth_truth(centers[k]) + err[k] + injected_bias;

  GediPatternSpec pattern;
  pattern.extent = buffered;
  pattern.footprint_spacing_along = 75.0;
  pattern.passes = {{TrackAzimuthClass::Nwd, 0.0},
                    {TrackAzimuthClass::Nwd, 18.0},
                    {TrackAzimuthClass::Nwd, 300.0}};
  pattern.seed = seed + 1;
  return {site, std::move(prediction),
          observe(generate_pattern(pattern), smooth_truth, pattern)};
}

RkConfig scenario_config() {
  RkConfig cfg;
  cfg.buffer_margin = 480.0;
  cfg.semivariogram_source = FitAlongTrack{250.0, 3000.0, 1.0, VariogramKind::Exponential};
  return cfg;
}

Raster truth_like(const Raster& grid) {
  Raster out(grid.origin(), grid.cell_size(), grid.n_rows(), grid.n_cols());
  for (int r = 0; r < out.n_rows(); ++r)
    for (int c = 0; c < out.n_cols(); ++c) out.at(r, c) = smooth_truth(out.cell_center(r, c));
  return out;
}

}  // namespace

TEST_CASE("run_rk: zero residuals keep the prediction untouched") {
  Scenario sc = make_scenario(21);
  // observations exactly equal to the prediction at their cells
  std::vector<Sample> agree;
  for (Sample s : sc.observed) {
    const auto cell = sc.prediction.cell_of(s.position);
    if (!cell) continue;
    s.value = sc.prediction.at(cell->row, cell->col);
    agree.push_back(s);
  }
  const RkOutput out = run_rk(agree, sc.prediction, sc.site, scenario_config());
  const Raster pred_site = crop(sc.prediction, sc.site);
  REQUIRE(out.corrected.same_geometry(pred_site));
  for (int r = 0; r < out.corrected.n_rows(); ++r)
    for (int c = 0; c < out.corrected.n_cols(); ++c) {
      CHECK(std::abs(out.kriged_residuals.at(r, c)) < 1e-9);
      CHECK(std::abs(out.corrected.at(r, c) - pred_site.at(r, c)) < 1e-9);
    }
  CHECK(out.diagnostics.fit_degenerate);
}

TEST_CASE("run_rk: constant residual becomes a uniform correction") {
  Scenario sc = make_scenario(22);
  std::vector<Sample> shifted;
  for (Sample s : sc.observed) {
    const auto cell = sc.prediction.cell_of(s.position);
    if (!cell) continue;
    s.value = sc.prediction.at(cell->row, cell->col) + 2.5;
    shifted.push_back(s);
  }
  const RkOutput out = run_rk(shifted, sc.prediction, sc.site, scenario_config());
  const Raster pred_site = crop(sc.prediction, sc.site);
  for (int r = 0; r < out.corrected.n_rows(); ++r)
    for (int c = 0; c < out.corrected.n_cols(); ++c) {
      CHECK(std::abs(out.kriged_residuals.at(r, c) - 2.5) < 1e-9);
      CHECK(std::abs(out.corrected.at(r, c) - pred_site.at(r, c) - 2.5) < 1e-9);
    }
}

TEST_CASE("run_rk: additive identity and crop consistency are exact") {
  Scenario sc = make_scenario(23);
  const RkOutput out = run_rk(sc.observed, sc.prediction, sc.site, scenario_config());
  const Raster pred_site = crop(sc.prediction, sc.site);
  REQUIRE(out.corrected.same_geometry(pred_site));
  REQUIRE(out.corrected.same_geometry(out.kriged_residuals));
  REQUIRE(out.corrected.same_geometry(out.kriging_variance));
  for (int r = 0; r < out.corrected.n_rows(); ++r)
    for (int c = 0; c < out.corrected.n_cols(); ++c) {
      if (out.corrected.is_nodata(r, c)) continue;
      // bit-exact: corrected was formed as prediction + kriged residual
      CHECK(out.corrected.at(r, c) == pred_site.at(r, c) + out.kriged_residuals.at(r, c));
    }
}

TEST_CASE("run_rk: corrections concentrate near the samples") {
  Scenario sc = make_scenario(24);
  const RkOutput out = run_rk(sc.observed, sc.prediction, sc.site, scenario_config());

  const auto power = filter_samples(sc.observed, BeamClass::Power, std::nullopt);
  const auto dist = distance_to_nearest(out.kriged_residuals, power);
  double near_sum = 0, far_sum = 0;
  std::size_t near_n = 0, far_n = 0;
  std::size_t k = 0;
  const double range = 2500.0;
  for (int r = 0; r < out.kriged_residuals.n_rows(); ++r)
    for (int c = 0; c < out.kriged_residuals.n_cols(); ++c, ++k) {
      const double a = std::abs(out.kriged_residuals.at(r, c));
      if (dist[k] <= 250.0) {
        near_sum += a;
        ++near_n;
      } else if (dist[k] > 2.0 * range) {
        far_sum += a;
        ++far_n;
      }
    }
  REQUIRE(near_n > 0);
  if (far_n > 0) CHECK(near_sum / near_n >= far_sum / far_n);
}

TEST_CASE("run_rk: no-data prediction cells propagate to the corrected map") {
  Scenario sc = make_scenario(25);
  // poke a no-data hole inside the site
  const auto hole = sc.prediction.cell_of({1500, 1500});
  REQUIRE(hole.has_value());
  sc.prediction.set_nodata(hole->row, hole->col);

  const RkOutput out = run_rk(sc.observed, sc.prediction, sc.site, scenario_config());
  const auto cropped_hole = out.corrected.cell_of({1500, 1500});
  REQUIRE(cropped_hole.has_value());
  CHECK(out.corrected.is_nodata(cropped_hole->row, cropped_hole->col));
  CHECK_FALSE(out.kriged_residuals.is_nodata(cropped_hole->row, cropped_hole->col));
}

TEST_CASE("run_rk: beam filter efficacy on biased coverage beams") {
  // inject coverage bias into the observations over a GRF truth
  const Aabb site = make_aabb({480, 480}, {2880, 2880});
  const Aabb buffered = buffer_extent(site, 480.0);
  GediPatternSpec pattern;
  pattern.extent = buffered;
  pattern.footprint_spacing_along = 160.0;
  pattern.passes = {{TrackAzimuthClass::Nwd, 0.0}, {TrackAzimuthClass::Nwd, 150.0}};
  pattern.seed = 77;
  pattern.per_track_offset_sd = 2.0;
  const auto raw = generate_pattern(pattern);
  GrfSpec grf{{VariogramKind::Exponential, 2.0, 20.0, 2500.0}, 30.0, 78};
  std::vector<Point2D> pts(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) pts[i] = raw[i].position;
  const auto observed = observe(raw, sample_grf_at(pts, grf), pattern);

  const auto power = filter_samples(observed, BeamClass::Power, std::nullopt);
  const auto nwd = filter_samples(power, std::nullopt, TrackAzimuthClass::Nwd);
  const FitResult power_fit =
      fit(empirical_directional(nwd, 200, 3200, kNwdAlongTrackAzimuthDeg, 1.0),
          VariogramKind::Exponential);
  const FitResult all_fit = fit(empirical(observed, 200, 3200), VariogramKind::Exponential);
  CHECK(power_fit.model.sill < all_fit.model.sill);
}

TEST_CASE("run_rk: staged pipeline oracle and localized improvement") {
  Scenario sc = make_scenario(31);
  const RkConfig cfg = scenario_config();
  const RkOutput out = run_rk(sc.observed, sc.prediction, sc.site, cfg);

  // Stage-by-stage recomposition: filter, residuals, directional fit,
  // grid kriging, add-back, crop. Must agree with run_rk bit for bit.
  const Aabb buffered = buffer_extent(sc.site, cfg.buffer_margin);
  std::vector<Sample> usable;
  for (const Sample& s : filter_samples(sc.observed, cfg.beam_filter, std::nullopt))
    if (buffered.contains(s.position)) usable.push_back(s);
  auto [merged, n_merged] =
      merge_duplicates(residuals(usable, sc.prediction).samples, cfg.kriging.duplicate_policy);

  const auto& fat = std::get<FitAlongTrack>(cfg.semivariogram_source);
  const auto nwd = filter_samples(merged, std::nullopt, TrackAzimuthClass::Nwd);
  const FitResult staged_fit =
      fit(empirical_directional(nwd, fat.bin_width, fat.max_lag, kNwdAlongTrackAzimuthDeg,
                                fat.tolerance_deg),
          fat.kind, fat.weighting);
  REQUIRE(out.fit.has_value());
  CHECK(out.fit->model.nugget == staged_fit.model.nugget);
  CHECK(out.fit->model.sill == staged_fit.model.sill);
  CHECK(out.fit->model.range == staged_fit.model.range);

  // Grid on the prediction lattice covering the buffered extent.
  const double cs = sc.prediction.cell_size();
  const Point2D o = sc.prediction.origin();
  const auto lo_index = [cs](double origin, double bound) {
    return static_cast<long long>(std::ceil((bound - origin) / cs - 0.5));
  };
  const auto hi_index = [cs](double origin, double bound) {
    return static_cast<long long>(std::floor((bound - origin) / cs - 0.5));
  };
  GridSpec grid;
  grid.origin = {o.x + static_cast<double>(lo_index(o.x, buffered.min.x)) * cs,
                 o.y + static_cast<double>(lo_index(o.y, buffered.min.y)) * cs};
  grid.cell_size = cs;
  grid.n_cols = static_cast<int>(hi_index(o.x, buffered.max.x) - lo_index(o.x, buffered.min.x) + 1);
  grid.n_rows = static_cast<int>(hi_index(o.y, buffered.max.y) - lo_index(o.y, buffered.min.y) + 1);
  const GridPrediction kriged = predict_grid(merged, grid, staged_fit.model, cfg.kriging);

  Raster corrected(grid.origin, cs, grid.n_rows, grid.n_cols, sc.prediction.nodata());
  for (int r = 0; r < grid.n_rows; ++r)
    for (int c = 0; c < grid.n_cols; ++c) {
      const auto cell = sc.prediction.cell_of(corrected.cell_center(r, c));
      if (!cell || sc.prediction.is_nodata(cell->row, cell->col)) continue;
      corrected.at(r, c) = sc.prediction.at(cell->row, cell->col) + kriged.estimates.at(r, c);
    }
  const Raster staged_corrected = crop(corrected, sc.site);
  CHECK(staged_corrected.values() == out.corrected.values());
  CHECK(crop(kriged.estimates, sc.site).values() == out.kriged_residuals.values());

  // The correction beats the raw prediction near the samples.
  const Raster truth_r = truth_like(out.corrected);
  const Raster pred_site = crop(sc.prediction, sc.site);
  std::vector<Sample> in_site;
  for (const Sample& s : filter_samples(sc.observed, cfg.beam_filter, std::nullopt))
    if (sc.site.contains(s.position)) in_site.push_back(s);
  const std::vector<double> radius = {500.0};
  const auto rep_corr = proximity_analysis(out.corrected, truth_r, in_site, radius);
  const auto rep_pred = proximity_analysis(pred_site, truth_r, in_site, radius);
  REQUIRE(rep_corr.rows[0].metrics.has_value());
  REQUIRE(rep_pred.rows[0].metrics.has_value());
  CHECK(rep_corr.rows[0].metrics->rmse < rep_pred.rows[0].metrics->rmse);
}

TEST_CASE("run_rk: pipeline errors") {
  Scenario sc = make_scenario(26);
  CHECK_THROWS_AS(run_rk(std::vector<Sample>{}, sc.prediction, sc.site, scenario_config()),
                  DataError);
  RkConfig bad = scenario_config();
  bad.buffer_margin = -1.0;
  CHECK_THROWS_AS(run_rk(sc.observed, sc.prediction, sc.site, bad), ArgumentError);
}

TEST_CASE("run_rk_multi: singleton equivalence and determinism") {
  Scenario sc = make_scenario(27);
  const RkConfig cfg = scenario_config();
  const RkOutput single = run_rk(sc.observed, sc.prediction, sc.site, cfg);

  std::vector<SiteInput> sites;
  sites.push_back({"a", sc.observed, sc.prediction, sc.site});
  sites.push_back({"b", sc.observed, sc.prediction, sc.site});
  const RkMultiResult multi = run_rk_multi(sites, cfg);
  REQUIRE(multi.sites.size() == 2);
  REQUIRE(multi.failed == 0);
  for (const SiteResult& sr : multi.sites) {
    REQUIRE(sr.output.has_value());
    CHECK(sr.output->corrected.values() == single.corrected.values());
    CHECK(sr.output->kriged_residuals.values() == single.kriged_residuals.values());
  }
  CHECK(multi.sites[0].errors_at_samples == multi.sites[1].errors_at_samples);
}

TEST_CASE("run_rk_multi: pooled metrics equal the concatenated error vectors") {
  std::vector<SiteInput> sites;
  std::vector<std::vector<double>> expected_vectors;
  for (int s = 0; s < 3; ++s) {
    Scenario sc = make_scenario(40 + static_cast<std::uint64_t>(s));
    sites.push_back({"site" + std::to_string(s), sc.observed, sc.prediction, sc.site});
  }
  const RkMultiResult multi = run_rk_multi(sites, scenario_config());
  REQUIRE(multi.failed == 0);
  for (const SiteResult& sr : multi.sites)
    if (!sr.errors_at_samples.empty()) expected_vectors.push_back(sr.errors_at_samples);
  REQUIRE(multi.pooled.has_value());
  const MetricSet expect = pooled_metrics(expected_vectors);
  CHECK(multi.pooled->bias == expect.bias);
  CHECK(multi.pooled->rmse == expect.rmse);
  CHECK(multi.pooled->n == expect.n);
}

TEST_CASE("run_rk_multi: a failing site does not break the others") {
  Scenario good = make_scenario(50);
  std::vector<SiteInput> sites;
  sites.push_back({"good", good.observed, good.prediction, good.site});
  // site far outside the prediction: no usable samples
  sites.push_back({"bad", good.observed, good.prediction,
                   make_aabb({50000, 50000}, {52000, 52000})});
  const RkMultiResult multi = run_rk_multi(sites, scenario_config());
  CHECK(multi.failed == 1);
  CHECK(multi.sites[0].output.has_value());
  CHECK_FALSE(multi.sites[1].output.has_value());
  CHECK(!multi.sites[1].error.empty());
}
