#include "geokrig/residual_kriging.hpp"

#include <chrono>
#include <cmath>

#include "geokrig/core.hpp"
#include "geokrig/semivariogram.hpp"

namespace geokrig {

namespace {

/// Grid on the prediction's lattice whose cell centers cover the buffered
/// extent; it may extend past the prediction so near-edge cells still get
/// kriged estimates.
GridSpec buffered_grid(const Raster& prediction, const Aabb& buffered) {
  const double cs = prediction.cell_size();
  const Point2D o = prediction.origin();
  const auto first_center_at_or_after = [cs](double origin, double bound) {
    return static_cast<long long>(std::ceil((bound - origin) / cs - 0.5));
  };
  const auto last_center_at_or_before = [cs](double origin, double bound) {
    return static_cast<long long>(std::floor((bound - origin) / cs - 0.5));
  };
  const long long col_lo = first_center_at_or_after(o.x, buffered.min.x);
  const long long col_hi = last_center_at_or_before(o.x, buffered.max.x);
  const long long row_lo = first_center_at_or_after(o.y, buffered.min.y);
  const long long row_hi = last_center_at_or_before(o.y, buffered.max.y);
  if (col_hi < col_lo || row_hi < row_lo)
    throw ArgumentError("rk: buffered site extent selects no grid cells");

  GridSpec grid;
  grid.origin = {o.x + static_cast<double>(col_lo) * cs, o.y + static_cast<double>(row_lo) * cs};
  grid.cell_size = cs;
  grid.n_rows = static_cast<int>(row_hi - row_lo + 1);
  grid.n_cols = static_cast<int>(col_hi - col_lo + 1);
  return grid;
}

FitResult fit_along_track(const std::vector<Sample>& residual_samples, const FitAlongTrack& fat) {
  const auto nwd = filter_samples(residual_samples, std::nullopt, TrackAzimuthClass::Nwd);
  const auto swd = filter_samples(residual_samples, std::nullopt, TrackAzimuthClass::Swd);

  std::optional<EmpiricalSemivariogram> sv_nwd, sv_swd;
  if (nwd.size() >= 2)
    sv_nwd = empirical_directional(nwd, fat.bin_width, fat.max_lag, kNwdAlongTrackAzimuthDeg,
                                   fat.tolerance_deg);
  if (swd.size() >= 2)
    sv_swd = empirical_directional(swd, fat.bin_width, fat.max_lag, kSwdAlongTrackAzimuthDeg,
                                   fat.tolerance_deg);

  if (sv_nwd && sv_swd) return fit_combined(*sv_nwd, *sv_swd, fat.kind, fat.weighting);
  if (sv_nwd) return fit(*sv_nwd, fat.kind, fat.weighting);
  if (sv_swd) return fit(*sv_swd, fat.kind, fat.weighting);
  throw DataError("rk: neither azimuth class has enough samples for a semivariogram");
}

}  // namespace

RkOutput run_rk(std::span<const Sample> observed, const Raster& prediction, const Aabb& site,
                const RkConfig& config) {
  if (!(config.buffer_margin >= 0.0)) throw ArgumentError("rk: buffer margin must be >= 0");

  RkDiagnostics diag;
  diag.observed_total = observed.size();

  const Aabb buffered = buffer_extent(site, config.buffer_margin);

  // (1) beam filter, restricted to the buffered extent
  std::vector<Sample> usable;
  for (const Sample& s : filter_samples(observed, config.beam_filter, std::nullopt))
    if (buffered.contains(s.position)) usable.push_back(s);
  diag.beam_filtered = usable.size();

  // (2) residuals against the prediction
  ResidualResult res = residuals(usable, prediction);
  diag.dropped_outside = res.dropped_outside;
  diag.dropped_nodata = res.dropped_nodata;
  if (res.samples.empty()) throw DataError("rk: no usable samples");

  auto [merged, n_merged] = merge_duplicates(res.samples, config.kriging.duplicate_policy);
  diag.duplicates_merged = n_merged;
  diag.samples_used = merged.size();

  // (3) variogram model
  VariogramModel model;
  std::optional<FitResult> fit_result;
  if (const auto* provided = std::get_if<VariogramModel>(&config.semivariogram_source)) {
    validate(*provided);
    model = *provided;
  } else {
    fit_result = fit_along_track(merged, std::get<FitAlongTrack>(config.semivariogram_source));
    diag.fit_degenerate = fit_result->degenerate;
    model = fit_result->model;
    if (!(model.sill > 1e-12)) {
      // Residuals are constant to within rounding: the semivariance carries
      // no usable scale, so continue with a unit pure-nugget model (equal
      // weights, mean estimate).
      model.sill = 1.0;
      model.nugget = 1.0;
      diag.fit_degenerate = true;
    }
  }

  // (4) krige residuals over the buffered grid
  KrigingConfig kriging = config.kriging;
  if (!kriging.neighborhood && merged.size() > kGlobalKrigingSampleLimit) {
    kriging.neighborhood = NearestNeighborhood{64, model.range};
    diag.neighborhood_switched = true;
  }
  const GridSpec grid = buffered_grid(prediction, buffered);
  GridPrediction kriged = predict_grid(merged, grid, model, kriging);

  // (5) corrected = prediction + kriged residuals, no-data propagating
  Raster corrected(grid.origin, grid.cell_size, grid.n_rows, grid.n_cols, prediction.nodata());
  for (int r = 0; r < grid.n_rows; ++r)
    for (int c = 0; c < grid.n_cols; ++c) {
      const auto cell = prediction.cell_of(corrected.cell_center(r, c));
      if (!cell || prediction.is_nodata(cell->row, cell->col)) continue;
      corrected.at(r, c) = prediction.at(cell->row, cell->col) + kriged.estimates.at(r, c);
    }

  // (6) crop to the site
  return RkOutput{crop(corrected, site), crop(kriged.estimates, site),
                  crop(kriged.variances, site), std::move(fit_result), diag};
}

RkMultiResult run_rk_multi(std::span<const SiteInput> sites, const RkConfig& config) {
  if (sites.empty()) throw ArgumentError("rk: no sites given");

  RkMultiResult result;
  std::vector<std::vector<double>> error_vectors;
  for (const SiteInput& site : sites) {
    SiteResult sr;
    sr.name = site.name;
    const auto start = std::chrono::steady_clock::now();
    try {
      RkOutput output = run_rk(site.observed, site.prediction, site.site, config);
      // Post-correction residuals at the samples inside the cropped map.
      for (const Sample& s : filter_samples(site.observed, config.beam_filter, std::nullopt)) {
        const auto cell = output.corrected.cell_of(s.position);
        if (!cell || output.corrected.is_nodata(cell->row, cell->col)) continue;
        sr.errors_at_samples.push_back(output.corrected.at(cell->row, cell->col) - s.value);
      }
      sr.output = std::move(output);
    } catch (const Error& e) {
      sr.error = e.what();
      ++result.failed;
    }
    sr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!sr.errors_at_samples.empty()) error_vectors.push_back(sr.errors_at_samples);
    result.sites.push_back(std::move(sr));
  }
  if (!error_vectors.empty()) result.pooled = pooled_metrics(error_vectors);
  return result;
}

}  // namespace geokrig
