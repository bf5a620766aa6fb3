#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "geokrig/kriging.hpp"
#include "geokrig/types.hpp"
#include "geokrig/validation.hpp"
#include "geokrig/variogram_fit.hpp"

namespace geokrig {

/// Ground-track azimuths at the study latitude; SWD folds to 144 modulo 180.
constexpr double kNwdAlongTrackAzimuthDeg = 36.0;
constexpr double kSwdAlongTrackAzimuthDeg = 144.0;

/// Fit the variogram in-pipeline from along-track directional semivariograms
/// of the NWD and SWD subsets, pooled into a single isotropic model.
struct FitAlongTrack {
  double bin_width = 100.0;
  double max_lag = 10000.0;
  double tolerance_deg = 1.0;
  VariogramKind kind = VariogramKind::Exponential;
  FitWeighting weighting = FitWeighting::PairCount;
};

struct RkConfig {
  double buffer_margin = 3000.0;
  BeamClass beam_filter = BeamClass::Power;
  std::variant<VariogramModel, FitAlongTrack> semivariogram_source = FitAlongTrack{};
  KrigingConfig kriging;
};

struct RkDiagnostics {
  std::size_t observed_total = 0;    // input samples
  std::size_t beam_filtered = 0;     // after beam filter + buffered-extent cut
  std::size_t samples_used = 0;      // residual samples fed to kriging
  std::size_t dropped_outside = 0;   // outside the prediction raster
  std::size_t dropped_nodata = 0;    // over no-data prediction cells
  std::size_t duplicates_merged = 0;
  bool fit_degenerate = false;       // pipeline continued with a pure-nugget model
  bool neighborhood_switched = false;  // global kriging demoted to Nearest(64, range)
};

/// Above this sample count a global-neighborhood run_rk switches to
/// Nearest(64, range) to keep the dense factorization tractable.
constexpr std::size_t kGlobalKrigingSampleLimit = 5000;

struct RkOutput {
  Raster corrected;
  Raster kriged_residuals;
  Raster kriging_variance;
  std::optional<FitResult> fit;  // absent when the model was provided
  RkDiagnostics diagnostics;
};

/// Full residual-kriging pass over one site: filter observations to the
/// configured beam class within the buffered extent, compute residuals
/// against the prediction, obtain the variogram model, krige the residuals
/// over the buffered grid, add them back to the prediction (no-data
/// propagating) and crop everything to the site.
RkOutput run_rk(std::span<const Sample> observed, const Raster& prediction, const Aabb& site,
                const RkConfig& config);

struct SiteInput {
  std::string name;
  std::vector<Sample> observed;
  Raster prediction;
  Aabb site;
};

struct SiteResult {
  std::string name;
  std::optional<RkOutput> output;        // absent on failure
  std::string error;                     // failure message
  std::vector<double> errors_at_samples; // corrected minus observed at sample cells
  double seconds = 0.0;                  // wall time for this site
};

struct RkMultiResult {
  std::vector<SiteResult> sites;
  std::optional<MetricSet> pooled;  // over the concatenated per-site error vectors
  std::size_t failed = 0;
};

/// Runs run_rk independently per site (sites are separated by more than the
/// range, so they are independent kriging domains). A failing site is
/// reported and the others proceed.
RkMultiResult run_rk_multi(std::span<const SiteInput> sites, const RkConfig& config);

}  // namespace geokrig
