#pragma once

#include <optional>
#include <span>
#include <vector>

#include "geokrig/types.hpp"

namespace geokrig {

/// Pixel-level accuracy metrics of predicted against reference values.
/// rrmse is absent when the mean reference value is zero (or when no
/// reference values are available, e.g. pooled error vectors).
struct MetricSet {
  double bias = 0.0;  // mean(predicted - reference), meters
  double rmse = 0.0;  // meters
  std::optional<double> rrmse;
  std::size_t n = 0;
};

/// Metrics over the cells valid in both rasters. Throws ArgumentError on a
/// geometry mismatch and DataError when no cell is valid in both.
MetricSet metrics(const Raster& predicted, const Raster& reference);

/// Metrics of a plain error vector (predicted - reference); rrmse absent.
MetricSet metrics_from_errors(std::span<const double> errors);

struct ProximityRow {
  double radius = 0.0;  // meters; infinity = all valid cells
  std::size_t n = 0;
  std::optional<MetricSet> metrics;  // absent when no cell qualifies
};

struct ProximityReport {
  std::vector<ProximityRow> rows;
};

/// Error metrics stratified by distance to the nearest sample: for each
/// radius R the metrics cover cells whose center lies within R of a sample.
/// R = 0 means the cell containing a sample; R = infinity means every valid
/// cell. Radii must be sorted ascending.
ProximityReport proximity_analysis(const Raster& predicted, const Raster& reference,
                                   std::span<const Sample> samples,
                                   std::span<const double> radii);

/// Metrics over the concatenation of per-site error vectors.
MetricSet pooled_metrics(const std::vector<std::vector<double>>& per_site_errors);

/// Distance from every cell center to the nearest sample (same grid as the
/// input raster). Exposed for diagnostics and tests.
std::vector<double> distance_to_nearest(const Raster& grid, std::span<const Sample> samples);

struct TransectPoint {
  double distance = 0.0;  // meters along the segment from its start
  Point2D position;
  double value = 0.0;
  bool valid = false;  // false outside the raster or over no-data
};

/// Raster values sampled every `step` meters along the segment from `from`
/// to `to` (inclusive of both ends).
std::vector<TransectPoint> sample_along_segment(const Raster& raster, Point2D from, Point2D to,
                                                double step);

}  // namespace geokrig
