#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "geokrig/types.hpp"
#include "geokrig/variogram_model.hpp"

namespace geokrig {

/// Moving-neighborhood selection: up to k nearest samples within max_radius
/// of each target.
struct NearestNeighborhood {
  std::size_t k = 64;
  double max_radius = 0.0;
};

struct KrigingConfig {
  /// Empty = global neighborhood (all samples, one factorization per set).
  std::optional<NearestNeighborhood> neighborhood;

  enum class DuplicatePolicy { Average, Error };
  DuplicatePolicy duplicate_policy = DuplicatePolicy::Average;

  /// Initial ridge added to the sample-to-sample diagonal; on singularity the
  /// solver escalates through {1e-10, 1e-8, 1e-6} * sill before failing.
  double jitter = 0.0;
};

/// Solution of the ordinary kriging system at one target: the weights row
/// (indices refer to the caller's sample list), the Lagrange multiplier, the
/// estimate and the kriging variance.
struct KrigingSolution {
  std::vector<std::pair<std::size_t, double>> weights;
  double lagrange = 0.0;
  double estimate = 0.0;
  double variance = 0.0;
};

/// Grid geometry for predict_grid; same conventions as Raster.
struct GridSpec {
  Point2D origin;
  double cell_size = 0.0;
  int n_rows = 0;
  int n_cols = 0;
};

struct GridPrediction {
  Raster estimates;
  Raster variances;
};

/// Collapses samples sharing an exact position into one pseudo-sample with
/// the mean value (policy Average) or throws (policy Error). Returns the
/// number of samples removed by merging. Weights computed on the merged set
/// are redistributed equally over the merged members when reported.
std::pair<std::vector<Sample>, std::size_t> merge_duplicates(
    std::span<const Sample> samples, KrigingConfig::DuplicatePolicy policy);

/// Solves the ordinary kriging system for one target. Throws
/// EmptyNeighborhood when neighborhood selection yields no samples, and
/// NumericError when the system stays singular through jitter escalation.
KrigingSolution solve_weights(std::span<const Sample> samples, Point2D target,
                              const VariogramModel& model, const KrigingConfig& config);

/// (estimate, variance) at one target.
std::pair<double, double> predict_point(std::span<const Sample> samples, Point2D target,
                                        const VariogramModel& model, const KrigingConfig& config);

/// Per-cell prediction at every cell center of the grid. Cells with an empty
/// neighborhood get estimate 0 (keep the regression prediction unchanged)
/// and no-data variance.
GridPrediction predict_grid(std::span<const Sample> samples, const GridSpec& grid,
                            const VariogramModel& model, const KrigingConfig& config);

}  // namespace geokrig
