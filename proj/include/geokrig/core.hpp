#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "geokrig/types.hpp"

namespace geokrig {

struct ResidualResult {
  std::vector<Sample> samples;      // value = observed - predicted, metadata preserved
  std::size_t dropped_outside = 0;  // observations outside the raster extent
  std::size_t dropped_nodata = 0;   // observations over no-data cells
};

/// Observed-minus-predicted residual samples. Each observation is matched to
/// the prediction cell containing it; observations outside the raster or over
/// no-data cells are dropped and counted.
ResidualResult residuals(std::span<const Sample> observed, const Raster& predicted);

/// Extent expanded by margin on all four sides. margin must be >= 0.
Aabb buffer_extent(const Aabb& extent, double margin);

/// Sub-raster of all cells whose centers lie inside extent (closed box).
/// Throws DataError when no cell qualifies.
Raster crop(const Raster& raster, const Aabb& extent);

}  // namespace geokrig
