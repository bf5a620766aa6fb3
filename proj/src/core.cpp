#include "geokrig/core.hpp"

#include <cmath>

namespace geokrig {

ResidualResult residuals(std::span<const Sample> observed, const Raster& predicted) {
  ResidualResult result;
  result.samples.reserve(observed.size());
  for (const Sample& obs : observed) {
    const auto cell = predicted.cell_of(obs.position);
    if (!cell) {
      ++result.dropped_outside;
      continue;
    }
    if (predicted.is_nodata(cell->row, cell->col)) {
      ++result.dropped_nodata;
      continue;
    }
    Sample r = obs;
    r.value = obs.value - predicted.at(cell->row, cell->col);
    result.samples.push_back(r);
  }
  return result;
}

Aabb buffer_extent(const Aabb& extent, double margin) {
  if (!(margin >= 0.0)) throw ArgumentError("buffer_extent: margin must be >= 0");
  return Aabb{{extent.min.x - margin, extent.min.y - margin},
              {extent.max.x + margin, extent.max.y + margin}};
}

Raster crop(const Raster& raster, const Aabb& extent) {
  // Scan with the same center predicate a cell-by-cell filter would use; the
  // predicate is separable, so the selection is a rectangular block.
  int row_lo = -1, row_hi = -1, col_lo = -1, col_hi = -1;
  for (int r = 0; r < raster.n_rows(); ++r) {
    const double cy = raster.cell_center(r, 0).y;
    if (cy >= extent.min.y && cy <= extent.max.y) {
      if (row_lo < 0) row_lo = r;
      row_hi = r;
    }
  }
  for (int c = 0; c < raster.n_cols(); ++c) {
    const double cx = raster.cell_center(0, c).x;
    if (cx >= extent.min.x && cx <= extent.max.x) {
      if (col_lo < 0) col_lo = c;
      col_hi = c;
    }
  }
  if (row_lo < 0 || col_lo < 0)
    throw DataError("crop: extent selects no cells of the raster");

  const int n_rows = row_hi - row_lo + 1;
  const int n_cols = col_hi - col_lo + 1;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n_rows) * static_cast<std::size_t>(n_cols));
  for (int r = row_lo; r <= row_hi; ++r)
    for (int c = col_lo; c <= col_hi; ++c) values.push_back(raster.at(r, c));

  const Point2D origin{raster.origin().x + col_lo * raster.cell_size(),
                       raster.origin().y + row_lo * raster.cell_size()};
  return Raster(origin, raster.cell_size(), n_rows, n_cols, std::move(values), raster.nodata());
}

}  // namespace geokrig
