#pragma once

#include <cmath>
#include <vector>

#include "geokrig/rng.hpp"
#include "geokrig/types.hpp"

namespace testutil {

using geokrig::Aabb;
using geokrig::BeamClass;
using geokrig::Point2D;
using geokrig::Raster;
using geokrig::Rng;
using geokrig::Sample;
using geokrig::TrackAzimuthClass;

inline bool approx_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1e-300, std::abs(a), std::abs(b)});
}

inline std::vector<Sample> random_samples(std::size_t n, const Aabb& box, double value_lo,
                                          double value_hi, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Sample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Sample s;
    s.position.x = box.min.x + rng.uniform() * (box.max.x - box.min.x);
    s.position.y = box.min.y + rng.uniform() * (box.max.y - box.min.y);
    s.value = value_lo + rng.uniform() * (value_hi - value_lo);
    s.beam = rng.uniform() < 0.5 ? BeamClass::Power : BeamClass::Coverage;
    s.azimuth_class = rng.uniform() < 0.5 ? TrackAzimuthClass::Nwd : TrackAzimuthClass::Swd;
    s.track_id = static_cast<std::int64_t>(i);
    out.push_back(s);
  }
  return out;
}

inline Raster random_raster(Point2D origin, double cell_size, int n_rows, int n_cols,
                            double value_lo, double value_hi, std::uint64_t seed,
                            double nodata_fraction = 0.0) {
  Rng rng(seed, 17);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n_rows) * n_cols);
  for (int i = 0; i < n_rows * n_cols; ++i) {
    if (nodata_fraction > 0.0 && rng.uniform() < nodata_fraction)
      values.push_back(Raster::kDefaultNodata);
    else
      values.push_back(value_lo + rng.uniform() * (value_hi - value_lo));
  }
  return Raster(origin, cell_size, n_rows, n_cols, std::move(values));
}

}  // namespace testutil
