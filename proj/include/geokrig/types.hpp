#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geokrig/errors.hpp"

namespace geokrig {

/// Planar position in meters (UTM-style easting/northing). All distances in
/// the library are Euclidean on this plane.
struct Point2D {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Point2D a, Point2D b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

inline bool is_finite(Point2D p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Laser beam energy class. Power beams carry twice the coverage beams'
/// energy and penetrate dense canopy more reliably.
enum class BeamClass : std::uint8_t { Power, Coverage };

/// Orbital pass direction of the acquisition track: northward (NWD) or
/// southward (SWD).
enum class TrackAzimuthClass : std::uint8_t { Nwd, Swd };

/// One point observation: a footprint-level height or residual with its
/// acquisition metadata.
struct Sample {
  Point2D position;
  double value = 0.0;  // meters (canopy height or residual)
  BeamClass beam = BeamClass::Power;
  TrackAzimuthClass azimuth_class = TrackAzimuthClass::Nwd;
  std::int64_t track_id = 0;
};

/// Axis-aligned box, min <= max on both axes. Containment is closed on all
/// edges.
struct Aabb {
  Point2D min;
  Point2D max;

  bool contains(Point2D p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }

  bool intersects(const Aabb& other) const {
    return min.x <= other.max.x && other.min.x <= max.x && min.y <= other.max.y &&
           other.min.y <= max.y;
  }

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
};

inline Aabb make_aabb(Point2D min, Point2D max) {
  if (!is_finite(min) || !is_finite(max)) throw ArgumentError("aabb: corners must be finite");
  if (min.x > max.x || min.y > max.y) throw ArgumentError("aabb: min must not exceed max");
  return Aabb{min, max};
}

struct CellIndex {
  int row = 0;
  int col = 0;
};

/// Regular square-cell grid of values, row-major with row 0 at the south
/// (lowest y) edge. `origin` is the lower-left corner of the lower-left
/// cell. Missing cells hold the declared finite no-data sentinel, never NaN,
/// so file round-trips stay exact.
class Raster {
 public:
  Raster(Point2D origin, double cell_size, int n_rows, int n_cols, double nodata = kDefaultNodata)
      : Raster(origin, cell_size, n_rows, n_cols,
               std::vector<double>(static_cast<std::size_t>(n_rows) * static_cast<std::size_t>(n_cols), nodata),
               nodata) {}

  Raster(Point2D origin, double cell_size, int n_rows, int n_cols, std::vector<double> values,
         double nodata = kDefaultNodata)
      : origin_(origin),
        cell_size_(cell_size),
        n_rows_(n_rows),
        n_cols_(n_cols),
        nodata_(nodata),
        values_(std::move(values)) {
    if (!is_finite(origin)) throw ArgumentError("raster: origin must be finite");
    if (!(cell_size > 0.0)) throw ArgumentError("raster: cell_size must be > 0");
    if (n_rows <= 0 || n_cols <= 0) throw ArgumentError("raster: dimensions must be positive");
    if (!std::isfinite(nodata)) throw ArgumentError("raster: no-data sentinel must be finite");
    if (values_.size() != cell_count())
      throw ArgumentError("raster: values length must equal n_rows * n_cols");
    for (double v : values_)
      if (!std::isfinite(v)) throw ArgumentError("raster: values must be finite or the no-data sentinel");
  }

  Point2D origin() const { return origin_; }
  double cell_size() const { return cell_size_; }
  int n_rows() const { return n_rows_; }
  int n_cols() const { return n_cols_; }
  double nodata() const { return nodata_; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(n_rows_) * static_cast<std::size_t>(n_cols_);
  }
  const std::vector<double>& values() const { return values_; }

  double at(int row, int col) const { return values_[index(row, col)]; }
  double& at(int row, int col) { return values_[index(row, col)]; }
  bool is_nodata(int row, int col) const { return at(row, col) == nodata_; }
  void set_nodata(int row, int col) { at(row, col) = nodata_; }

  Point2D cell_center(int row, int col) const {
    return {origin_.x + (col + 0.5) * cell_size_, origin_.y + (row + 0.5) * cell_size_};
  }

  /// Cell containing a point; half-open on the max edges, so a point on the
  /// top/right boundary of the raster is outside.
  std::optional<CellIndex> cell_of(Point2D p) const {
    const double fc = std::floor((p.x - origin_.x) / cell_size_);
    const double fr = std::floor((p.y - origin_.y) / cell_size_);
    if (fc < 0.0 || fr < 0.0 || fc >= n_cols_ || fr >= n_rows_) return std::nullopt;
    return CellIndex{static_cast<int>(fr), static_cast<int>(fc)};
  }

  /// Full outer extent: [origin, origin + n * cell_size] per axis.
  Aabb extent() const {
    return Aabb{origin_,
                {origin_.x + n_cols_ * cell_size_, origin_.y + n_rows_ * cell_size_}};
  }

  bool same_geometry(const Raster& other) const {
    return origin_.x == other.origin_.x && origin_.y == other.origin_.y &&
           cell_size_ == other.cell_size_ && n_rows_ == other.n_rows_ &&
           n_cols_ == other.n_cols_;
  }

  static constexpr double kDefaultNodata = -9999.0;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(n_cols_) +
           static_cast<std::size_t>(col);
  }

  Point2D origin_;
  double cell_size_;
  int n_rows_;
  int n_cols_;
  double nodata_;
  std::vector<double> values_;
};

}  // namespace geokrig
