#pragma once

#include <cstddef>
#include <span>
#include <unordered_map>
#include <vector>

#include "geokrig/types.hpp"

namespace geokrig {

/// Uniform-grid bucket index over point positions. Supports fixed-radius
/// k-nearest queries (bucket edge = query radius, so candidates live in the
/// 3x3 block around the target) and unbounded nearest-distance queries via
/// expanding rings.
class BucketIndex {
 public:
  BucketIndex(std::span<const Point2D> points, double bucket_edge);

  /// Indices of up to k points within max_radius of the target, ordered by
  /// (distance, index) so results are deterministic under ties.
  /// max_radius must not exceed the bucket edge.
  std::vector<std::size_t> nearest_within(Point2D target, std::size_t k, double max_radius) const;

  /// Distance from target to the closest indexed point.
  double nearest_distance(Point2D target) const;

  std::size_t size() const { return points_.size(); }

 private:
  struct Key {
    long long bx;
    long long by;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return static_cast<std::size_t>(static_cast<unsigned long long>(k.bx) * 0x9e3779b97f4a7c15ULL ^
                                      static_cast<unsigned long long>(k.by) * 0xc2b2ae3d27d4eb4fULL);
    }
  };

  Key key_of(Point2D p) const;
  void collect(const Key& k, std::vector<std::size_t>& out) const;

  std::vector<Point2D> points_;
  double edge_;
  std::unordered_map<Key, std::vector<std::size_t>, KeyHash> buckets_;
  Key key_min_{0, 0};  // bounding box of occupied buckets
  Key key_max_{0, 0};
};

}  // namespace geokrig
