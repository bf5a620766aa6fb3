#include "geokrig/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace geokrig {

BucketIndex::BucketIndex(std::span<const Point2D> points, double bucket_edge)
    : points_(points.begin(), points.end()), edge_(bucket_edge) {
  if (!(bucket_edge > 0.0)) throw ArgumentError("bucket index: edge must be > 0");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const Key k = key_of(points_[i]);
    if (i == 0) {
      key_min_ = k;
      key_max_ = k;
    } else {
      key_min_.bx = std::min(key_min_.bx, k.bx);
      key_min_.by = std::min(key_min_.by, k.by);
      key_max_.bx = std::max(key_max_.bx, k.bx);
      key_max_.by = std::max(key_max_.by, k.by);
    }
    buckets_[k].push_back(i);
  }
}

BucketIndex::Key BucketIndex::key_of(Point2D p) const {
  return {static_cast<long long>(std::floor(p.x / edge_)),
          static_cast<long long>(std::floor(p.y / edge_))};
}

void BucketIndex::collect(const Key& k, std::vector<std::size_t>& out) const {
  const auto it = buckets_.find(k);
  if (it == buckets_.end()) return;
  out.insert(out.end(), it->second.begin(), it->second.end());
}

std::vector<std::size_t> BucketIndex::nearest_within(Point2D target, std::size_t k,
                                                     double max_radius) const {
  if (!(max_radius > 0.0) || max_radius > edge_)
    throw ArgumentError("bucket index: radius must be in (0, bucket edge]");
  const Key center = key_of(target);
  std::vector<std::size_t> candidates;
  for (long long dx = -1; dx <= 1; ++dx)
    for (long long dy = -1; dy <= 1; ++dy) collect({center.bx + dx, center.by + dy}, candidates);

  const double r2 = max_radius * max_radius;
  std::vector<std::pair<double, std::size_t>> in_range;
  for (std::size_t i : candidates) {
    const double dx = points_[i].x - target.x;
    const double dy = points_[i].y - target.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 <= r2) in_range.emplace_back(d2, i);
  }
  std::sort(in_range.begin(), in_range.end());
  if (in_range.size() > k) in_range.resize(k);

  std::vector<std::size_t> out;
  out.reserve(in_range.size());
  for (const auto& [d2, i] : in_range) out.push_back(i);
  return out;
}

double BucketIndex::nearest_distance(Point2D target) const {
  if (points_.empty()) return std::numeric_limits<double>::infinity();
  const Key center = key_of(target);

  // Rings closer than the occupied-bucket bounding box are provably empty,
  // and shells are clipped to it, so far-away targets stay cheap.
  const long long gap_x =
      std::max({key_min_.bx - center.bx, center.bx - key_max_.bx, 0LL});
  const long long gap_y =
      std::max({key_min_.by - center.by, center.by - key_max_.by, 0LL});
  const long long first_ring = std::max(gap_x, gap_y);

  double best2 = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> candidates;
  auto scan = [&](long long bx, long long by) {
    if (bx < key_min_.bx || bx > key_max_.bx || by < key_min_.by || by > key_max_.by) return;
    candidates.clear();
    collect({bx, by}, candidates);
    for (std::size_t i : candidates) {
      const double dx = points_[i].x - target.x;
      const double dy = points_[i].y - target.y;
      best2 = std::min(best2, dx * dx + dy * dy);
    }
  };

  for (long long ring = first_ring;; ++ring) {
    if (ring == 0) {
      scan(center.bx, center.by);
    } else {
      for (long long dx = -ring; dx <= ring; ++dx) {
        scan(center.bx + dx, center.by - ring);
        scan(center.bx + dx, center.by + ring);
      }
      for (long long dy = -ring + 1; dy < ring; ++dy) {
        scan(center.bx - ring, center.by + dy);
        scan(center.bx + ring, center.by + dy);
      }
    }
    // Any point in a farther ring is at least (ring) * edge away from the
    // target's bucket; stop once that bound cannot improve best2.
    const double ring_bound = static_cast<double>(ring) * edge_;
    if (best2 <= ring_bound * ring_bound && best2 < std::numeric_limits<double>::infinity())
      break;
  }
  return std::sqrt(best2);
}

}  // namespace geokrig
