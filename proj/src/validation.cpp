#include "geokrig/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "geokrig/spatial_index.hpp"
#include "geokrig/threading.hpp"

namespace geokrig {

namespace {

MetricSet metrics_over(const std::vector<double>& errors, const std::vector<double>& reference) {
  MetricSet m;
  m.n = errors.size();
  double err_sum = 0.0, sq_sum = 0.0;
  for (double e : errors) {
    err_sum += e;
    sq_sum += e * e;
  }
  const double n = static_cast<double>(errors.size());
  m.bias = err_sum / n;
  m.rmse = std::sqrt(sq_sum / n);

  // Population identity rmse^2 = bias^2 + var(errors); a violation here means
  // the accumulation itself went wrong.
  double var = 0.0;
  for (double e : errors) var += (e - m.bias) * (e - m.bias);
  var /= n;
  if (!(std::abs(m.rmse * m.rmse - (m.bias * m.bias + var)) <=
        1e-9 * std::max(1.0, m.rmse * m.rmse)))
    throw NumericError("metrics: rmse/bias/variance identity violated");

  if (!reference.empty()) {
    double ref_sum = 0.0;
    for (double r : reference) ref_sum += r;
    const double ref_mean = ref_sum / static_cast<double>(reference.size());
    if (ref_mean != 0.0) m.rrmse = m.rmse / ref_mean;
  }
  return m;
}

}  // namespace

MetricSet metrics(const Raster& predicted, const Raster& reference) {
  if (!predicted.same_geometry(reference))
    throw ArgumentError("metrics: rasters must share the grid geometry");
  std::vector<double> errors, refs;
  for (int r = 0; r < predicted.n_rows(); ++r)
    for (int c = 0; c < predicted.n_cols(); ++c) {
      if (predicted.is_nodata(r, c) || reference.is_nodata(r, c)) continue;
      errors.push_back(predicted.at(r, c) - reference.at(r, c));
      refs.push_back(reference.at(r, c));
    }
  if (errors.empty()) throw DataError("metrics: no cell is valid in both rasters");
  return metrics_over(errors, refs);
}

MetricSet metrics_from_errors(std::span<const double> errors) {
  if (errors.empty()) throw DataError("metrics: empty error vector");
  return metrics_over({errors.begin(), errors.end()}, {});
}

std::vector<double> distance_to_nearest(const Raster& grid, std::span<const Sample> samples) {
  std::vector<double> dist(grid.cell_count(), std::numeric_limits<double>::infinity());
  if (samples.empty()) return dist;

  std::vector<Point2D> positions(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) positions[i] = samples[i].position;
  // Bucket edge scaled to the mean sample spacing keeps ring searches short.
  const Aabb ext = grid.extent();
  const double span = std::max(ext.width(), ext.height());
  const double edge = std::max(span / std::sqrt(static_cast<double>(samples.size()) + 1.0),
                               grid.cell_size());
  const BucketIndex index(positions, edge);

  const std::size_t n_cols = static_cast<std::size_t>(grid.n_cols());
  parallel_chunks(grid.cell_count(), n_cols, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      const int row = static_cast<int>(c / n_cols);
      const int col = static_cast<int>(c % n_cols);
      dist[c] = index.nearest_distance(grid.cell_center(row, col));
    }
  });
  return dist;
}

ProximityReport proximity_analysis(const Raster& predicted, const Raster& reference,
                                   std::span<const Sample> samples,
                                   std::span<const double> radii) {
  if (!predicted.same_geometry(reference))
    throw ArgumentError("proximity: rasters must share the grid geometry");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1]))
      throw ArgumentError("proximity: radii must be strictly increasing");

  const std::vector<double> dist = distance_to_nearest(predicted, samples);

  // Radius 0 selects the cells that contain a footprint.
  std::set<std::size_t> containing;
  for (const Sample& s : samples)
    if (const auto cell = predicted.cell_of(s.position))
      containing.insert(static_cast<std::size_t>(cell->row) *
                            static_cast<std::size_t>(predicted.n_cols()) +
                        static_cast<std::size_t>(cell->col));

  ProximityReport report;
  for (double radius : radii) {
    std::vector<double> errors, refs;
    std::size_t flat = 0;
    for (int r = 0; r < predicted.n_rows(); ++r)
      for (int c = 0; c < predicted.n_cols(); ++c, ++flat) {
        if (predicted.is_nodata(r, c) || reference.is_nodata(r, c)) continue;
        bool qualifies;
        if (radius == 0.0)
          qualifies = containing.count(flat) > 0;
        else if (std::isinf(radius))
          qualifies = true;
        else
          qualifies = dist[flat] <= radius;
        if (!qualifies) continue;
        errors.push_back(predicted.at(r, c) - reference.at(r, c));
        refs.push_back(reference.at(r, c));
      }
    ProximityRow row;
    row.radius = radius;
    row.n = errors.size();
    if (!errors.empty()) row.metrics = metrics_over(errors, refs);
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<TransectPoint> sample_along_segment(const Raster& raster, Point2D from, Point2D to,
                                                double step) {
  if (!(step > 0.0)) throw ArgumentError("transect: step must be > 0");
  const double length = distance(from, to);
  const double dx = length > 0.0 ? (to.x - from.x) / length : 0.0;
  const double dy = length > 0.0 ? (to.y - from.y) / length : 0.0;

  std::vector<TransectPoint> out;
  for (double d = 0.0;; d += step) {
    const bool last = d >= length;
    const double at = last ? length : d;
    TransectPoint p;
    p.distance = at;
    p.position = {from.x + dx * at, from.y + dy * at};
    if (const auto cell = raster.cell_of(p.position); cell && !raster.is_nodata(cell->row, cell->col)) {
      p.value = raster.at(cell->row, cell->col);
      p.valid = true;
    }
    out.push_back(p);
    if (last) break;
  }
  return out;
}

MetricSet pooled_metrics(const std::vector<std::vector<double>>& per_site_errors) {
  std::vector<double> all;
  for (const auto& v : per_site_errors) all.insert(all.end(), v.begin(), v.end());
  if (all.empty()) throw DataError("pooled_metrics: all error vectors are empty");
  return metrics_over(all, {});
}

}  // namespace geokrig
