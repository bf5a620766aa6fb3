#include "geokrig/kriging.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "geokrig/spatial_index.hpp"
#include "geokrig/threading.hpp"

namespace geokrig {

namespace {

constexpr double kJitterLadder[] = {0.0, 1e-10, 1e-8, 1e-6};
constexpr double kRcondFloor = 1e-14;

struct MergedSample {
  Point2D position;
  double value;
  std::vector<std::size_t> members;  // original indices sharing the position
};

std::vector<MergedSample> merge_for_solve(std::span<const Sample> samples,
                                          std::span<const std::size_t> selection,
                                          KrigingConfig::DuplicatePolicy policy) {
  std::map<std::pair<double, double>, std::size_t> by_position;
  std::vector<MergedSample> merged;
  for (std::size_t idx : selection) {
    const Sample& s = samples[idx];
    const auto key = std::make_pair(s.position.x, s.position.y);
    const auto it = by_position.find(key);
    if (it == by_position.end()) {
      by_position.emplace(key, merged.size());
      merged.push_back({s.position, s.value, {idx}});
    } else {
      if (policy == KrigingConfig::DuplicatePolicy::Error)
        throw ArgumentError("kriging: duplicate sample position with duplicate_policy=Error");
      merged[it->second].members.push_back(idx);
    }
  }
  for (MergedSample& m : merged) {
    if (m.members.size() == 1) continue;
    double sum = 0.0;
    for (std::size_t idx : m.members) sum += samples[idx].value;
    m.value = sum / static_cast<double>(m.members.size());
  }
  return merged;
}

/// Factored bordered OK system over a fixed merged sample set. The matrix is
/// factored once; each target only assembles a right-hand side.
class OkSolver {
 public:
  OkSolver(std::vector<MergedSample> merged, const VariogramModel& model, double initial_jitter)
      : merged_(std::move(merged)), model_(model) {
    const Eigen::Index n = static_cast<Eigen::Index>(merged_.size());
    Eigen::MatrixXd a(n + 1, n + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      a(i, i) = 0.0;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double g = model_eval(model_, distance(merged_[i].position, merged_[j].position));
        a(i, j) = g;
        a(j, i) = g;
      }
      a(i, n) = 1.0;
      a(n, i) = 1.0;
    }
    a(n, n) = 0.0;

    double rcond = 0.0;
    for (double step : kJitterLadder) {
      const double ridge = std::max(initial_jitter, step * model_.sill);
      Eigen::MatrixXd trial = a;
      for (Eigen::Index i = 0; i < n; ++i) trial(i, i) += ridge;
      lu_.compute(trial);
      rcond = lu_.rcond();
      if (std::isfinite(rcond) && rcond > kRcondFloor) return;
    }
    std::ostringstream msg;
    msg << "kriging: singular system for " << merged_.size()
        << " samples after jitter escalation (rcond=" << rcond << ")";
    throw NumericError(msg.str());
  }

  std::size_t size() const { return merged_.size(); }

  KrigingSolution solve(Point2D target) const {
    const Eigen::Index n = static_cast<Eigen::Index>(merged_.size());
    Eigen::VectorXd b(n + 1);
    for (Eigen::Index i = 0; i < n; ++i)
      b(i) = model_eval(model_, distance(merged_[i].position, target));
    b(n) = 1.0;

    const Eigen::VectorXd x = lu_.solve(b);

    KrigingSolution sol;
    sol.lagrange = x(n);
    double estimate = 0.0;
    double variance = x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      estimate += x(i) * merged_[i].value;
      variance += x(i) * b(i);
      const auto& members = merged_[static_cast<std::size_t>(i)].members;
      const double split = x(i) / static_cast<double>(members.size());
      for (std::size_t original : members) sol.weights.emplace_back(original, split);
    }
    std::sort(sol.weights.begin(), sol.weights.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    sol.estimate = estimate;
    sol.variance = std::max(variance, 0.0);
    return sol;
  }

 private:
  std::vector<MergedSample> merged_;
  VariogramModel model_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

}  // namespace

std::pair<std::vector<Sample>, std::size_t> merge_duplicates(
    std::span<const Sample> samples, KrigingConfig::DuplicatePolicy policy) {
  const auto merged = merge_for_solve(samples, all_indices(samples.size()), policy);
  std::vector<Sample> out;
  out.reserve(merged.size());
  for (const MergedSample& m : merged) {
    Sample s = samples[m.members.front()];
    s.value = m.value;
    out.push_back(s);
  }
  return {std::move(out), samples.size() - merged.size()};
}

KrigingSolution solve_weights(std::span<const Sample> samples, Point2D target,
                              const VariogramModel& model, const KrigingConfig& config) {
  validate(model);
  std::vector<std::size_t> selection;
  if (config.neighborhood) {
    const auto& nn = *config.neighborhood;
    if (nn.k < 1 || !(nn.max_radius > 0.0))
      throw ArgumentError("kriging: Nearest neighborhood requires k >= 1 and max_radius > 0");
    std::vector<Point2D> positions(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) positions[i] = samples[i].position;
    const BucketIndex index(positions, nn.max_radius);
    selection = index.nearest_within(target, nn.k, nn.max_radius);
  } else {
    selection = all_indices(samples.size());
  }
  if (selection.empty()) throw EmptyNeighborhood("kriging: no samples in neighborhood");

  const OkSolver solver(merge_for_solve(samples, selection, config.duplicate_policy), model,
                        config.jitter);
  return solver.solve(target);
}

std::pair<double, double> predict_point(std::span<const Sample> samples, Point2D target,
                                        const VariogramModel& model,
                                        const KrigingConfig& config) {
  const KrigingSolution sol = solve_weights(samples, target, model, config);
  return {sol.estimate, sol.variance};
}

GridPrediction predict_grid(std::span<const Sample> samples, const GridSpec& grid,
                            const VariogramModel& model, const KrigingConfig& config) {
  validate(model);
  if (grid.n_rows <= 0 || grid.n_cols <= 0 || !(grid.cell_size > 0.0))
    throw ArgumentError("predict_grid: invalid grid spec");
  if (samples.empty()) throw ArgumentError("predict_grid: need at least one sample");

  Raster estimates(grid.origin, grid.cell_size, grid.n_rows, grid.n_cols);
  Raster variances(grid.origin, grid.cell_size, grid.n_rows, grid.n_cols);

  const std::size_t n_cells = estimates.cell_count();
  const std::size_t chunk = static_cast<std::size_t>(grid.n_cols);  // one row per chunk

  if (!config.neighborhood) {
    const OkSolver solver(
        merge_for_solve(samples, all_indices(samples.size()), config.duplicate_policy), model,
        config.jitter);
    parallel_chunks(n_cells, chunk, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t c = begin; c < end; ++c) {
        const int row = static_cast<int>(c) / grid.n_cols;
        const int col = static_cast<int>(c) % grid.n_cols;
        const KrigingSolution sol = solver.solve(estimates.cell_center(row, col));
        estimates.at(row, col) = sol.estimate;
        variances.at(row, col) = sol.variance;
      }
    });
    return {std::move(estimates), std::move(variances)};
  }

  const auto& nn = *config.neighborhood;
  if (nn.k < 1 || !(nn.max_radius > 0.0))
    throw ArgumentError("kriging: Nearest neighborhood requires k >= 1 and max_radius > 0");
  std::vector<Point2D> positions(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) positions[i] = samples[i].position;
  const BucketIndex index(positions, nn.max_radius);

  parallel_chunks(n_cells, chunk, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      const int row = static_cast<int>(c) / grid.n_cols;
      const int col = static_cast<int>(c) % grid.n_cols;
      const Point2D center = estimates.cell_center(row, col);
      const auto selection = index.nearest_within(center, nn.k, nn.max_radius);
      if (selection.empty()) {
        estimates.at(row, col) = 0.0;  // fall back to the regression prediction
        variances.set_nodata(row, col);
        continue;
      }
      const OkSolver solver(merge_for_solve(samples, selection, config.duplicate_policy), model,
                            config.jitter);
      const KrigingSolution sol = solver.solve(center);
      estimates.at(row, col) = sol.estimate;
      variances.at(row, col) = sol.variance;
    }
  });
  return {std::move(estimates), std::move(variances)};
}

}  // namespace geokrig
