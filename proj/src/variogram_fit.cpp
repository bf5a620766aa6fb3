#include "geokrig/variogram_fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace geokrig {

namespace {

struct BinPoint {
  double h;
  double gamma;
  double w;
};

struct Objective {
  const std::vector<BinPoint>& points;
  VariogramKind kind;
  double range_floor;
  double range_ceil;  // keeps near-linear data from driving range (and sill) unbounded

  std::array<double, 3> project(std::array<double, 3> p) const {
    p[0] = std::max(p[0], 0.0);   // nugget
    p[1] = std::max(p[1], p[0]);  // sill >= nugget
    p[2] = std::clamp(p[2], range_floor, range_ceil);
    return p;
  }

  double operator()(const std::array<double, 3>& raw) const {
    const auto p = project(raw);
    const VariogramModel m{kind, p[0], p[1], p[2]};
    double rss = 0.0;
    for (const BinPoint& bp : points) {
      const double r = model_eval(m, bp.h) - bp.gamma;
      rss += bp.w * r * r;
    }
    return rss;
  }
};

struct NmOutcome {
  std::array<double, 3> x{};
  double f = std::numeric_limits<double>::infinity();
  bool converged = false;
};

// Standard Nelder-Mead on 3 parameters with reflection 1, expansion 2,
// contraction 0.5 and shrink 0.5.
NmOutcome nelder_mead(const Objective& objective, const std::array<double, 3>& start,
                      const std::array<double, 3>& steps, std::size_t max_evals) {
  constexpr int kDim = 3;
  struct Vertex {
    std::array<double, 3> x;
    double f;
  };
  std::array<Vertex, kDim + 1> simplex;
  std::size_t evals = 0;
  auto eval = [&](const std::array<double, 3>& x) {
    ++evals;
    return objective(x);
  };

  simplex[0] = {start, eval(start)};
  for (int d = 0; d < kDim; ++d) {
    auto x = start;
    x[d] += steps[d];
    simplex[d + 1] = {x, eval(x)};
  }

  auto order = [&] {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };
  order();

  NmOutcome out;
  while (evals < max_evals) {
    const double spread = simplex[kDim].f - simplex[0].f;
    if (spread <= 1e-14 * (1.0 + std::abs(simplex[0].f))) {
      out.converged = true;
      break;
    }

    std::array<double, 3> centroid{};
    for (int v = 0; v < kDim; ++v)
      for (int d = 0; d < kDim; ++d) centroid[d] += simplex[v].x[d] / kDim;

    auto along = [&](double t) {
      std::array<double, 3> x;
      for (int d = 0; d < kDim; ++d) x[d] = centroid[d] + t * (simplex[kDim].x[d] - centroid[d]);
      return x;
    };

    const auto xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < simplex[0].f) {
      const auto xe = along(-2.0);
      const double fe = eval(xe);
      simplex[kDim] = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr < simplex[kDim - 1].f) {
      simplex[kDim] = {xr, fr};
    } else {
      const bool outside = fr < simplex[kDim].f;
      const auto xc = along(outside ? -0.5 : 0.5);
      const double fc = eval(xc);
      if (fc < std::min(fr, simplex[kDim].f)) {
        simplex[kDim] = {xc, fc};
      } else {
        for (int v = 1; v <= kDim; ++v) {
          for (int d = 0; d < kDim; ++d)
            simplex[v].x[d] = simplex[0].x[d] + 0.5 * (simplex[v].x[d] - simplex[0].x[d]);
          simplex[v].f = eval(simplex[v].x);
        }
      }
    }
    order();
  }

  out.x = simplex[0].x;
  out.f = simplex[0].f;
  return out;
}

}  // namespace

FitResult fit(const EmpiricalSemivariogram& sv, VariogramKind kind, FitWeighting weighting) {
  std::vector<BinPoint> points;
  for (const LagBin& b : sv.bins) {
    if (b.pair_count == 0) continue;
    const double w =
        weighting == FitWeighting::PairCount ? static_cast<double>(b.pair_count) : 1.0;
    points.push_back({b.lag_center, b.semivariance, w});
  }
  if (points.size() < 3)
    throw DataError("fit: need at least 3 populated bins, have " +
                    std::to_string(points.size()));
  bool below = false, above = false;
  for (const BinPoint& p : points) {
    below = below || p.h < sv.bin_width;
    above = above || p.h > sv.bin_width;
  }
  if (!below || !above)
    throw DataError("fit: populated bins must span lags below and above the bin width");

  double gamma_min = points[0].gamma, gamma_max = points[0].gamma;
  double w_total = 0.0, gamma_w_sum = 0.0;
  for (const BinPoint& p : points) {
    gamma_min = std::min(gamma_min, p.gamma);
    gamma_max = std::max(gamma_max, p.gamma);
    w_total += p.w;
    gamma_w_sum += p.w * p.gamma;
  }

  FitResult result;
  result.bins_used = points.size();

  // Flat input: nugget = sill and the range is unidentifiable.
  if (gamma_max - gamma_min <= 1e-12 * std::max(1.0, std::abs(gamma_max))) {
    result.model = {kind, gamma_max, gamma_max, sv.max_lag};
    result.r_squared = 1.0;
    result.residual_sum_squares = 0.0;
    result.degenerate = true;
    return result;
  }

  const Objective objective{points, kind, 1e-9 * sv.max_lag, 20.0 * sv.max_lag};

  const double value_scale = std::max(gamma_max, 1e-300);
  std::array<double, 2> nugget_starts{0.0, gamma_min};
  std::array<double, 4> range_starts{0.25 * sv.max_lag, 0.5 * sv.max_lag, sv.max_lag,
                                     2.0 * sv.max_lag};

  NmOutcome best;
  bool any_converged = false;
  for (double nugget0 : nugget_starts) {
    for (double range0 : range_starts) {
      const std::array<double, 3> start{nugget0, gamma_max, range0};
      const std::array<double, 3> steps{0.1 * value_scale, 0.1 * value_scale, 0.25 * range0};
      const NmOutcome run = nelder_mead(objective, start, steps, 4000);
      any_converged = any_converged || run.converged;
      if (run.f < best.f) best = run;
    }
  }
  // Polish from the incumbent with a tighter simplex.
  for (int round = 0; round < 2; ++round) {
    const std::array<double, 3> steps{1e-3 * value_scale, 1e-3 * value_scale,
                                      1e-3 * std::max(best.x[2], objective.range_floor)};
    const NmOutcome run = nelder_mead(objective, best.x, steps, 4000);
    any_converged = any_converged || run.converged;
    if (run.f < best.f) best = run;
  }

  const auto p = objective.project(best.x);
  result.model = {kind, p[0], p[1], p[2]};
  result.residual_sum_squares = best.f;

  const double gamma_mean = gamma_w_sum / w_total;
  double tss = 0.0;
  for (const BinPoint& bp : points) tss += bp.w * (bp.gamma - gamma_mean) * (bp.gamma - gamma_mean);
  result.r_squared = tss > 0.0 ? 1.0 - best.f / tss : 1.0;

  if (!any_converged) {
    std::ostringstream msg;
    msg << "fit: optimizer did not converge within budget; best so far " << to_string(kind)
        << " nugget=" << p[0] << " sill=" << p[1] << " range=" << p[2] << " rss=" << best.f;
    throw NumericError(msg.str());
  }
  return result;
}

EmpiricalSemivariogram merge_semivariograms(const EmpiricalSemivariogram& sv_a,
                                            const EmpiricalSemivariogram& sv_b) {
  if (sv_a.bin_width != sv_b.bin_width || sv_a.max_lag != sv_b.max_lag ||
      sv_a.bins.size() != sv_b.bins.size())
    throw ArgumentError("fit_combined: semivariograms must share the bin grid");

  EmpiricalSemivariogram merged;
  merged.bin_width = sv_a.bin_width;
  merged.max_lag = sv_a.max_lag;
  merged.coincident_pairs = sv_a.coincident_pairs + sv_b.coincident_pairs;
  merged.bins = sv_a.bins;
  for (std::size_t i = 0; i < merged.bins.size(); ++i) {
    LagBin& m = merged.bins[i];
    const LagBin& b = sv_b.bins[i];
    const std::size_t total = m.pair_count + b.pair_count;
    if (total == 0) {
      m.semivariance = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    // Pooling the accumulated sums reproduces a direct computation over the
    // union of the pair sets.
    m.sum = m.sum + b.sum;
    m.pair_count = total;
    m.semivariance = m.sum / static_cast<double>(total);
  }
  return merged;
}

FitResult fit_combined(const EmpiricalSemivariogram& sv_a, const EmpiricalSemivariogram& sv_b,
                       VariogramKind kind, FitWeighting weighting) {
  return fit(merge_semivariograms(sv_a, sv_b), kind, weighting);
}

}  // namespace geokrig
