#pragma once

#include <cstddef>

#include "geokrig/semivariogram.hpp"
#include "geokrig/variogram_model.hpp"

namespace geokrig {

enum class FitWeighting { Uniform, PairCount };

struct FitResult {
  VariogramModel model;
  double r_squared = 0.0;
  double residual_sum_squares = 0.0;
  std::size_t bins_used = 0;
  bool degenerate = false;  // flat input collapsed to a pure-nugget model
};

/// Weighted least-squares fit of a parametric model to the populated bins of
/// an empirical semivariogram, subject to nugget >= 0, sill >= nugget,
/// range > 0. Bounded Nelder-Mead from a deterministic multi-start grid; the
/// returned result is the minimum-RSS start, ties broken by start order.
///
/// A flat semivariogram (all populated bins equal) degenerates to
/// nugget = sill = value with range = max_lag and the degenerate flag set,
/// so downstream kriging can continue with a pure-nugget model.
FitResult fit(const EmpiricalSemivariogram& sv, VariogramKind kind,
              FitWeighting weighting = FitWeighting::PairCount);

/// Pools two semivariograms on the same bin grid (pair-count-weighted
/// per-bin averages, equivalent to pooling the pairs) and fits the result.
FitResult fit_combined(const EmpiricalSemivariogram& sv_a, const EmpiricalSemivariogram& sv_b,
                       VariogramKind kind, FitWeighting weighting = FitWeighting::PairCount);

/// The per-bin pooled merge used by fit_combined.
EmpiricalSemivariogram merge_semivariograms(const EmpiricalSemivariogram& sv_a,
                                            const EmpiricalSemivariogram& sv_b);

}  // namespace geokrig
