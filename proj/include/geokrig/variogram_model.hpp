#pragma once

#include <string>

#include "geokrig/errors.hpp"

namespace geokrig {

enum class VariogramKind { Exponential, Spherical, Gaussian, Linear, Circular };

/// Isotropic parametric semivariogram. `sill` is the total sill (nugget plus
/// partial sill) and `range` the practical range: the exponential and
/// gaussian forms carry a factor 3 in the exponent so gamma(range) reaches
/// about 95% of the sill, the usual reading of a reported range.
struct VariogramModel {
  VariogramKind kind = VariogramKind::Exponential;
  double nugget = 0.0;  // m^2
  double sill = 0.0;    // m^2, total
  double range = 1.0;   // m
};

/// Throws ArgumentError unless nugget >= 0, sill >= nugget and range > 0.
void validate(const VariogramModel& model);

/// gamma(h). Exactly 0 at h = 0; jumps to the nugget as h -> 0+.
double model_eval(const VariogramModel& model, double h);

/// C(h) = sill - gamma(h) under second-order stationarity. C(0) = sill.
double covariance_from_model(const VariogramModel& model, double h);

const char* to_string(VariogramKind kind);
VariogramKind variogram_kind_from_string(const std::string& name);

}  // namespace geokrig
