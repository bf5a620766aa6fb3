#include "geokrig/variogram_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace geokrig {

void validate(const VariogramModel& model) {
  if (!(model.nugget >= 0.0)) throw ArgumentError("variogram model: nugget must be >= 0");
  if (!(model.sill >= model.nugget))
    throw ArgumentError("variogram model: sill must be >= nugget");
  if (!(model.range > 0.0)) throw ArgumentError("variogram model: range must be > 0");
  if (!std::isfinite(model.nugget) || !std::isfinite(model.sill) || !std::isfinite(model.range))
    throw ArgumentError("variogram model: parameters must be finite");
}

double model_eval(const VariogramModel& model, double h) {
  if (!(h >= 0.0)) throw ArgumentError("model_eval: lag must be >= 0");
  if (h == 0.0) return 0.0;

  const double partial = model.sill - model.nugget;
  const double r = model.range;
  switch (model.kind) {
    case VariogramKind::Exponential:
      return model.nugget + partial * (1.0 - std::exp(-3.0 * h / r));
    case VariogramKind::Spherical: {
      if (h >= r) return model.sill;
      const double u = h / r;
      return model.nugget + partial * (1.5 * u - 0.5 * u * u * u);
    }
    case VariogramKind::Gaussian:
      return model.nugget + partial * (1.0 - std::exp(-3.0 * h * h / (r * r)));
    case VariogramKind::Linear:
      return model.nugget + partial * std::min(h / r, 1.0);
    case VariogramKind::Circular: {
      if (h >= r) return model.sill;
      const double u = h / r;
      const double s = std::acos(u) - u * std::sqrt(1.0 - u * u);
      return model.nugget + partial * (1.0 - (2.0 / std::numbers::pi) * s);
    }
  }
  throw ArgumentError("model_eval: unknown variogram kind");
}

double covariance_from_model(const VariogramModel& model, double h) {
  return model.sill - model_eval(model, h);
}

const char* to_string(VariogramKind kind) {
  switch (kind) {
    case VariogramKind::Exponential: return "exponential";
    case VariogramKind::Spherical: return "spherical";
    case VariogramKind::Gaussian: return "gaussian";
    case VariogramKind::Linear: return "linear";
    case VariogramKind::Circular: return "circular";
  }
  return "unknown";
}

VariogramKind variogram_kind_from_string(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "exponential") return VariogramKind::Exponential;
  if (lower == "spherical") return VariogramKind::Spherical;
  if (lower == "gaussian") return VariogramKind::Gaussian;
  if (lower == "linear") return VariogramKind::Linear;
  if (lower == "circular") return VariogramKind::Circular;
  throw ArgumentError("unknown variogram kind: " + name);
}

}  // namespace geokrig
