#pragma once

#include <stdexcept>
#include <string>

namespace geokrig {

/// Base class for all geokrig errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A caller passed an argument that violates a documented precondition.
struct ArgumentError : Error {
  using Error::Error;
};

/// An input file is malformed; the message carries the offending line.
struct ParseError : Error {
  using Error::Error;
};

/// Inputs are well-formed but cannot produce a result (no samples, empty
/// overlap, too few populated bins, ...).
struct DataError : Error {
  using Error::Error;
};

/// A numerical procedure failed (singular system, non-PSD covariance,
/// optimizer non-convergence).
struct NumericError : Error {
  using Error::Error;
};

/// Kriging neighborhood selection found no samples for a target; callers
/// substitute the documented fallback value.
struct EmptyNeighborhood : Error {
  using Error::Error;
};

}  // namespace geokrig
