#pragma once

#include <stdexcept>
#include <string>

namespace symcap {

/// Malformed or out-of-domain input (non-skew forms, non-SPD matrices, bad radii, ...).
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

class DimensionMismatch : public InvalidInput {
 public:
  explicit DimensionMismatch(const std::string& what) : InvalidInput(what) {}
};

/// The restriction of the symplectic form to a subspace is degenerate.
class NotSymplectic : public InvalidInput {
 public:
  explicit NotSymplectic(const std::string& what) : InvalidInput(what) {}
};

/// The origin is not an interior point of a body (after translation, for polytopes, ...).
class OriginNotInterior : public InvalidInput {
 public:
  explicit OriginNotInterior(const std::string& what) : InvalidInput(what) {}
};

class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Characteristic reconstruction hit a degenerate (zero-energy) loop.
class ReconstructionFailed : public NumericalFailure {
 public:
  explicit ReconstructionFailed(const std::string& what) : NumericalFailure(what) {}
};

}  // namespace symcap
