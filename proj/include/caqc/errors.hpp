#pragma once

#include <stdexcept>
#include <string>

namespace caqc {

/// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Operands act on different numbers of qubits.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A ring is too small (or a site index out of range) for the requested
/// geometry.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A transition rule fails the Clifford-automaton consistency checks.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// No period was found below the configured cap.
class PeriodNotFoundError : public Error {
 public:
  using Error::Error;
};

/// The two-step rewriting identity has no solution within the expected
/// support bound.
class DecompositionError : public Error {
 public:
  using Error::Error;
};

/// A construction was invoked on a rule that falls into the row-wise
/// GHZ degenerate case; callers should use the dedicated builder.
class GhzCaseError : public Error {
 public:
  using Error::Error;
};

/// A construction is not defined for the given rule class.
class UnsupportedRuleError : public Error {
 public:
  using Error::Error;
};

/// A projective measurement was forced onto an outcome of (near) zero
/// probability.
class ImpossibleOutcomeError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text, JSON, or binary data.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace caqc
