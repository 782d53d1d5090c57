#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ctdde {

/// Base class for every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Expression text could not be parsed. `position()` is a 0-based byte
/// offset into the input at which the problem was detected.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Point evaluation failed: division by zero, invalid power, or a NaN was
/// produced. NaNs are always reported, never returned.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// Interval evaluation failed. Carries the offending sub-interval when one
/// is known (e.g. a denominator enclosure straddling zero).
class IntervalError : public Error {
 public:
  explicit IntervalError(const std::string& what) : Error(what) {}
  IntervalError(const std::string& what, double lo, double hi)
      : Error(what + " (offending interval [" + std::to_string(lo) + ", " +
              std::to_string(hi) + "])"),
        lo_(lo),
        hi_(hi),
        has_interval_(true) {}

  bool has_interval() const noexcept { return has_interval_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_ = 0.0, hi_ = 0.0;
  bool has_interval_ = false;
};

class TrajectoryError : public Error {
 public:
  using Error::Error;
};

class SimulationError : public Error {
 public:
  using Error::Error;
};

class AnalysisError : public Error {
 public:
  using Error::Error;
};

/// Equation-spec file violates the documented schema (CLI exit code 2).
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctdde
