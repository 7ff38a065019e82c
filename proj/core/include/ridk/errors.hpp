#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ridk {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Argument inside the domain but outside the range where a result is validated.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class SizeMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A truncated spectral sum whose tail is not negligible.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, int suggested_jmax)
      : std::runtime_error(what), suggested_jmax_(suggested_jmax) {}
  int suggested_jmax() const noexcept { return suggested_jmax_; }

 private:
  int suggested_jmax_;
};

/// Grid too coarse to resolve the noise covariance.
class ResolutionError : public std::runtime_error {
 public:
  ResolutionError(const std::string& what, int suggested_points)
      : std::runtime_error(what), suggested_points_(suggested_points) {}
  int suggested_points() const noexcept { return suggested_points_; }

 private:
  int suggested_points_;
};

/// Non-finite values appeared while time stepping.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ridk
