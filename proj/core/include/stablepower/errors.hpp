#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace stablepower {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (x <= 0 for Box-Cox, Lambert W argument below -1/e, empty input, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The data cannot define a likelihood: fewer than two points or zero variance.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text: CSV, JSON records or numbers.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent options, e.g. an empty feasible lambda interval.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A transformed value is not representable as a double. Carries the value's
/// sign and natural-log magnitude so callers can still report it.
class OverflowError : public Error {
 public:
  OverflowError(const std::string& what, int sign, double log_magnitude)
      : Error(what), sign_(sign), log_magnitude_(log_magnitude) {}

  int sign() const noexcept { return sign_; }
  double log_magnitude() const noexcept { return log_magnitude_; }
  double log10_magnitude() const noexcept { return log_magnitude_ / std::log(10.0); }

 private:
  int sign_;
  double log_magnitude_;
};

}  // namespace stablepower
