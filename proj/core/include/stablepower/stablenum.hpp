#pragma once

// Signed log-domain scalars and log-domain reductions.
//
// A SignedLog stores a real number as (sign, ln|value|). Sums use the
// log-sum-exp shift, differences use ln(e^p - e^q) = p + ln(1 - e^(q-p)), so no
// finite input can overflow.

#include <cmath>
#include <limits>
#include <span>

namespace stablepower {

struct SignedLog {
  int sign = 0;                                             // -1, 0 or +1
  double logmag = -std::numeric_limits<double>::infinity();  // ln|value|

  static constexpr SignedLog zero() noexcept { return {}; }

  /// Builds (sign, logmag); a zero sign or -inf logmag yields canonical zero.
  static SignedLog from_log(int sign, double logmag) noexcept;

  /// Exact representation of a plain double.
  static SignedLog from_value(double value) noexcept;

  bool is_zero() const noexcept { return sign == 0; }

  /// sign * exp(logmag); overflows to +-inf when the magnitude is not representable.
  double value() const noexcept;

  SignedLog operator-() const noexcept { return {-sign, logmag}; }

  friend bool operator==(const SignedLog&, const SignedLog&) = default;
};

/// Opposite-sign magnitudes closer than this (in logmag) cancel to zero.
inline constexpr double kCancellationThreshold = 1e-15;

/// ln(sum_i exp(terms_i)), shifted by the maximum term. Throws DomainError on empty input.
double lse(std::span<const double> terms);

SignedLog signed_add(SignedLog a, SignedLog b) noexcept;
SignedLog signed_mul(SignedLog a, SignedLog b) noexcept;

/// Signed log of the arithmetic mean. Throws DomainError on empty input.
SignedLog log_mean(std::span<const SignedLog> values);

/// ln of the population variance (1/n denominator); -inf for constant input.
/// Throws DomainError for fewer than two values.
double log_variance(std::span<const SignedLog> values);

/// ln|e^t - 1| without cancellation for small |t| and without overflow for large t.
double log_abs_expm1(double t) noexcept;

/// ln(1 - e^d) for d < 0.
double log1m_exp(double d) noexcept;

}  // namespace stablepower
