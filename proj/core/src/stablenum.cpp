#include "stablepower/stablenum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "stablepower/errors.hpp"

namespace stablepower {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.69314718055994530942;

}  // namespace

SignedLog SignedLog::from_log(int sign, double logmag) noexcept {
  if (sign == 0 || logmag == kNegInf) return zero();
  return {sign > 0 ? 1 : -1, logmag};
}

SignedLog SignedLog::from_value(double value) noexcept {
  if (value == 0.0) return zero();
  return {value > 0.0 ? 1 : -1, std::log(std::fabs(value))};
}

double SignedLog::value() const noexcept {
  if (sign == 0) return 0.0;
  return sign * std::exp(logmag);
}

double log1m_exp(double d) noexcept {
  // Two regimes, each free of cancellation (Maechler's log1mexp).
  return d > -kLn2 ? std::log(-std::expm1(d)) : std::log1p(-std::exp(d));
}

double log_abs_expm1(double t) noexcept {
  if (t == 0.0) return kNegInf;
  if (t > 0.0) return t + log1m_exp(-t);
  return log1m_exp(t);
}

double lse(std::span<const double> terms) {
  if (terms.empty()) throw DomainError("lse: empty input");
  const auto max_it = std::max_element(terms.begin(), terms.end());
  const double c = *max_it;
  if (c == kNegInf) return kNegInf;
  if (!std::isfinite(c)) return c;
  double rest = 0.0;
  for (auto it = terms.begin(); it != terms.end(); ++it) {
    if (it != max_it) rest += std::exp(*it - c);
  }
  return c + std::log1p(rest);
}

SignedLog signed_add(SignedLog a, SignedLog b) noexcept {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const bool a_larger = a.logmag >= b.logmag;
  const double p = a_larger ? a.logmag : b.logmag;
  const double q = a_larger ? b.logmag : a.logmag;
  if (a.sign == b.sign) {
    if (!std::isfinite(p)) return {a.sign, p};
    return {a.sign, p + std::log1p(std::exp(q - p))};
  }
  if (p - q < kCancellationThreshold) return SignedLog::zero();
  const int sign = a_larger ? a.sign : b.sign;
  if (!std::isfinite(p)) return {sign, p};
  return {sign, p + log1m_exp(q - p)};
}

SignedLog signed_mul(SignedLog a, SignedLog b) noexcept {
  if (a.is_zero() || b.is_zero()) return SignedLog::zero();
  return {a.sign * b.sign, a.logmag + b.logmag};
}

SignedLog log_mean(std::span<const SignedLog> values) {
  if (values.empty()) throw DomainError("log_mean: empty input");
  const double log_n = std::log(static_cast<double>(values.size()));

  int common_sign = 0;
  bool mixed = false;
  for (const SignedLog& v : values) {
    if (v.is_zero()) continue;
    if (common_sign == 0) {
      common_sign = v.sign;
    } else if (v.sign != common_sign) {
      mixed = true;
      break;
    }
  }
  if (common_sign == 0) return SignedLog::zero();

  if (!mixed) {
    // ln((1/n) sum e^l_i) = c + ln(1 + (1/n) sum (e^(l_i - c) - 1)) with c = max l_i.
    // Every expm1 term lies in [-1, 0], so the sum has no cancellation and the
    // result keeps full relative precision even when all l_i are nearly equal.
    double c = kNegInf;
    for (const SignedLog& v : values) c = std::max(c, v.logmag);
    double acc = 0.0;
    for (const SignedLog& v : values) acc += std::expm1(v.logmag - c);
    return SignedLog::from_log(common_sign,
                               c + std::log1p(acc / static_cast<double>(values.size())));
  }

  SignedLog sum = SignedLog::zero();
  for (const SignedLog& v : values) sum = signed_add(sum, v);
  if (sum.is_zero()) return sum;
  return {sum.sign, sum.logmag - log_n};
}

double log_variance(std::span<const SignedLog> values) {
  if (values.size() < 2) throw DomainError("log_variance: need at least two values");
  const SignedLog mean = log_mean(values);
  std::vector<double> twice_log_residual;
  twice_log_residual.reserve(values.size());
  for (const SignedLog& v : values) {
    const SignedLog r = signed_add(v, -mean);
    twice_log_residual.push_back(r.is_zero() ? kNegInf : 2.0 * r.logmag);
  }
  return lse(twice_log_residual) - std::log(static_cast<double>(values.size()));
}

}  // namespace stablepower
