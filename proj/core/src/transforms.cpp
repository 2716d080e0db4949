#include "stablepower/transforms.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "stablepower/errors.hpp"

namespace stablepower {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// exp() of anything above this overflows a double.
constexpr double kMaxExpArg = 709.0;
// Largest |y - ln x| treated as the double root at lambda = 0.
constexpr double kSingularTolerance = 1e-12;

void require_positive(double x, const char* who) {
  if (!(x > 0.0)) throw DomainError(std::string(who) + ": requires x > 0");
}

void require_finite_lambda(double lambda, const char* who) {
  if (!std::isfinite(lambda)) throw DomainError(std::string(who) + ": lambda must be finite");
}

[[noreturn]] void throw_overflow(const char* who, int sign, double logmag) {
  throw OverflowError(std::string(who) + ": transformed value overflows a double "
                          "(log10 magnitude " + std::to_string(logmag / std::log(10.0)) + ")",
                      sign, logmag);
}

// (e^(lambda*log_base) - 1) / lambda for log_base > 0: the Box-Cox value written
// in terms of ln x so Yeo-Johnson can pass log1p(|x|).
double power_branch(double lambda, double log_base, const char* who) {
  if (lambda == 0.0) return log_base;
  const double t = lambda * log_base;
  const double r = std::expm1(t) / lambda;
  if (!std::isfinite(r)) {
    throw_overflow(who, log_base > 0.0 ? 1 : -1, log_abs_expm1(t) - std::log(std::fabs(lambda)));
  }
  return r;
}

// Signed log of the same quantity; the sign always follows log_base.
SignedLog power_branch_log(double lambda, double log_base) {
  if (log_base == 0.0) return SignedLog::zero();
  const int sign = log_base > 0.0 ? 1 : -1;
  if (lambda == 0.0) return {sign, std::log(std::fabs(log_base))};
  return SignedLog::from_log(sign,
                             log_abs_expm1(lambda * log_base) - std::log(std::fabs(lambda)));
}

// Forward residual check of a candidate root of (e^(lambda*L) - 1)/lambda = y.
bool inverse_holds(double lambda, double log_x, double y) {
  if (!std::isfinite(lambda)) return false;
  const double t = lambda * log_x;
  if (std::fabs(t) <= kMaxExpArg) {
    const double psi = lambda == 0.0 ? log_x : std::expm1(t) / lambda;
    return std::fabs(psi - y) <= kInverseTolerance * std::max(1.0, std::fabs(y));
  }
  const double arg = lambda * y;
  if (!(arg > -1.0)) return false;
  return std::fabs(t - std::log1p(arg)) <= kInverseTolerance;
}

// Inverse of the Box-Cox form in lambda, given log_x = ln x != 0.
//
// With v = -ln(x)/y the equation becomes W(z) = v + ... where z = v e^v, so the
// spurious root lambda = 0 sits on one branch of W and the wanted root on the other.
double inverse_from_log(double log_x, double y, const char* who) {
  if (!std::isfinite(y) || y == 0.0) {
    throw DomainError(std::string(who) + ": target must be finite and nonzero");
  }
  if (log_x == 0.0) throw DomainError(std::string(who) + ": x is the zero point of the transform");
  const double v = -log_x / y;
  if (v >= 0.0) {
    throw DomainError(std::string(who) + ": target has the wrong sign for this x");
  }
  if (std::fabs(y - log_x) <= kSingularTolerance * std::max(1.0, std::fabs(y))) return 0.0;

  // ln(-z) with z = -x^(-1/y) ln(x) / y; never below representable range.
  const double log_neg_z = std::log(-v) + v;

  const double w0 = lambert_w(0, -std::exp(log_neg_z));
  const double lambda0 = -1.0 / y - w0 / log_x;
  if (inverse_holds(lambda0, log_x, y)) return lambda0;

  if (log_neg_z < -1.0) {
    const double wm1 = lambert_wm1_from_log(log_neg_z);
    const double lambda1 = -1.0 / y - wm1 / log_x;
    if (inverse_holds(lambda1, log_x, y)) return lambda1;
  }
  throw DomainError(std::string(who) + ": no Lambert W branch satisfies the forward check");
}

}  // namespace

std::string_view short_name(TransformKind kind) noexcept {
  return kind == TransformKind::BoxCox ? "bc" : "yj";
}

TransformKind parse_transform(std::string_view name) {
  if (name == "bc" || name == "boxcox" || name == "box-cox") return TransformKind::BoxCox;
  if (name == "yj" || name == "yeojohnson" || name == "yeo-johnson") {
    return TransformKind::YeoJohnson;
  }
  throw ConfigError("unknown transform '" + std::string(name) + "' (expected bc or yj)");
}

double boxcox(double lambda, double x) {
  require_positive(x, "boxcox");
  require_finite_lambda(lambda, "boxcox");
  return power_branch(lambda, std::log(x), "boxcox");
}

double yeojohnson(double lambda, double x) {
  require_finite_lambda(lambda, "yeojohnson");
  if (std::isnan(x)) throw DomainError("yeojohnson: NaN input");
  if (x >= 0.0) return power_branch(lambda, std::log1p(x), "yeojohnson");
  // psi(lambda, x) = -psi_+(2 - lambda, -x) for x < 0.
  try {
    return -power_branch(2.0 - lambda, std::log1p(-x), "yeojohnson");
  } catch (const OverflowError& e) {
    throw OverflowError(e.what(), -1, e.log_magnitude());
  }
}

SignedLog boxcox_log(double lambda, double x) {
  require_positive(x, "boxcox_log");
  require_finite_lambda(lambda, "boxcox_log");
  if (lambda == 0.0) return SignedLog::from_value(std::log(x));
  return {1, lambda * std::log(x)};
}

SignedLog boxcox_value_log(double lambda, double x) {
  require_positive(x, "boxcox_value_log");
  require_finite_lambda(lambda, "boxcox_value_log");
  return power_branch_log(lambda, std::log(x));
}

SignedLog yeojohnson_value_log(double lambda, double x) {
  require_finite_lambda(lambda, "yeojohnson_value_log");
  if (x >= 0.0) return power_branch_log(lambda, std::log1p(x));
  return -power_branch_log(2.0 - lambda, std::log1p(-x));
}

double boxcox_deriv(int k, double lambda, double x) {
  require_positive(x, "boxcox_deriv");
  require_finite_lambda(lambda, "boxcox_deriv");
  if (k < 1) throw DomainError("boxcox_deriv: k must be >= 1");
  const double log_x = std::log(x);
  if (log_x == 0.0) return 0.0;
  if (lambda == 0.0) return std::pow(log_x, k + 1) / (k + 1);

  const double t = lambda * log_x;
  if (std::fabs(t) < 1.0) {
    // psi^(k) = sum_j lambda^j L^(j+k+1) (j+k)! / (j! (j+k+1)!)
    double coeff = 1.0 / (k + 1);
    double power = std::pow(log_x, k + 1);
    double sum = 0.0;
    for (int j = 0; j < 200; ++j) {
      const double term = coeff * power;
      sum += term;
      if (std::fabs(term) <= std::numeric_limits<double>::epsilon() * std::fabs(sum)) break;
      power *= t;
      coeff *= static_cast<double>(j + k + 1) / ((j + 1.0) * (j + k + 2.0));
    }
    return sum;
  }

  const double x_pow = std::exp(t);
  double psi = std::expm1(t) / lambda;
  double log_power = 1.0;
  for (int j = 1; j <= k; ++j) {
    log_power *= log_x;
    psi = (x_pow * log_power - j * psi) / lambda;
  }
  if (!std::isfinite(psi)) {
    const int sign = (k % 2 == 1 || log_x > 0.0) ? 1 : -1;
    throw_overflow("boxcox_deriv", sign,
                   t + k * std::log(std::fabs(log_x)) - std::log(std::fabs(lambda)));
  }
  return psi;
}

double inv_boxcox_lambda(double x, double y) {
  require_positive(x, "inv_boxcox_lambda");
  return inverse_from_log(std::log(x), y, "inv_boxcox_lambda");
}

double inv_yeojohnson_lambda(double x, double y) {
  if (!std::isfinite(x) || x == 0.0) {
    throw DomainError("inv_yeojohnson_lambda: requires finite x != 0");
  }
  if (x > 0.0) return inverse_from_log(std::log1p(x), y, "inv_yeojohnson_lambda");
  // yeojohnson(lambda, x) = -boxcox-form(2 - lambda, 1 - x).
  return 2.0 - inverse_from_log(std::log1p(-x), -y, "inv_yeojohnson_lambda");
}

}  // namespace stablepower
