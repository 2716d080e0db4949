#include "stablepower/adversarial.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "stablepower/errors.hpp"

namespace stablepower {
namespace {

constexpr double kLn10 = 2.302585092994045684;

const std::array<PrecisionProfile, 3> kProfiles{{
    {Precision::Double, "double", 709.782712893384},
    {Precision::Quadruple, "quadruple", 11356.523406294144},
    {Precision::Octuple, "octuple", 181704.3745007063},
}};

using TK = TransformKind;
using OS = OverflowSign;
using PR = Precision;

const std::vector<AdversarialCase>& table() {
  static const std::vector<AdversarialCase> rows{
      {TK::BoxCox, OS::Negative, PR::Double, {0.1, 0.1, 0.1, 0.101}, -361.15, 358.5877, "published"},
      {TK::BoxCox, OS::Positive, PR::Double, {10, 10, 10, 9.9}, 357.55, 354.9983, "published"},
      {TK::YeoJohnson, OS::Negative, PR::Double, {-10, -10, -10, -9.9}, -391.49, 407.1790, "published"},
      {TK::YeoJohnson, OS::Positive, PR::Double, {10, 10, 10, 9.9}, 393.49, 407.1790, "published"},
      {TK::BoxCox, OS::Negative, PR::Quadruple, {0.1, 0.1, 0.1, 0.10001}, -35936.9, 35932.3617,
       "published"},
      {TK::BoxCox, OS::Positive, PR::Quadruple, {10, 10, 10, 9.999}, 35933.3, 35928.7672, "published"},
      {TK::YeoJohnson, OS::Negative, PR::Quadruple, {-10, -10, -10, -9.999}, -39524.8, 41158.3598,
       "published"},
      {TK::YeoJohnson, OS::Positive, PR::Quadruple, {10, 10, 10, 9.999}, 39526.8, 41158.3602,
       "published"},
      {TK::BoxCox, OS::Negative, PR::Octuple, {0.1, 0.1, 0.1, 0.100001}, -359353.0, 359347.4378,
       "published"},
      {TK::BoxCox, OS::Positive, PR::Octuple, {10, 10, 10, 9.9999}, 359349.0, 359343.8445, "published"},
      {TK::YeoJohnson, OS::Negative, PR::Octuple, {-10, -10, -10, -9.9999}, -395283.0,
       411640.8109, "published"},
      {TK::YeoJohnson, OS::Positive, PR::Octuple, {10, 10, 10, 9.9999}, 395285.0, 411640.8109,
       "published"},
  };
  return rows;
}

}  // namespace

const PrecisionProfile& profile(Precision precision) noexcept {
  return kProfiles[static_cast<std::size_t>(precision)];
}

Precision parse_precision(std::string_view name) {
  for (const PrecisionProfile& p : kProfiles) {
    if (p.name == name) return p.precision;
  }
  throw ConfigError("unknown precision '" + std::string(name) +
                    "' (expected double, quadruple or octuple)");
}

std::string_view sign_name(OverflowSign sign) noexcept {
  return sign == OverflowSign::Negative ? "negative" : "positive";
}

OverflowSign parse_overflow_sign(std::string_view name) {
  if (name == "negative" || name == "neg") return OverflowSign::Negative;
  if (name == "positive" || name == "pos") return OverflowSign::Positive;
  throw ConfigError("unknown overflow sign '" + std::string(name) +
                    "' (expected negative or positive)");
}

std::span<const AdversarialCase> adversarial_table() { return table(); }

AdversarialCase gen_adversarial(TransformKind transform, OverflowSign sign, Precision precision) {
  for (const AdversarialCase& c : table()) {
    if (c.transform == transform && c.sign == sign && c.precision == precision) return c;
  }
  throw DomainError("no published adversarial case for this combination");
}

FitOptions adversarial_fit_options() {
  FitOptions opts;
  opts.lo = -1e6;
  opts.hi = 1e6;
  return opts;
}

AdversarialCase gen_custom(TransformKind transform, OverflowSign sign, Precision precision,
                           const CustomRecipe& recipe) {
  if (recipe.duplicates < 1) throw DomainError("custom recipe needs at least one duplicate");
  if (!(recipe.perturbation > 0.0) || !std::isfinite(recipe.base)) {
    throw DomainError("custom recipe needs a finite base and a positive perturbation");
  }
  const double zero_point = transform == TransformKind::BoxCox ? 1.0 : 0.0;
  const bool positive = sign == OverflowSign::Positive;
  // Positive overflow needs all data above the zero point with a low outlier;
  // negative overflow needs all data below it with a high outlier.
  const double moved = positive ? recipe.base - recipe.perturbation
                                : recipe.base + recipe.perturbation;
  const bool ok = positive ? (recipe.base > zero_point && moved > zero_point)
                           : (recipe.base < zero_point && moved < zero_point);
  if (!ok) {
    throw DomainError(std::string("custom recipe: ") + std::string(sign_name(sign)) +
                      " overflow needs every value " + (positive ? "above " : "below ") +
                      (transform == TransformKind::BoxCox ? "1" : "0"));
  }
  if (transform == TransformKind::BoxCox && !(moved > 0.0 && recipe.base > 0.0)) {
    throw DomainError("custom recipe: Box-Cox needs positive values");
  }

  AdversarialCase out;
  out.transform = transform;
  out.sign = sign;
  out.precision = precision;
  out.data.assign(static_cast<std::size_t>(recipe.duplicates), recipe.base);
  out.data.push_back(moved);
  out.provenance = "fit";
  const Dataset data(out.data);
  const FitResult fit = fit_lambda(data, transform, adversarial_fit_options());
  out.expected_lambda = fit.lambda_star;
  out.expected_extreme_log10 =
      detect_overflow(data, transform, fit.lambda_star, profile(precision)).max_log10;
  return out;
}

OverflowReport detect_overflow(const Dataset& data, TransformKind transform, double lambda,
                               const PrecisionProfile& prof) {
  OverflowReport out;
  out.max_log10 = -std::numeric_limits<double>::infinity();
  for (double x : data.values()) {
    const SignedLog v = transform == TransformKind::BoxCox ? boxcox_value_log(lambda, x)
                                                           : yeojohnson_value_log(lambda, x);
    const double log10_mag = v.logmag / kLn10;
    const bool flag = !v.is_zero() && v.logmag > prof.max_value_log;
    out.log10_magnitude.push_back(log10_mag);
    out.sign.push_back(v.sign);
    out.flagged.push_back(flag);
    out.any_flagged = out.any_flagged || flag;
    if (log10_mag > out.max_log10) {
      out.max_log10 = log10_mag;
      out.max_sign = v.sign;
    }
  }
  return out;
}

}  // namespace stablepower
