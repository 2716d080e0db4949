#include "stablepower/lambert_w.hpp"

#include <cmath>
#include <limits>

#include "stablepower/errors.hpp"

namespace stablepower {
namespace {

constexpr double kInvE = 0.36787944117144232160;
// e split into a double and its rounding remainder, for e*z + 1 near z = -1/e.
constexpr double kEHi = 2.718281828459045;
constexpr double kELo = 1.4456468917292502e-16;
constexpr int kMaxIterations = 50;
constexpr double kStepTolerance = 4.0 * std::numeric_limits<double>::epsilon();
// Below this z the branch-point series is the better starting point.
constexpr double kBranchPointRegion = -0.32;

bool converged(double step, double w) {
  return std::fabs(step) <= kStepTolerance * (1.0 + std::fabs(w));
}

// Halley on f(w) = w e^w - z.
double halley_direct(double w, double z) {
  for (int i = 0; i < kMaxIterations; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    if (f == 0.0) break;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0 || !std::isfinite(denom)) break;
    const double step = f / denom;
    w -= step;
    if (converged(step, w)) break;
  }
  return w;
}

// Halley on g(w) = w + ln|w| - log_abs_z, valid when w and z share a sign.
double halley_log(double w, double log_abs_z) {
  for (int i = 0; i < kMaxIterations; ++i) {
    const double g = w + std::log(std::fabs(w)) - log_abs_z;
    if (g == 0.0) break;
    const double g1 = 1.0 + 1.0 / w;
    const double g2 = -1.0 / (w * w);
    const double step = (g / g1) / (1.0 - g * g2 / (2.0 * g1 * g1));
    w -= step;
    if (converged(step, w)) break;
  }
  return w;
}

double branch_point_series(int branch, double z) {
  const double ez1 = std::fma(kEHi, z, 1.0) + kELo * z;
  const double p = std::sqrt(2.0 * std::max(ez1, 0.0));
  const double s = branch == 0 ? p : -p;
  return -1.0 + s - p * p / 3.0 + 11.0 / 72.0 * s * p * p;
}

}  // namespace

double lambert_w(int branch, double z) {
  if (branch != 0 && branch != -1) throw DomainError("lambert_w: branch must be 0 or -1");
  if (std::isnan(z)) throw DomainError("lambert_w: NaN argument");
  if (z < -kInvE) {
    // Allow the rounding of -1/e itself.
    if (z >= -kInvE * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())) return -1.0;
    throw DomainError("lambert_w: argument below -1/e");
  }
  if (branch == -1 && z >= 0.0) throw DomainError("lambert_w: branch -1 needs z < 0");
  if (z == 0.0) return 0.0;
  if (z == -kInvE) return -1.0;

  if (z < kBranchPointRegion) return halley_direct(branch_point_series(branch, z), z);

  if (branch == 0) {
    if (z <= std::exp(1.0)) return halley_direct(std::log1p(z), z);
    const double l1 = std::log(z);
    const double l2 = std::log(l1);
    return halley_log(l1 - l2 + l2 / l1, l1);
  }
  return lambert_wm1_from_log(std::log(-z));
}

double lambert_wm1_from_log(double log_neg_z) {
  if (!(log_neg_z <= -1.0)) {
    if (log_neg_z <= -1.0 + 1e-15) return -1.0;
    throw DomainError("lambert_wm1_from_log: argument below -1/e");
  }
  if (log_neg_z > std::log(-kBranchPointRegion)) {
    const double z = -std::exp(log_neg_z);
    return halley_direct(branch_point_series(-1, z), z);
  }
  const double l1 = log_neg_z;
  const double l2 = std::log(-l1);
  return halley_log(l1 - l2 + l2 / l1, l1);
}

}  // namespace stablepower
