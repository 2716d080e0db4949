#pragma once

// Box-Cox and Yeo-Johnson power transforms, their signed-log forms, the
// lambda-derivative recurrence and the Lambert-W based inverses in lambda.

#include <string_view>

#include "stablepower/lambert_w.hpp"
#include "stablepower/stablenum.hpp"

namespace stablepower {

enum class TransformKind { BoxCox, YeoJohnson };

/// "bc" / "yj".
std::string_view short_name(TransformKind kind) noexcept;

/// Accepts "bc", "boxcox", "box-cox", "yj", "yeojohnson", "yeo-johnson".
/// Throws ConfigError otherwise.
TransformKind parse_transform(std::string_view name);

/// (x^lambda - 1) / lambda, or ln x at lambda = 0.
/// Throws DomainError for x <= 0 and OverflowError when the result is not finite.
double boxcox(double lambda, double x);

/// Four-branch Yeo-Johnson transform. Throws OverflowError when not finite.
double yeojohnson(double lambda, double x);

/// Signed log of x^lambda (lambda != 0) or of ln x (lambda == 0): the
/// constant -1 and the divisor lambda are dropped. Never overflows.
SignedLog boxcox_log(double lambda, double x);

/// Signed log of the full Box-Cox value, constant included.
SignedLog boxcox_value_log(double lambda, double x);

/// Signed log of the full Yeo-Johnson value.
SignedLog yeojohnson_value_log(double lambda, double x);

/// k-th partial derivative of the Box-Cox transform with respect to lambda.
///
/// Uses psi^(k) = [x^lambda (ln x)^k - k psi^(k-1)] / lambda, and
/// (ln x)^(k+1) / (k+1) at lambda = 0. When |lambda ln x| < 1 the recurrence
/// cancels badly, so the equivalent power series in lambda is summed instead.
double boxcox_deriv(int k, double lambda, double x);

/// lambda with boxcox(lambda, x) == y.
///
/// The equation lambda*y + 1 = x^lambda always has the spurious root lambda = 0;
/// the two Lambert W branches separate it from the wanted root. Branch 0 is tried
/// first and branch -1 is used when its forward check fails.
/// Throws DomainError when no real solution exists.
double inv_boxcox_lambda(double x, double y);

/// lambda with yeojohnson(lambda, x) == y (x != 0).
double inv_yeojohnson_lambda(double x, double y);

/// Tolerance of the forward check used by the inverses.
inline constexpr double kInverseTolerance = 1e-8;

}  // namespace stablepower
