#pragma once

// Bounded derivative-free fitting of lambda and the Lambert-W bounds that keep
// transformed values inside [-y_B, y_B].

#include <functional>
#include <optional>
#include <vector>

#include "stablepower/dataset.hpp"
#include "stablepower/transforms.hpp"

namespace stablepower {

inline constexpr double kDefaultYBound = 1e100;

struct FitOptions {
  std::optional<double> y_bound;  // unbounded when empty
  double lo = -1e5;
  double hi = 1e5;
  double x_tolerance = 1e-8;
  int max_evals = 500;

  /// Throws ConfigError unless lo < hi, x_tolerance > 0, max_evals > 0 and y_bound > 0.
  void validate() const;
};

/// One objective evaluation of the minimizer and the bracket it was taken in.
struct BracketStep {
  double a = 0.0;
  double b = 0.0;
  double x = 0.0;
  double fx = 0.0;
};

struct MinimizeResult {
  double x = 0.0;
  double fx = 0.0;
  int evaluations = 0;
  std::vector<BracketStep> history;
};

/// Brent's bounded minimizer: golden section with parabolic steps. Stops when
/// the bracket is no wider than x_tolerance * (1 + |x|) or after max_evals
/// evaluations. The objective may return +inf; parabolic steps are skipped
/// while any of the three retained values is not finite.
MinimizeResult minimize_bounded(const std::function<double(double)>& f, double a, double b,
                                double x_tolerance, int max_evals);

struct LambdaBounds {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_active = false;
  bool hi_active = false;
};

/// Interval of lambda keeping every transformed value within [-y_bound, y_bound],
/// intersected with [interval_lo, interval_hi]. Only extremes on the far side
/// of the transform's zero point (1 for Box-Cox, 0 for Yeo-Johnson) constrain it.
LambdaBounds lambda_bounds_from_extrema(TransformKind kind, double x_min, double x_max,
                                        double y_bound, double interval_lo, double interval_hi);

LambdaBounds lambda_bounds(const Dataset& data, TransformKind kind, double y_bound,
                           double interval_lo = -1e5, double interval_hi = 1e5);

struct FitResult {
  double lambda_star = 0.0;
  double nll_at_star = 0.0;
  int evaluations = 0;
  bool bound_active = false;
  double interval_lo = 0.0;
  double interval_hi = 0.0;
  std::vector<BracketStep> history;
};

/// Feasible search interval for opts: the option interval, intersected with
/// the y_B bounds when set. Throws ConfigError when empty.
LambdaBounds search_interval(const Dataset& data, TransformKind kind, const FitOptions& opts);

/// Minimizes the stable NLL. When the minimizer ends within tolerance of an
/// active bound, the bound itself is taken if it is no worse.
FitResult fit_lambda(const Dataset& data, TransformKind kind, const FitOptions& opts = {});

/// Runs the minimizer on an arbitrary objective over bounds and applies the
/// same bound handling as fit_lambda. Shared with the federated server.
FitResult fit_objective(const std::function<double(double)>& objective, const LambdaBounds& bounds,
                        const FitOptions& opts);

/// Elementwise transform. Throws OverflowError carrying the largest
/// log-magnitude when any value is not representable.
std::vector<double> transform_data(const Dataset& data, TransformKind kind, double lambda);

}  // namespace stablepower
