#include "stablepower/optimize.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "stablepower/errors.hpp"
#include "stablepower/likelihood.hpp"

namespace stablepower {
namespace {

constexpr double kGolden = 0.3819660112501051;  // (3 - sqrt 5) / 2

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

void FitOptions::validate() const {
  if (!(lo < hi)) throw ConfigError("lambda interval must satisfy lo < hi");
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw ConfigError("lambda interval must be finite");
  if (!(x_tolerance > 0.0)) throw ConfigError("x_tolerance must be positive");
  if (max_evals < 1) throw ConfigError("max_evals must be positive");
  if (y_bound && !(*y_bound > 0.0 && std::isfinite(*y_bound))) {
    throw ConfigError("y_bound must be positive and finite");
  }
}

MinimizeResult minimize_bounded(const std::function<double(double)>& f, double a, double b,
                                double x_tolerance, int max_evals) {
  if (!(a < b)) throw ConfigError("minimize_bounded: empty interval");
  MinimizeResult out;
  auto eval = [&](double x) {
    const double fx = f(x);
    out.history.push_back({a, b, x, fx});
    ++out.evaluations;
    return fx;
  };

  double fulc = a + kGolden * (b - a);
  double nfc = fulc;
  double xf = fulc;
  double rat = 0.0;
  double e = 0.0;
  double fx = eval(xf);
  double ffulc = fx;
  double fnfc = fx;

  auto tol1_at = [&](double x) { return 0.25 * x_tolerance * (1.0 + std::fabs(x)); };
  double xm = 0.5 * (a + b);
  double tol1 = tol1_at(xf);
  double tol2 = 2.0 * tol1;

  while (std::fabs(xf - xm) > tol2 - 0.5 * (b - a) && out.evaluations < max_evals) {
    bool golden = true;
    const bool all_finite = std::isfinite(fx) && std::isfinite(fnfc) && std::isfinite(ffulc);
    if (std::fabs(e) > tol1 && all_finite) {
      double r = (xf - nfc) * (fx - ffulc);
      double q = (xf - fulc) * (fx - fnfc);
      double p = (xf - fulc) * q - (xf - nfc) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      r = e;
      e = rat;
      if (std::fabs(p) < std::fabs(0.5 * q * r) && p > q * (a - xf) && p < q * (b - xf)) {
        rat = p / q;
        const double x = xf + rat;
        if ((x - a) < tol2 || (b - x) < tol2) {
          const double si = sign_of(xm - xf) + (xm == xf ? 1.0 : 0.0);
          rat = tol1 * si;
        }
        golden = false;
      }
    }
    if (golden) {
      e = xf >= xm ? a - xf : b - xf;
      rat = kGolden * e;
    }

    const double si = sign_of(rat) + (rat == 0.0 ? 1.0 : 0.0);
    const double x = xf + si * std::max(std::fabs(rat), tol1);
    const double fu = eval(x);

    if (fu <= fx) {
      if (x >= xf) {
        a = xf;
      } else {
        b = xf;
      }
      fulc = nfc;
      ffulc = fnfc;
      nfc = xf;
      fnfc = fx;
      xf = x;
      fx = fu;
    } else {
      if (x < xf) {
        a = x;
      } else {
        b = x;
      }
      if (fu <= fnfc || nfc == xf) {
        fulc = nfc;
        ffulc = fnfc;
        nfc = x;
        fnfc = fu;
      } else if (fu <= ffulc || fulc == xf || fulc == nfc) {
        fulc = x;
        ffulc = fu;
      }
    }
    xm = 0.5 * (a + b);
    tol1 = tol1_at(xf);
    tol2 = 2.0 * tol1;
  }
  out.x = xf;
  out.fx = fx;
  return out;
}

LambdaBounds lambda_bounds_from_extrema(TransformKind kind, double x_min, double x_max,
                                        double y_bound, double interval_lo, double interval_hi) {
  if (!(y_bound > 0.0)) throw ConfigError("y_bound must be positive");
  if (!(x_min <= x_max)) throw DomainError("lambda_bounds: empty data");
  LambdaBounds out{interval_lo, interval_hi, false, false};
  const bool boxcox = kind == TransformKind::BoxCox;
  if (boxcox && !(x_min > 0.0)) throw DomainError("Box-Cox requires strictly positive data");
  const double zero_point = boxcox ? 1.0 : 0.0;
  auto inverse = [&](double x, double y) {
    return boxcox ? inv_boxcox_lambda(x, y) : inv_yeojohnson_lambda(x, y);
  };
  if (x_max > zero_point) {
    const double hi = inverse(x_max, y_bound);
    if (hi < out.hi) {
      out.hi = hi;
      out.hi_active = true;
    }
  }
  if (x_min < zero_point) {
    const double lo = inverse(x_min, -y_bound);
    if (lo > out.lo) {
      out.lo = lo;
      out.lo_active = true;
    }
  }
  return out;
}

LambdaBounds lambda_bounds(const Dataset& data, TransformKind kind, double y_bound,
                           double interval_lo, double interval_hi) {
  if (data.empty()) throw DomainError("lambda_bounds: empty data");
  return lambda_bounds_from_extrema(kind, data.min(), data.max(), y_bound, interval_lo,
                                    interval_hi);
}

LambdaBounds search_interval(const Dataset& data, TransformKind kind, const FitOptions& opts) {
  opts.validate();
  LambdaBounds out{opts.lo, opts.hi, false, false};
  if (opts.y_bound) out = lambda_bounds(data, kind, *opts.y_bound, opts.lo, opts.hi);
  if (!(out.lo < out.hi)) throw ConfigError("feasible lambda interval is empty");
  return out;
}

FitResult fit_objective(const std::function<double(double)>& objective, const LambdaBounds& bounds,
                        const FitOptions& opts) {
  if (!(bounds.lo < bounds.hi)) throw ConfigError("feasible lambda interval is empty");
  const int reserved = (bounds.lo_active ? 1 : 0) + (bounds.hi_active ? 1 : 0);
  const int budget = std::max(1, opts.max_evals - reserved);
  MinimizeResult m = minimize_bounded(objective, bounds.lo, bounds.hi, opts.x_tolerance, budget);

  FitResult out;
  out.lambda_star = m.x;
  out.nll_at_star = m.fx;
  out.interval_lo = bounds.lo;
  out.interval_hi = bounds.hi;

  auto try_bound = [&](bool active, double bound) {
    if (!active || out.bound_active) return;
    const double x = out.lambda_star;
    if (std::fabs(x - bound) > opts.x_tolerance * (1.0 + std::fabs(x))) return;
    out.bound_active = true;
    if (x == bound) return;
    const double fb = objective(bound);
    ++m.evaluations;
    m.history.push_back({bounds.lo, bounds.hi, bound, fb});
    if (fb <= out.nll_at_star) {
      out.lambda_star = bound;
      out.nll_at_star = fb;
    }
  };
  try_bound(bounds.lo_active, bounds.lo);
  try_bound(bounds.hi_active, bounds.hi);

  out.evaluations = m.evaluations;
  out.history = std::move(m.history);
  return out;
}

FitResult fit_lambda(const Dataset& data, TransformKind kind, const FitOptions& opts) {
  const LambdaBounds bounds = search_interval(data, kind, opts);
  auto objective = [&](double lambda) { return nll(data, kind, lambda).value; };
  return fit_objective(objective, bounds, opts);
}

std::vector<double> transform_data(const Dataset& data, TransformKind kind, double lambda) {
  std::vector<double> out;
  out.reserve(data.size());
  bool overflow = false;
  int worst_sign = 0;
  double worst_log = -std::numeric_limits<double>::infinity();
  for (double x : data.values()) {
    try {
      out.push_back(kind == TransformKind::BoxCox ? boxcox(lambda, x) : yeojohnson(lambda, x));
    } catch (const OverflowError& e) {
      overflow = true;
      out.push_back(0.0);
      if (e.log_magnitude() > worst_log) {
        worst_log = e.log_magnitude();
        worst_sign = e.sign();
      }
    }
  }
  if (overflow) {
    throw OverflowError("transformed value overflows a double (log10 magnitude " +
                            std::to_string(worst_log / std::log(10.0)) + ")",
                        worst_sign, worst_log);
  }
  return out;
}

}  // namespace stablepower
