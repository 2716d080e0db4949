#include "stablepower/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stablepower/errors.hpp"
#include "stablepower/stablenum.hpp"

namespace stablepower {
namespace {

// Below this |lambda| * max|d| the power-variance is replaced by its Taylor form.
constexpr double kSmallLambdaScale = 1e-6;

NllValue make(double value) { return {value, std::isfinite(value)}; }

void require_evaluable(const Dataset& data) {
  if (data.size() < 2) throw DegenerateError("likelihood needs at least two points");
  if (data.all_equal()) throw DegenerateError("likelihood is undefined for constant data");
}

void require_boxcox(const Dataset& data) {
  if (!data.all_positive()) throw DomainError("Box-Cox requires strictly positive data");
}

// NLL of the Box-Cox form (e^(lambda*L) - 1)/lambda given L_i = ln(base_i):
//   (1 - lambda) S + (n/2) ln Var psi,  S = sum L_i.
// Centering d_i = L_i - S/n turns this into S + (n/2) ln Var(e^(lambda d)) - n ln|lambda|,
// which keeps every log-magnitude small regardless of how large lambda*L gets.
double centered_power_nll(std::span<const double> logs, double lambda) {
  const double n = static_cast<double>(logs.size());
  double sum = 0.0;
  for (double l : logs) sum += l;
  const double center = sum / n;

  std::vector<double> d(logs.size());
  double mean_d = 0.0;
  double max_abs_d = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    d[i] = logs[i] - center;
    mean_d += d[i];
    max_abs_d = std::max(max_abs_d, std::fabs(d[i]));
  }
  mean_d /= n;
  if (max_abs_d == 0.0) throw DegenerateError("likelihood is undefined for constant data");

  if (std::fabs(lambda) * max_abs_d < kSmallLambdaScale) {
    // ln Var(e^(lambda d)) = 2 ln|lambda| + ln Var d + lambda Cov(d, d^2) / Var d + O(lambda^2)
    double m2 = 0.0;
    double m3 = 0.0;
    for (double di : d) {
      const double r = di - mean_d;
      m2 += r * r;
      m3 += r * r * r;
    }
    m2 /= n;
    m3 /= n;
    return sum + 0.5 * n * (std::log(m2) + lambda * m3 / m2);
  }

  std::vector<SignedLog> powers(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) powers[i] = {1, lambda * d[i]};
  return sum + 0.5 * n * log_variance(powers) - n * std::log(std::fabs(lambda));
}

double plain_variance(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ssd = 0.0;
  for (double x : v) ssd += (x - mean) * (x - mean);
  return ssd / static_cast<double>(v.size());
}

// Box-Cox form without the constant and with the divisor kept inside:
// signed log of e^(lambda*L) / lambda, or of L itself at lambda = 0.
std::vector<SignedLog> unfactored_powers(std::span<const double> logs, double lambda) {
  std::vector<SignedLog> out(logs.size());
  if (lambda == 0.0) {
    for (std::size_t i = 0; i < logs.size(); ++i) out[i] = SignedLog::from_value(logs[i]);
    return out;
  }
  const int sign = lambda > 0.0 ? 1 : -1;
  const double log_abs_lambda = std::log(std::fabs(lambda));
  for (std::size_t i = 0; i < logs.size(); ++i) {
    out[i] = {sign, lambda * logs[i] - log_abs_lambda};
  }
  return out;
}

double plain_yeojohnson(double lambda, double x) {
  if (x >= 0.0) {
    return lambda == 0.0 ? std::log1p(x) : (std::pow(x + 1.0, lambda) - 1.0) / lambda;
  }
  return lambda == 2.0 ? -std::log1p(-x)
                       : -(std::pow(1.0 - x, 2.0 - lambda) - 1.0) / (2.0 - lambda);
}

}  // namespace

std::string_view engine_name(Engine engine) noexcept {
  switch (engine) {
    case Engine::Stable: return "stable";
    case Engine::Linear: return "linear";
    case Engine::KeepConstant: return "keep-constant";
    case Engine::NoFactor: return "no-factor";
  }
  return "stable";
}

Engine parse_engine(std::string_view name) {
  if (name == "stable") return Engine::Stable;
  if (name == "linear") return Engine::Linear;
  if (name == "keep-constant" || name == "keep_constant") return Engine::KeepConstant;
  if (name == "no-factor" || name == "no_factor") return Engine::NoFactor;
  throw ConfigError("unknown engine '" + std::string(name) +
                    "' (expected stable, linear, keep-constant or no-factor)");
}

NllValue nll_boxcox_stable(const Dataset& data, double lambda) {
  require_boxcox(data);
  require_evaluable(data);
  return make(centered_power_nll(data.log_values(), lambda));
}

NllValue nll_yeojohnson_stable(const Dataset& data, double lambda) {
  require_evaluable(data);
  if (data.n_neg() == 0) return make(centered_power_nll(data.log1p_abs(), lambda));
  if (data.n_pos() == 0) return make(centered_power_nll(data.log1p_abs(), 2.0 - lambda));

  // Mixed signs: the constant cannot be factored out of the variance.
  const auto& xs = data.values();
  std::vector<SignedLog> psi(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) psi[i] = yeojohnson_value_log(lambda, xs[i]);
  const double n = static_cast<double>(xs.size());
  return make((1.0 - lambda) * data.sum_signed_log1p() + 0.5 * n * log_variance(psi));
}

NllValue nll_boxcox_baseline(const Dataset& data, double lambda, Engine mode) {
  require_boxcox(data);
  if (data.size() < 2) throw DegenerateError("likelihood needs at least two points");
  const auto& xs = data.values();
  const double n = static_cast<double>(xs.size());
  const double first = (1.0 - lambda) * data.sum_log();

  switch (mode) {
    case Engine::Stable:
      return nll_boxcox_stable(data, lambda);
    case Engine::Linear: {
      std::vector<double> psi(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        psi[i] = lambda == 0.0 ? std::log(xs[i]) : (std::pow(xs[i], lambda) - 1.0) / lambda;
      }
      return make(first + 0.5 * n * std::log(plain_variance(psi)));
    }
    case Engine::KeepConstant: {
      std::vector<SignedLog> psi(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) psi[i] = boxcox_value_log(lambda, xs[i]);
      return make(first + 0.5 * n * log_variance(psi));
    }
    case Engine::NoFactor:
      return make(first + 0.5 * n * log_variance(unfactored_powers(data.log_values(), lambda)));
  }
  return {};
}

NllValue nll_yeojohnson_baseline(const Dataset& data, double lambda, Engine mode) {
  if (data.size() < 2) throw DegenerateError("likelihood needs at least two points");
  const auto& xs = data.values();
  const double n = static_cast<double>(xs.size());
  const double first = (1.0 - lambda) * data.sum_signed_log1p();

  switch (mode) {
    case Engine::Stable:
      return nll_yeojohnson_stable(data, lambda);
    case Engine::Linear: {
      std::vector<double> psi(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) psi[i] = plain_yeojohnson(lambda, xs[i]);
      return make(first + 0.5 * n * std::log(plain_variance(psi)));
    }
    case Engine::KeepConstant: {
      std::vector<SignedLog> psi(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) psi[i] = yeojohnson_value_log(lambda, xs[i]);
      return make(first + 0.5 * n * log_variance(psi));
    }
    case Engine::NoFactor: {
      if (data.n_neg() == 0) {
        return make(first + 0.5 * n * log_variance(unfactored_powers(data.log1p_abs(), lambda)));
      }
      if (data.n_pos() == 0) {
        return make(first +
                    0.5 * n * log_variance(unfactored_powers(data.log1p_abs(), 2.0 - lambda)));
      }
      throw ConfigError("no-factor engine is only defined for single-sign Yeo-Johnson data");
    }
  }
  return {};
}

NllValue nll(const Dataset& data, TransformKind kind, double lambda, Engine engine) {
  if (kind == TransformKind::BoxCox) {
    return engine == Engine::Stable ? nll_boxcox_stable(data, lambda)
                                    : nll_boxcox_baseline(data, lambda, engine);
  }
  return engine == Engine::Stable ? nll_yeojohnson_stable(data, lambda)
                                  : nll_yeojohnson_baseline(data, lambda, engine);
}

double nll_boxcox_derivative(const Dataset& data, double lambda) {
  require_boxcox(data);
  require_evaluable(data);
  const auto& xs = data.values();
  const double n = static_cast<double>(xs.size());
  std::vector<double> psi(xs.size());
  std::vector<double> dpsi(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double l = std::log(xs[i]);
    if (lambda == 0.0) {
      psi[i] = l;
      dpsi[i] = 0.5 * l * l;
    } else {
      const double p = std::pow(xs[i], lambda);
      psi[i] = (p - 1.0) / lambda;
      dpsi[i] = (p * l - psi[i]) / lambda;
    }
  }
  double sum_psi = 0.0;
  double sum_dpsi = 0.0;
  double sum_cross = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sum_psi += psi[i];
    sum_dpsi += dpsi[i];
    sum_cross += psi[i] * dpsi[i];
  }
  const double var = plain_variance(psi);
  return (sum_cross - sum_psi * sum_dpsi / n) / var - data.sum_log();
}

std::vector<CurvePoint> nll_curve(const Dataset& data, TransformKind kind,
                                  std::span<const double> grid, Engine engine) {
  if (grid.empty()) throw DomainError("nll_curve: empty grid");
  std::vector<CurvePoint> out;
  out.reserve(grid.size());
  for (double lambda : grid) out.push_back({lambda, nll(data, kind, lambda, engine)});
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

}  // namespace stablepower
