#pragma once

// Negative log-likelihood of power-transformed data under a Gaussian model.
//
// The stable engines evaluate everything in the log domain and never
// overflow. The baseline engines reproduce the textbook formulas and are kept
// to demonstrate where those break.

#include <span>
#include <string_view>
#include <vector>

#include "stablepower/dataset.hpp"
#include "stablepower/transforms.hpp"

namespace stablepower {

struct NllValue {
  double value = 0.0;
  bool finite = false;
};

enum class Engine {
  Stable,        // log-domain, constant dropped, lambda factored out
  Linear,        // plain arithmetic
  KeepConstant,  // log-domain, constant -1 kept
  NoFactor,      // log-domain, constant dropped, lambda not factored out
};

std::string_view engine_name(Engine engine) noexcept;

/// Accepts the names from engine_name() and their underscore spellings.
Engine parse_engine(std::string_view name);

/// Always finite for in-domain data.
/// Throws DomainError for non-positive data and DegenerateError for fewer than
/// two points or constant data.
NllValue nll_boxcox_stable(const Dataset& data, double lambda);

/// Pure-sign data factors the power out of the variance; mixed-sign data keeps
/// the full transformed values. Zeros belong to the nonnegative side.
NllValue nll_yeojohnson_stable(const Dataset& data, double lambda);

/// Never throws on overflow; a non-finite result is reported with finite = false.
NllValue nll_boxcox_baseline(const Dataset& data, double lambda, Engine mode);

/// Linear and KeepConstant accept any data; NoFactor needs pure-sign data and
/// throws ConfigError otherwise.
NllValue nll_yeojohnson_baseline(const Dataset& data, double lambda, Engine mode);

/// Dispatches on kind and engine.
NllValue nll(const Dataset& data, TransformKind kind, double lambda, Engine engine = Engine::Stable);

/// d NLL / d lambda for Box-Cox in plain arithmetic. Unstable by design; may be
/// non-finite.
double nll_boxcox_derivative(const Dataset& data, double lambda);

struct CurvePoint {
  double lambda = 0.0;
  NllValue nll;
};

/// Evaluates the NLL at every grid point. Throws DomainError on an empty grid.
std::vector<CurvePoint> nll_curve(const Dataset& data, TransformKind kind,
                                  std::span<const double> grid, Engine engine);

/// n points evenly spaced on [lo, hi], endpoints included.
std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace stablepower
