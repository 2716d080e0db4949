#pragma once

// Small datasets whose optimal lambda pushes transformed values past the
// largest finite number of a floating-point format, and a log-domain overflow
// predictor that never materializes those values.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stablepower/dataset.hpp"
#include "stablepower/optimize.hpp"
#include "stablepower/transforms.hpp"

namespace stablepower {

enum class Precision { Double, Quadruple, Octuple };

struct PrecisionProfile {
  Precision precision = Precision::Double;
  std::string_view name;
  double max_value_log = 0.0;  // natural log of the largest finite value
};

const PrecisionProfile& profile(Precision precision) noexcept;

/// "double", "quadruple" or "octuple". Throws ConfigError otherwise.
Precision parse_precision(std::string_view name);

enum class OverflowSign { Negative, Positive };

std::string_view sign_name(OverflowSign sign) noexcept;
OverflowSign parse_overflow_sign(std::string_view name);

struct AdversarialCase {
  TransformKind transform = TransformKind::BoxCox;
  OverflowSign sign = OverflowSign::Positive;
  Precision precision = Precision::Double;
  std::vector<double> data;
  double expected_lambda = 0.0;
  double expected_extreme_log10 = 0.0;  // log10 |extreme transformed value|
  std::string provenance;               // "published" or "fit"
};

/// The twelve published cells, ordered by precision, then Box-Cox negative,
/// Box-Cox positive, Yeo-Johnson negative, Yeo-Johnson positive.
std::span<const AdversarialCase> adversarial_table();

/// The published cell for (transform, sign, precision).
AdversarialCase gen_adversarial(TransformKind transform, OverflowSign sign, Precision precision);

/// duplicates copies of base plus one point moved by perturbation toward the
/// zero point of the transform.
struct CustomRecipe {
  double base = 10.0;
  int duplicates = 3;
  double perturbation = 0.1;
};

/// Builds the custom dataset and computes its expected values with the stable
/// fitter. Throws DomainError when the data would straddle the zero point on
/// the wrong side for the requested overflow sign.
AdversarialCase gen_custom(TransformKind transform, OverflowSign sign, Precision precision,
                           const CustomRecipe& recipe);

/// Search interval wide enough for every published cell.
FitOptions adversarial_fit_options();

struct OverflowReport {
  std::vector<double> log10_magnitude;  // per element; -inf for an exact zero
  std::vector<int> sign;
  std::vector<bool> flagged;
  bool any_flagged = false;
  double max_log10 = 0.0;
  int max_sign = 0;
};

/// Predicted magnitude of every transformed value, computed in the log domain.
OverflowReport detect_overflow(const Dataset& data, TransformKind transform, double lambda,
                               const PrecisionProfile& profile);

}  // namespace stablepower
