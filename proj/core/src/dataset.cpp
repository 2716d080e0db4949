#include "stablepower/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "stablepower/errors.hpp"

namespace stablepower {

Dataset::Dataset(std::vector<double> values) : values_(std::move(values)) {
  log1p_abs_.reserve(values_.size());
  for (double x : values_) {
    if (!std::isfinite(x)) throw DomainError("dataset: values must be finite");
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
    const double l = std::log1p(std::fabs(x));
    log1p_abs_.push_back(l);
    if (x > 0.0) {
      ++n_pos_;
      sum_signed_log1p_ += l;
    } else if (x < 0.0) {
      ++n_neg_;
      sum_signed_log1p_ -= l;
    } else {
      ++n_zero_;
    }
  }
  if (all_positive()) {
    log_values_.reserve(values_.size());
    for (double x : values_) {
      log_values_.push_back(std::log(x));
      sum_log_ += log_values_.back();
    }
  }
}

double Dataset::sum_log() const {
  if (!all_positive()) throw DomainError("Box-Cox requires strictly positive data");
  return sum_log_;
}

}  // namespace stablepower
