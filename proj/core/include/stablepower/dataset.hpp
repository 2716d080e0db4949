#pragma once

// An immutable sample with the summary statistics every likelihood and
// federated computation needs, computed once at construction.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace stablepower {

class Dataset {
 public:
  Dataset() = default;

  /// Throws DomainError if any value is not finite.
  explicit Dataset(std::vector<double> values);

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  std::size_t n_pos() const noexcept { return n_pos_; }
  std::size_t n_neg() const noexcept { return n_neg_; }
  std::size_t n_zero() const noexcept { return n_zero_; }

  /// +inf / -inf for an empty dataset.
  double min() const noexcept { return min_; }
  double max() const noexcept { return max_; }

  bool all_positive() const noexcept { return !empty() && min_ > 0.0; }
  bool all_equal() const noexcept { return !empty() && min_ == max_; }

  /// ln x per element; empty unless every value is positive.
  std::span<const double> log_values() const noexcept { return log_values_; }

  /// ln(1 + |x|) per element.
  std::span<const double> log1p_abs() const noexcept { return log1p_abs_; }

  /// Sum of ln x. Throws DomainError unless every value is positive.
  double sum_log() const;

  /// Sum of sgn(x) ln(1 + |x|), with sgn(0) = 0.
  double sum_signed_log1p() const noexcept { return sum_signed_log1p_; }

 private:
  std::vector<double> values_;
  std::vector<double> log_values_;
  std::vector<double> log1p_abs_;
  std::size_t n_pos_ = 0;
  std::size_t n_neg_ = 0;
  std::size_t n_zero_ = 0;
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_log_ = 0.0;
  double sum_signed_log1p_ = 0.0;
};

}  // namespace stablepower
