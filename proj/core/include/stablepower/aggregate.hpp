#pragma once

// Mergeable (count, mean, sum of squared deviations) triples.

#include <cstddef>
#include <span>

namespace stablepower {

struct Aggregate {
  std::size_t n = 0;
  double mean = 0.0;
  double ssd = 0.0;

  /// Population variance ssd / n; 0 for an empty aggregate.
  double variance() const noexcept { return n == 0 ? 0.0 : ssd / static_cast<double>(n); }
};

/// Two-pass mean and ssd.
Aggregate from_values(std::span<const double> values);

/// Pairwise merge:
///   n = nA + nB, mean = mA + d nB / n, ssd = sA + sB + d^2 nA nB / n, d = mB - mA.
Aggregate merge(const Aggregate& a, const Aggregate& b);

/// FIFO reduction: dequeue two, merge, enqueue the result, until one remains.
/// Throws DomainError on empty input.
Aggregate aggregate_queue(std::span<const Aggregate> parts);

/// (1/n) sum x^2 - (1/n^2) (sum x)^2 in one pass. Numerically unstable.
/// Throws DomainError on empty input.
double variance_naive_onepass(std::span<const double> values);

}  // namespace stablepower
