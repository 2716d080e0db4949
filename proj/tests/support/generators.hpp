#pragma once

// Seeded generators for property tests.

#include <cmath>
#include <cstdint>
#include <algorithm>
#include <random>
#include <vector>

namespace stablepower::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  double normal(double mean, double sd) { return std::normal_distribution<double>(mean, sd)(rng_); }

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  bool coin() { return integer(0, 1) == 1; }

  std::uint64_t bits() { return rng_(); }

  std::vector<double> uniform_vector(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }

  std::vector<double> log_uniform_vector(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = log_uniform(lo, hi);
    return v;
  }

  std::vector<double> normal_vector(std::size_t n, double mean, double sd) {
    std::vector<double> v(n);
    for (double& x : v) x = normal(mean, sd);
    return v;
  }

  /// Mixed-sign data with roughly one in eight values exactly zero.
  std::vector<double> mixed_with_zeros(std::size_t n, double scale) {
    std::vector<double> v(n);
    for (double& x : v) {
      const int k = integer(0, 7);
      x = k == 0 ? 0.0 : uniform(-scale, scale);
    }
    return v;
  }

  /// Random split of [0, n) into k non-empty parts (k <= n), returned as part ids.
  std::vector<std::size_t> partition(std::size_t n, std::size_t k) {
    std::vector<std::size_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = i < k ? i : static_cast<std::size_t>(integer(0, static_cast<int>(k) - 1));
    std::shuffle(ids.begin(), ids.end(), rng_);
    return ids;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

template <class T>
std::vector<std::vector<T>> split_by(const std::vector<T>& values, const std::vector<std::size_t>& ids,
                                     std::size_t k) {
  std::vector<std::vector<T>> parts(k);
  for (std::size_t i = 0; i < values.size(); ++i) parts[ids[i]].push_back(values[i]);
  return parts;
}

inline double rel_err(double a, double b) {
  return std::fabs(a - b) / std::max(std::fabs(b), 1e-300);
}

}  // namespace stablepower::testing
