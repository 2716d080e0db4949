#include "stablepower/aggregate.hpp"

#include <deque>

#include "stablepower/errors.hpp"

namespace stablepower {

Aggregate from_values(std::span<const double> values) {
  Aggregate out;
  if (values.empty()) return out;
  out.n = values.size();
  double sum = 0.0;
  for (double x : values) sum += x;
  out.mean = sum / static_cast<double>(out.n);
  for (double x : values) out.ssd += (x - out.mean) * (x - out.mean);
  return out;
}

Aggregate merge(const Aggregate& a, const Aggregate& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  const double na = static_cast<double>(a.n);
  const double nb = static_cast<double>(b.n);
  const double nab = na + nb;
  const double delta = b.mean - a.mean;
  Aggregate out;
  out.n = a.n + b.n;
  out.mean = a.mean + delta * nb / nab;
  out.ssd = a.ssd + b.ssd + delta * (delta * na / nab) * nb;
  return out;
}

Aggregate aggregate_queue(std::span<const Aggregate> parts) {
  if (parts.empty()) throw DomainError("aggregate_queue: no parts");
  std::deque<Aggregate> queue(parts.begin(), parts.end());
  while (queue.size() > 1) {
    const Aggregate a = queue.front();
    queue.pop_front();
    const Aggregate b = queue.front();
    queue.pop_front();
    queue.push_back(merge(a, b));
  }
  return queue.front();
}

double variance_naive_onepass(std::span<const double> values) {
  if (values.empty()) throw DomainError("variance_naive_onepass: empty input");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double x : values) {
    sum += x;
    sum_sq += x * x;
  }
  const double n = static_cast<double>(values.size());
  return sum_sq / n - (sum * sum) / (n * n);
}

}  // namespace stablepower
