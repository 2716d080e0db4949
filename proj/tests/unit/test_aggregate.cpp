#include <cmath>
#include <vector>

#include "doctest.h"
#include "generators.hpp"
#include "stablepower/aggregate.hpp"
#include "stablepower/errors.hpp"

using namespace stablepower;
using stablepower::testing::Gen;
using stablepower::testing::split_by;

namespace {

// Two-pass statistics in extended precision.
struct Exact {
  double mean;
  double ssd;
};

Exact exact(const std::vector<double>& xs) {
  long double m = 0;
  for (double x : xs) m += x;
  m /= xs.size();
  long double s = 0;
  for (double x : xs) s += (x - m) * (x - m);
  return {static_cast<double>(m), static_cast<double>(s)};
}

std::vector<double> tight_normal_data(std::uint64_t seed) {
  Gen g(seed);
  return g.normal_vector(100, 1e4, 1e-3);
}

std::vector<Aggregate> parts_of(const std::vector<std::vector<double>>& parts) {
  std::vector<Aggregate> out;
  for (const auto& p : parts) out.push_back(from_values(p));
  return out;
}

}  // namespace

TEST_CASE("from_values examples") {
  const Aggregate e = from_values(std::vector<double>{});
  CHECK(e.n == 0);
  CHECK(e.mean == 0.0);
  CHECK(e.ssd == 0.0);
  const Aggregate a = from_values(std::vector<double>{1, 3});
  CHECK(a.n == 2);
  CHECK(a.mean == 2.0);
  CHECK(a.ssd == 2.0);
  const Aggregate b = from_values(std::vector<double>{5, 5, 5});
  CHECK(b.n == 3);
  CHECK(b.mean == 5.0);
  CHECK(b.ssd == 0.0);
}

TEST_CASE("merge examples") {
  const Aggregate m = merge({1, 3.0, 0.0}, {1, 7.0, 0.0});
  CHECK(m.n == 2);
  CHECK(m.mean == 5.0);
  CHECK(m.ssd == 8.0);
  const Aggregate a{4, 2.5, 1.25};
  const Aggregate left = merge(a, {});
  const Aggregate right = merge({}, a);
  CHECK((left.n == a.n && left.mean == a.mean && left.ssd == a.ssd));
  CHECK((right.n == a.n && right.mean == a.mean && right.ssd == a.ssd));
}

TEST_CASE("merge matches the concatenation oracle") {
  Gen g(61);
  for (int i = 0; i < 300; ++i) {
    const auto xs = g.normal_vector(static_cast<std::size_t>(g.integer(2, 60)), g.uniform(-100, 100), g.log_uniform(1e-2, 1e2));
    const std::size_t cut = static_cast<std::size_t>(g.integer(0, static_cast<int>(xs.size())));
    const std::vector<double> l(xs.begin(), xs.begin() + static_cast<long>(cut));
    const std::vector<double> r(xs.begin() + static_cast<long>(cut), xs.end());
    const Aggregate m = merge(from_values(l), from_values(r));
    const Exact ex = exact(xs);
    CHECK(m.n == xs.size());
    CHECK(m.mean == doctest::Approx(ex.mean).epsilon(1e-12).scale(1e-12));
    CHECK(m.ssd == doctest::Approx(ex.ssd).epsilon(1e-12));
  }
}

TEST_CASE("aggregate_queue examples") {
  const Aggregate a{3, 1.0, 2.0};
  const std::vector<Aggregate> one{a};
  const Aggregate q = aggregate_queue(one);
  CHECK((q.n == 3 && q.mean == 1.0 && q.ssd == 2.0));
  CHECK_THROWS_AS(aggregate_queue(std::vector<Aggregate>{}), DomainError);

  const std::vector<double> four{1.5, -2.0, 7.25, 3.0};
  std::vector<Aggregate> singles;
  for (double x : four) singles.push_back(from_values(std::vector<double>{x}));
  const Aggregate s = aggregate_queue(singles);
  const Exact ex = exact(four);
  CHECK(s.mean == doctest::Approx(ex.mean).epsilon(1e-12));
  CHECK(s.ssd == doctest::Approx(ex.ssd).epsilon(1e-12));

  const auto tight = tight_normal_data(62);
  std::vector<Aggregate> points;
  for (double x : tight) points.push_back(from_values(std::vector<double>{x}));
  const Aggregate f = aggregate_queue(points);
  CHECK(f.variance() == doctest::Approx(exact(tight).ssd / 100).epsilon(1e-6));
}

TEST_CASE("naive one-pass variance") {
  CHECK(variance_naive_onepass(std::vector<double>{1, 3}) == 1.0);
  const double c = variance_naive_onepass(std::vector<double>{1e8, 1e8});
  CHECK(c <= 1e-6);
  // At least one of several draws of the extreme Gaussian data goes badly wrong.
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto xs = tight_normal_data(seed);
    const double truth = exact(xs).ssd / 100;
    const double naive = variance_naive_onepass(xs);
    worst = std::max(worst, std::isfinite(naive) ? std::fabs(naive - truth) / truth : 1e300);
  }
  CHECK(worst > 1e-2);
}

TEST_CASE("merge is associative up to rounding") {
  Gen g(63);
  for (int i = 0; i < 500; ++i) {
    auto triple = [&] {
      const auto n = static_cast<std::size_t>(g.integer(1, 50));
      return Aggregate{n, g.uniform(-1e3, 1e3), n == 1 ? 0.0 : g.log_uniform(1e-3, 1e6)};
    };
    const Aggregate a = triple(), b = triple(), c = triple();
    const Aggregate l = merge(merge(a, b), c);
    const Aggregate r = merge(a, merge(b, c));
    CHECK(l.n == r.n);
    CHECK(std::fabs(l.ssd - r.ssd) <= 1e-10 * std::max(l.ssd, r.ssd));
    CHECK(l.mean == doctest::Approx(r.mean).epsilon(1e-12).scale(1e-9));
  }
}

TEST_CASE("queue over any partition matches the whole") {
  Gen g(64);
  for (std::size_t k : {1u, 2u, 7u, 100u}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto benign = g.normal_vector(200, g.uniform(-10, 10), g.log_uniform(0.1, 10));
      const Aggregate b = aggregate_queue(parts_of(split_by(benign, g.partition(benign.size(), k), k)));
      const Exact eb = exact(benign);
      CHECK(b.n == benign.size());
      CHECK(b.ssd == doctest::Approx(eb.ssd).epsilon(1e-10));
      CHECK(b.mean == doctest::Approx(eb.mean).epsilon(1e-10).scale(1e-10));

      const auto extreme = tight_normal_data(g.bits());
      const Aggregate x = aggregate_queue(parts_of(split_by(extreme, g.partition(extreme.size(), k), k)));
      CHECK(x.ssd == doctest::Approx(exact(extreme).ssd).epsilon(1e-6));
    }
  }
}

TEST_CASE("ssd is never negative") {
  Gen g(65);
  for (int trial = 0; trial < 200; ++trial) {
    const double c = g.log_uniform(1, 1e12);
    std::vector<Aggregate> parts;
    for (int i = 0; i < g.integer(1, 40); ++i) {
      const double jitter = g.coin() ? 0.0 : c * 1e-15 * g.uniform(-1, 1);
      parts.push_back(from_values(std::vector<double>(static_cast<std::size_t>(g.integer(1, 4)), c + jitter)));
    }
    Aggregate acc{};
    for (const Aggregate& p : parts) {
      acc = merge(acc, p);
      CHECK(acc.ssd >= 0.0);
    }
    CHECK(aggregate_queue(parts).ssd >= 0.0);
  }
}
