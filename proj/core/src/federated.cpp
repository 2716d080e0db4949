#include "stablepower/federated.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <string>

#include "stablepower/errors.hpp"
#include "stablepower/likelihood.hpp"

namespace stablepower {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Smallest natural log allowed for a client's largest transmitted power.
constexpr double kMinLogPower = -300.0;
// Largest natural log a client power may have.
constexpr double kMaxLogPower = 709.0;

Aggregate checked_stats(const std::vector<double>& ys) {
  const Aggregate agg = from_values(ys);
  if (!std::isfinite(agg.mean) || !std::isfinite(agg.ssd)) {
    throw OverflowError("client statistics overflow a double; tighten the lambda bounds", 1,
                        kInf);
  }
  return agg;
}

// Mean and ssd of y_i = b_i^exponent with b_i = offset + a_i. Every y_i is
// written as b_ref^exponent (1 + u_i) with u_i = expm1(exponent ln(b_i / b_ref))
// in (-1, 0], b_ref giving the largest y, so deviations near y = 1 keep full
// precision. logs holds ln b_i and is used at exponent 0.
Aggregate power_stats(std::span<const double> a, double offset, double exponent,
                      std::span<const double> logs) {
  if (exponent == 0.0) return checked_stats({logs.begin(), logs.end()});
  std::size_t r = 0;
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (exponent > 0.0 ? a[i] > a[r] : a[i] < a[r]) r = i;
  }
  const double log_scale = exponent * logs[r];
  if (log_scale > kMaxLogPower) {
    throw OverflowError("client power overflows a double; tighten the lambda bounds", 1,
                        log_scale);
  }
  const double b_ref = offset + a[r];
  // offset + a[r] exactly equals b_ref + rest.
  const double rest = a[r] - (b_ref - offset);
  double scale = std::pow(b_ref, exponent);
  if (rest != 0.0) scale *= std::exp(exponent * std::log1p(rest / b_ref));

  std::vector<double> u(a.size());
  double mean_u = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    u[i] = std::expm1(exponent * std::log1p((a[i] - a[r]) / (offset + a[r])));
    mean_u += u[i];
  }
  mean_u /= static_cast<double>(u.size());
  double ssd_u = 0.0;
  for (double ui : u) ssd_u += (ui - mean_u) * (ui - mean_u);

  Aggregate out;
  out.n = a.size();
  out.mean = std::fma(scale, mean_u, scale);
  out.ssd = (scale * ssd_u) * scale;
  if (!std::isfinite(out.ssd)) {
    throw OverflowError("client ssd overflows a double; tighten the lambda bounds", 1,
                        2.0 * log_scale + std::log(ssd_u));
  }
  return out;
}

std::vector<double> magnitudes(const Dataset& d) {
  std::vector<double> out;
  out.reserve(d.size());
  for (double x : d.values()) out.push_back(std::fabs(x));
  return out;
}

double assemble(double lambda, double c_total, double n, double log_var) {
  return (1.0 - lambda) * c_total + 0.5 * n * log_var;
}

struct Group {
  std::vector<Aggregate> parts;
  std::size_t n = 0;
};

}  // namespace

std::vector<double> payload(TransformKind kind, const ClientMessage& m) {
  if (kind == TransformKind::BoxCox) {
    return {m.c, static_cast<double>(m.n()), m.mean, m.ssd};
  }
  return {m.c, static_cast<double>(m.n_pos), static_cast<double>(m.n_neg), m.mean, m.ssd};
}

std::size_t payload_size(TransformKind kind) noexcept {
  return kind == TransformKind::BoxCox ? 4 : 5;
}

ClientSetup client_setup(const ClientShard& shard, TransformKind kind) {
  const Dataset& d = shard.data;
  ClientSetup s;
  s.min = d.min();
  s.max = d.max();
  s.n_pos = d.n_pos();
  s.n_neg = d.n_neg();
  s.n_zero = d.n_zero();
  if (d.empty()) return s;
  s.c = kind == TransformKind::BoxCox ? d.sum_log() : d.sum_signed_log1p();
  return s;
}

SetupStats setup_round(std::span<const ClientShard> shards, TransformKind kind) {
  if (shards.empty()) throw DomainError("setup_round: no shards");
  SetupStats out;
  out.min = kInf;
  out.max = -kInf;
  for (const ClientShard& shard : shards) {
    const ClientSetup s = client_setup(shard, kind);
    out.clients.push_back(s);
    if (shard.data.empty()) continue;
    out.min = std::min(out.min, s.min);
    out.max = std::max(out.max, s.max);
    out.n_pos += s.n_pos;
    out.n_neg += s.n_neg;
    out.n_zero += s.n_zero;
    out.c_total += s.c;
  }
  if (out.n() == 0) throw DomainError("setup_round: every shard is empty");
  return out;
}

ClientMessage client_message_bc(const ClientShard& shard, double lambda) {
  const Dataset& d = shard.data;
  ClientMessage m;
  if (d.empty()) return m;
  m.c = d.sum_log();
  m.n_pos = d.size();
  const Aggregate agg = power_stats(d.values(), 0.0, lambda, d.log_values());
  m.mean = agg.mean;
  m.ssd = agg.ssd;
  return m;
}

ClientMessage client_message_yj(const ClientShard& shard, double lambda) {
  const Dataset& d = shard.data;
  ClientMessage m;
  if (d.empty()) return m;
  m.c = d.sum_signed_log1p();
  m.n_pos = d.n_pos() + d.n_zero();
  m.n_neg = d.n_neg();
  Aggregate agg;
  if (m.n_neg == 0) {
    agg = power_stats(magnitudes(d), 1.0, lambda, d.log1p_abs());
  } else if (m.n_pos == 0) {
    agg = power_stats(magnitudes(d), 1.0, 2.0 - lambda, d.log1p_abs());
  } else {
    const auto& xs = d.values();
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = yeojohnson(lambda, xs[i]);
    agg = checked_stats(ys);
  }
  m.mean = agg.mean;
  m.ssd = agg.ssd;
  return m;
}

ClientMessage client_message(TransformKind kind, const ClientShard& shard, double lambda) {
  return kind == TransformKind::BoxCox ? client_message_bc(shard, lambda)
                                       : client_message_yj(shard, lambda);
}

double server_nll_bc(std::span<const ClientMessage> messages, double lambda, double c_total) {
  std::vector<Aggregate> parts;
  std::size_t n = 0;
  for (const ClientMessage& m : messages) {
    if (m.n() == 0) continue;
    parts.push_back({m.n(), m.mean, m.ssd});
    n += m.n();
  }
  if (n < 2) throw DegenerateError("server: likelihood needs at least two points");
  const Aggregate total = aggregate_queue(parts);
  if (total.ssd == 0.0) {
    if (lambda == 0.0) throw DegenerateError("server: zero variance");
    return kInf;
  }
  if (!std::isfinite(total.ssd)) return kInf;
  const double nd = static_cast<double>(n);
  double log_var = std::log(total.ssd) - std::log(nd);
  if (lambda != 0.0) log_var -= 2.0 * std::log(std::fabs(lambda));
  return assemble(lambda, c_total, nd, log_var);
}

double server_nll_yj(std::span<const ClientMessage> messages, double lambda, double c_total) {
  Group pos;
  Group neg;
  Group mixed;
  for (const ClientMessage& m : messages) {
    if (m.n() == 0) continue;
    Group& g = m.n_neg == 0 ? pos : (m.n_pos == 0 ? neg : mixed);
    g.parts.push_back({m.n(), m.mean, m.ssd});
    g.n += m.n();
  }
  const std::size_t n = pos.n + neg.n + mixed.n;
  if (n < 2) throw DegenerateError("server: likelihood needs at least two points");
  const double nd = static_cast<double>(n);
  const int groups = (pos.n > 0) + (neg.n > 0) + (mixed.n > 0);

  // Scale of each pure-sign group: psi = (y - 1) / scale, or psi = +-y at the log branch.
  const double pos_scale = lambda;
  const double neg_scale = lambda - 2.0;

  if (groups == 1) {
    const Group& g = pos.n > 0 ? pos : (neg.n > 0 ? neg : mixed);
    const double ssd = aggregate_queue(g.parts).ssd;
    if (!std::isfinite(ssd)) return kInf;
    if (ssd == 0.0) {
      const bool log_branch = (&g == &pos && lambda == 0.0) || (&g == &neg && lambda == 2.0);
      if (log_branch || &g == &mixed) throw DegenerateError("server: zero variance");
      return kInf;
    }
    double log_var = std::log(ssd) - std::log(nd);
    if (&g == &pos && pos_scale != 0.0) log_var -= 2.0 * std::log(std::fabs(pos_scale));
    if (&g == &neg && neg_scale != 0.0) log_var -= 2.0 * std::log(std::fabs(neg_scale));
    return assemble(lambda, c_total, nd, log_var);
  }

  std::vector<Aggregate> rescaled;
  if (pos.n > 0) {
    Aggregate a = aggregate_queue(pos.parts);
    if (pos_scale != 0.0) {
      a.mean = (a.mean - 1.0) / pos_scale;
      a.ssd /= pos_scale * pos_scale;
    }
    rescaled.push_back(a);
  }
  if (neg.n > 0) {
    Aggregate a = aggregate_queue(neg.parts);
    if (neg_scale != 0.0) {
      a.mean = (a.mean - 1.0) / neg_scale;
      a.ssd /= neg_scale * neg_scale;
    } else {
      a.mean = -a.mean;
    }
    rescaled.push_back(a);
  }
  if (mixed.n > 0) rescaled.push_back(aggregate_queue(mixed.parts));

  const Aggregate total = aggregate_queue(rescaled);
  if (!std::isfinite(total.ssd)) return kInf;
  if (total.ssd == 0.0) return kInf;
  return assemble(lambda, c_total, nd, std::log(total.ssd) - std::log(nd));
}

double server_nll(TransformKind kind, std::span<const ClientMessage> messages, double lambda,
                  double c_total) {
  return kind == TransformKind::BoxCox ? server_nll_bc(messages, lambda, c_total)
                                       : server_nll_yj(messages, lambda, c_total);
}

NaiveClientMessage client_message_bc_naive(const ClientShard& shard, double lambda) {
  const Dataset& d = shard.data;
  NaiveClientMessage m;
  if (d.empty()) return m;
  m.c = d.sum_log();
  m.n = d.size();
  for (double l : d.log_values()) {
    const double y = lambda == 0.0 ? l : std::exp(lambda * l);
    m.sum += y;
    m.sum_sq += y * y;
  }
  return m;
}

double server_nll_bc_naive(std::span<const NaiveClientMessage> messages, double lambda,
                           double c_total) {
  double n = 0.0;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const NaiveClientMessage& m : messages) {
    n += static_cast<double>(m.n);
    sum += m.sum;
    sum_sq += m.sum_sq;
  }
  if (n < 2.0) throw DegenerateError("server: likelihood needs at least two points");
  double log_var = std::log(sum_sq / n - (sum / n) * (sum / n));
  if (lambda != 0.0) log_var -= 2.0 * std::log(std::fabs(lambda));
  return assemble(lambda, c_total, n, log_var);
}

LambdaBounds federated_interval(const SetupStats& stats, TransformKind kind,
                                const FitOptions& opts) {
  opts.validate();
  const double y_bound = opts.y_bound.value_or(kDefaultYBound);
  LambdaBounds b =
      lambda_bounds_from_extrema(kind, stats.min, stats.max, y_bound, opts.lo, opts.hi);

  // Each client's largest power must stay above e^-300. For negative exponents
  // that power comes from the client's smallest base, for positive ones from
  // its largest base below the zero point.
  double lo_guard = -kInf;
  double hi_guard = kInf;
  for (const ClientSetup& c : stats.clients) {
    const std::size_t n = c.n_pos + c.n_neg + c.n_zero;
    if (n == 0) continue;
    if (kind == TransformKind::BoxCox) {
      if (c.min > 1.0) lo_guard = std::max(lo_guard, kMinLogPower / std::log(c.min));
      if (c.max < 1.0) hi_guard = std::min(hi_guard, kMinLogPower / std::log(c.max));
    } else {
      if (c.n_neg == 0 && c.min > 0.0) {
        lo_guard = std::max(lo_guard, kMinLogPower / std::log1p(c.min));
      }
      if (c.n_pos + c.n_zero == 0) {
        hi_guard = std::min(hi_guard, 2.0 - kMinLogPower / std::log1p(-c.max));
      }
    }
  }
  if (lo_guard > b.lo) {
    b.lo = lo_guard;
    b.lo_active = false;
  }
  if (hi_guard < b.hi) {
    b.hi = hi_guard;
    b.hi_active = false;
  }
  if (!(b.lo < b.hi)) throw ConfigError("feasible lambda interval is empty");
  return b;
}

std::string Protocol::name() const {
  if (kind == Kind::Brent) return "brent";
  return "grid:" + std::to_string(points_per_round);
}

Protocol parse_protocol(std::string_view text) {
  if (text == "brent") return Protocol::brent();
  constexpr std::string_view prefix = "grid:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string digits(text.substr(prefix.size()));
    char* end = nullptr;
    const long points = std::strtol(digits.c_str(), &end, 10);
    if (!digits.empty() && end != nullptr && *end == '\0' && points >= 3 && points <= 1000000) {
      return Protocol::grid(static_cast<int>(points));
    }
  }
  throw ConfigError("unknown protocol '" + std::string(text) + "' (expected brent or grid:N, N >= 3)");
}

FedFitResult fed_fit(std::span<const ClientShard> shards, TransformKind kind,
                     const FitOptions& opts, const FedRun& run) {
  const SetupStats stats = setup_round(shards, kind);
  if (run.trace != nullptr) {
    for (std::size_t i = 0; i < shards.size(); ++i) {
      *run.trace << encode_setup(shards[i].id, kind, stats.clients[i]) << '\n';
    }
  }
  if (stats.n() < 2 || stats.min == stats.max) {
    throw DegenerateError("likelihood is undefined for constant data");
  }
  const LambdaBounds bounds = federated_interval(stats, kind, opts);

  LoopbackTransport loopback;
  Transport& transport = run.transport != nullptr ? *run.transport : loopback;
  const bool grid = run.protocol.kind == Protocol::Kind::Grid;
  if (grid && run.protocol.points_per_round < 3) {
    throw ConfigError("grid protocol needs at least 3 points per round");
  }

  FedFitResult out;
  out.clients = shards.size();
  out.interval_lo = bounds.lo;
  out.interval_hi = bounds.hi;
  const std::size_t points = grid ? static_cast<std::size_t>(run.protocol.points_per_round) : 1;
  out.messages_per_round = shards.size() * points;
  out.client_numbers_per_round = out.messages_per_round * payload_size(kind);
  out.server_numbers_per_round = points;

  std::vector<ClientMessage> received(shards.size());
  auto evaluate = [&](int round, double lambda) {
    for (std::size_t i = 0; i < shards.size(); ++i) {
      const WireRecord sent{round, lambda, shards[i].id, kind,
                            client_message(kind, shards[i], lambda)};
      const WireRecord got = transport.carry(sent);
      if (run.trace != nullptr) *run.trace << encode_record(got) << '\n';
      received[i] = got.message;
      ++out.messages_total;
    }
    return server_nll(kind, received, lambda, stats.c_total);
  };

  if (!grid) {
    int round = 0;
    auto objective = [&](double lambda) { return evaluate(++round, lambda); };
    const FitResult fit = fit_objective(objective, bounds, opts);
    out.lambda_star = fit.lambda_star;
    out.nll_at_star = fit.nll_at_star;
    out.rounds = fit.evaluations;
    out.bound_active = fit.bound_active;
  } else {
    double lo = bounds.lo;
    double hi = bounds.hi;
    double best_lambda = lo;
    double best_nll = kInf;
    int round = 0;
    while (round < opts.max_evals) {
      ++round;
      const std::vector<double> lambdas = linspace(lo, hi, points);
      std::size_t best = 0;
      std::vector<double> values(points);
      for (std::size_t j = 0; j < points; ++j) {
        values[j] = evaluate(round, lambdas[j]);
        if (values[j] < values[best]) best = j;
      }
      best_lambda = lambdas[best];
      best_nll = values[best];
      lo = lambdas[best == 0 ? 0 : best - 1];
      hi = lambdas[std::min(best + 1, points - 1)];
      if (hi - lo <= opts.x_tolerance * (1.0 + std::fabs(best_lambda))) break;
    }
    out.lambda_star = best_lambda;
    out.nll_at_star = best_nll;
    out.rounds = round;
    const double tol = opts.x_tolerance * (1.0 + std::fabs(best_lambda));
    out.bound_active = (bounds.lo_active && std::fabs(best_lambda - bounds.lo) <= tol) ||
                       (bounds.hi_active && std::fabs(best_lambda - bounds.hi) <= tol);
  }

  if (run.trace != nullptr) *run.trace << encode_summary(out, kind, run.protocol) << '\n';
  return out;
}

double fedavg_lambda(std::span<const ClientShard> shards, TransformKind kind,
                     const FitOptions& opts) {
  double weighted = 0.0;
  double total = 0.0;
  for (const ClientShard& shard : shards) {
    if (shard.data.size() < 2 || shard.data.all_equal()) continue;
    const FitResult local = fit_lambda(shard.data, kind, opts);
    const double n = static_cast<double>(shard.data.size());
    weighted += n * local.lambda_star;
    total += n;
  }
  if (total == 0.0) throw DegenerateError("fedavg: no shard can be fitted locally");
  return weighted / total;
}

std::vector<ClientShard> make_shards(std::span<const double> values, std::size_t k,
                                     std::uint64_t seed) {
  if (k == 0) throw ConfigError("shard count must be at least 1");
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  std::vector<std::vector<double>> parts(k);
  for (std::size_t i = 0; i < order.size(); ++i) parts[i % k].push_back(values[order[i]]);
  std::vector<ClientShard> shards;
  shards.reserve(k);
  for (std::size_t s = 0; s < k; ++s) {
    char id[32];
    std::snprintf(id, sizeof id, "client-%03zu", s);
    shards.push_back({id, Dataset(std::move(parts[s]))});
  }
  return shards;
}

}  // namespace stablepower
