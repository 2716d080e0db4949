#pragma once

// In-process simulation of federated lambda fitting.
//
// Clients hold private shards and answer each round with a handful of
// sufficient statistics of their transformed values. The server merges them
// with the pairwise rule, evaluates the global NLL and drives the same bounded
// minimizer as the centralized fit. Messages cross a Transport, which by
// default serializes every record to JSON and back.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stablepower/aggregate.hpp"
#include "stablepower/dataset.hpp"
#include "stablepower/optimize.hpp"
#include "stablepower/transforms.hpp"

namespace stablepower {

struct ClientShard {
  std::string id;
  Dataset data;
};

/// Per-round client payload. Box-Cox clients fill n_pos only.
/// For Yeo-Johnson, zeros count toward n_pos.
struct ClientMessage {
  double c = 0.0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  double mean = 0.0;
  double ssd = 0.0;

  std::size_t n() const noexcept { return n_pos + n_neg; }
};

/// The numbers actually transmitted: (c, n, mean, ssd) for Box-Cox and
/// (c, n_pos, n_neg, mean, ssd) for Yeo-Johnson.
std::vector<double> payload(TransformKind kind, const ClientMessage& message);
std::size_t payload_size(TransformKind kind) noexcept;

/// One client's answer to the setup round.
struct ClientSetup {
  double min = 0.0;
  double max = 0.0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  std::size_t n_zero = 0;
  double c = 0.0;
};

struct SetupStats {
  double min = 0.0;
  double max = 0.0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  std::size_t n_zero = 0;
  double c_total = 0.0;
  std::vector<ClientSetup> clients;  // shard order; empty shards included

  std::size_t n() const noexcept { return n_pos + n_neg + n_zero; }
};

/// c is sum ln x for Box-Cox (throws DomainError on non-positive data) and
/// sum sgn(x) ln(1 + |x|) for Yeo-Johnson.
ClientSetup client_setup(const ClientShard& shard, TransformKind kind);

/// Throws DomainError when there are no shards or every shard is empty.
SetupStats setup_round(std::span<const ClientShard> shards, TransformKind kind);

/// y = x^lambda (ln x at lambda = 0); linear-domain mean and ssd of y.
/// Throws OverflowError when y or its ssd is not representable.
ClientMessage client_message_bc(const ClientShard& shard, double lambda);

/// All nonnegative: y = (x + 1)^lambda. All negative: y = (1 - x)^(2 - lambda).
/// Mixed: y is the full Yeo-Johnson value. Logs replace the powers at lambda = 0 and 2.
ClientMessage client_message_yj(const ClientShard& shard, double lambda);

ClientMessage client_message(TransformKind kind, const ClientShard& shard, double lambda);

/// Returns +inf when the merged ssd underflows to zero at lambda != 0.
/// Throws DegenerateError for fewer than two points or zero variance at lambda = 0.
double server_nll_bc(std::span<const ClientMessage> messages, double lambda, double c_total);

/// Merges positive, negative and mixed shards in three queues, moves the
/// pure-sign groups onto the transformed scale when more than one group is
/// present, then merges the groups.
double server_nll_yj(std::span<const ClientMessage> messages, double lambda, double c_total);

double server_nll(TransformKind kind, std::span<const ClientMessage> messages, double lambda,
                  double c_total);

/// Power-sum payload used by the one-pass baseline.
struct NaiveClientMessage {
  double c = 0.0;
  std::size_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
};

NaiveClientMessage client_message_bc_naive(const ClientShard& shard, double lambda);

/// Box-Cox server using the one-pass variance formula. May be non-finite.
double server_nll_bc_naive(std::span<const NaiveClientMessage> messages, double lambda,
                           double c_total);

/// Lambda interval used by the federated server: y_B bounds (1e100 when
/// unset) plus a guard keeping every client's largest power above e^-300 so
/// the linear-domain ssd cannot underflow.
LambdaBounds federated_interval(const SetupStats& stats, TransformKind kind,
                                const FitOptions& opts);

struct Protocol {
  enum class Kind { Brent, Grid };
  Kind kind = Kind::Brent;
  int points_per_round = 1;

  static Protocol brent() { return {}; }
  static Protocol grid(int points) { return {Kind::Grid, points}; }
  std::string name() const;
};

/// "brent" or "grid:N" with N >= 3. Throws ConfigError otherwise.
Protocol parse_protocol(std::string_view text);

/// A message as it crosses the wire.
struct WireRecord {
  int round = 0;
  double lambda = 0.0;
  std::string client_id;
  TransformKind kind = TransformKind::BoxCox;
  ClientMessage message;
};

/// Flat JSON object; Box-Cox records carry "n", Yeo-Johnson records carry
/// "n_pos" and "n_neg".
std::string encode_record(const WireRecord& record);

/// Throws ParseError on malformed input.
WireRecord decode_record(std::string_view text);

class Transport {
 public:
  virtual ~Transport() = default;
  /// Delivers a client record to the server and returns what the server received.
  virtual WireRecord carry(const WireRecord& record) = 0;
};

/// Encodes each record to JSON and decodes it again.
class LoopbackTransport final : public Transport {
 public:
  WireRecord carry(const WireRecord& record) override;
  std::size_t bytes_carried() const noexcept { return bytes_; }
  std::size_t records_carried() const noexcept { return records_; }

 private:
  std::size_t bytes_ = 0;
  std::size_t records_ = 0;
};

struct FedFitResult {
  double lambda_star = 0.0;
  double nll_at_star = 0.0;
  int rounds = 0;        // excluding setup
  int setup_rounds = 1;
  std::size_t clients = 0;
  std::size_t messages_per_round = 0;        // client -> server records
  std::size_t client_numbers_per_round = 0;  // client -> server numbers
  std::size_t server_numbers_per_round = 0;  // server -> each client
  std::size_t messages_total = 0;
  bool bound_active = false;
  double interval_lo = 0.0;
  double interval_hi = 0.0;
};

struct FedRun {
  Protocol protocol;
  Transport* transport = nullptr;  // loopback when null
  std::ostream* trace = nullptr;   // JSON lines: setup, messages, summary
};

/// Brent: one round per NLL evaluation. Grid: each round evaluates
/// points_per_round evenly spaced lambdas (endpoints included), then narrows
/// the bracket to the neighbours of the best point, ties toward the lower
/// index, until it is no wider than x_tolerance * (1 + |lambda|).
FedFitResult fed_fit(std::span<const ClientShard> shards, TransformKind kind,
                     const FitOptions& opts, const FedRun& run = {});

/// Count-weighted average of per-shard local optima. Shards with fewer than
/// two points or constant data are skipped.
double fedavg_lambda(std::span<const ClientShard> shards, TransformKind kind,
                     const FitOptions& opts);

/// Shuffles the row order (Fisher-Yates, mt19937_64 seeded with seed) and deals
/// rows round-robin into k shards with ids "client-000", "client-001", ...
std::vector<ClientShard> make_shards(std::span<const double> values, std::size_t k,
                                     std::uint64_t seed);

std::string encode_setup(const std::string& client_id, TransformKind kind, const ClientSetup& setup);

std::string encode_summary(const FedFitResult& result, TransformKind kind,
                           const Protocol& protocol);

}  // namespace stablepower
