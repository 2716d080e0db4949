#include <string>

#include "json.hpp"
#include "stablepower/errors.hpp"
#include "stablepower/federated.hpp"

namespace stablepower {
namespace {

using nlohmann::json;

std::string dump(const json& j) { return j.dump(); }

}  // namespace

std::string encode_record(const WireRecord& r) {
  json j;
  j["type"] = "message";
  j["round"] = r.round;
  j["lambda"] = r.lambda;
  j["client"] = r.client_id;
  j["transform"] = std::string(short_name(r.kind));
  j["c"] = r.message.c;
  if (r.kind == TransformKind::BoxCox) {
    j["n"] = r.message.n();
  } else {
    j["n_pos"] = r.message.n_pos;
    j["n_neg"] = r.message.n_neg;
  }
  j["mean"] = r.message.mean;
  j["ssd"] = r.message.ssd;
  return dump(j);
}

WireRecord decode_record(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("type").get<std::string>() != "message") throw ParseError("not a message record");
    WireRecord r;
    r.round = j.at("round").get<int>();
    r.lambda = j.at("lambda").get<double>();
    r.client_id = j.at("client").get<std::string>();
    r.kind = parse_transform(j.at("transform").get<std::string>());
    r.message.c = j.at("c").get<double>();
    if (r.kind == TransformKind::BoxCox) {
      r.message.n_pos = j.at("n").get<std::size_t>();
    } else {
      r.message.n_pos = j.at("n_pos").get<std::size_t>();
      r.message.n_neg = j.at("n_neg").get<std::size_t>();
    }
    r.message.mean = j.at("mean").get<double>();
    r.message.ssd = j.at("ssd").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed wire record: ") + e.what());
  } catch (const ConfigError& e) {
    throw ParseError(std::string("malformed wire record: ") + e.what());
  }
}

WireRecord LoopbackTransport::carry(const WireRecord& record) {
  const std::string bytes = encode_record(record);
  bytes_ += bytes.size();
  ++records_;
  return decode_record(bytes);
}

std::string encode_setup(const std::string& client_id, TransformKind kind, const ClientSetup& s) {
  json j;
  j["type"] = "setup";
  j["round"] = 0;
  j["client"] = client_id;
  j["transform"] = std::string(short_name(kind));
  const std::size_t n = s.n_pos + s.n_neg + s.n_zero;
  j["min"] = n == 0 ? json(nullptr) : json(s.min);
  j["max"] = n == 0 ? json(nullptr) : json(s.max);
  j["n_pos"] = s.n_pos;
  j["n_neg"] = s.n_neg;
  j["n_zero"] = s.n_zero;
  j["c"] = s.c;
  return dump(j);
}

std::string encode_summary(const FedFitResult& r, TransformKind kind, const Protocol& protocol) {
  json j;
  j["type"] = "summary";
  j["transform"] = std::string(short_name(kind));
  j["protocol"] = protocol.name();
  j["lambda_star"] = r.lambda_star;
  j["nll_at_star"] = r.nll_at_star;
  j["rounds"] = r.rounds;
  j["setup_rounds"] = r.setup_rounds;
  j["clients"] = r.clients;
  j["messages_per_round"] = r.messages_per_round;
  j["client_numbers_per_round"] = r.client_numbers_per_round;
  j["server_numbers_per_round"] = r.server_numbers_per_round;
  j["messages_total"] = r.messages_total;
  j["bound_active"] = r.bound_active;
  j["interval"] = {r.interval_lo, r.interval_hi};
  return dump(j);
}

}  // namespace stablepower
