#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli.hpp"
#include "json.hpp"
#include "stablepower/adversarial.hpp"
#include "stablepower/errors.hpp"
#include "stablepower/federated.hpp"
#include "stablepower/likelihood.hpp"
#include "stablepower/optimize.hpp"

namespace stablepower::cli {
namespace {

using json = nlohmann::ordered_json;

constexpr std::size_t kSmoothPoints = 41;

struct Settings {
  std::string file;
  std::vector<std::string> columns;
  bool no_header = false;
  std::string transform = "bc";
  std::optional<double> bound;
  std::vector<double> interval;
  double x_tol = 1e-8;
  int max_evals = 500;
  std::vector<double> grid;
  std::vector<std::string> engines;
  std::size_t shards = 1;
  std::uint64_t seed = 0;
  std::string protocol = "brent";
  std::string trace;
  std::string format;
  std::string sign = "positive";
  std::string precision = "double";
  std::optional<double> base;
  int duplicates = 3;
  double perturbation = 0.1;
  std::string out_prefix;
  std::optional<double> lambda;
};

std::string number(double v) {
  if (std::isnan(v) || std::isinf(v)) return "NaN";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

FitOptions fit_options(const Settings& s) {
  FitOptions opts;
  opts.y_bound = s.bound;
  if (!s.interval.empty()) {
    opts.lo = s.interval.at(0);
    opts.hi = s.interval.at(1);
  }
  opts.x_tolerance = s.x_tol;
  opts.max_evals = s.max_evals;
  opts.validate();
  return opts;
}

std::string format_or(const Settings& s, const char* fallback) {
  return s.format.empty() ? fallback : s.format;
}

std::vector<Column> load_columns(const Settings& s) {
  const CsvTable table = read_csv_file(s.file, !s.no_header);
  return select_columns(table, s.columns);
}

// 41 stable evaluations around lambda*: all finite and no negative second
// difference beyond rounding.
bool curve_smooth(const Dataset& data, TransformKind kind, const FitResult& fit) {
  const double span = std::max(1.0, 0.05 * std::fabs(fit.lambda_star));
  const double lo = std::max(fit.lambda_star - span, fit.interval_lo);
  const double hi = std::min(fit.lambda_star + span, fit.interval_hi);
  const auto curve = nll_curve(data, kind, linspace(lo, hi, kSmoothPoints), Engine::Stable);
  for (const CurvePoint& p : curve) {
    if (!p.nll.finite) return false;
  }
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const double f = curve[i].nll.value;
    const double d2 = curve[i - 1].nll.value - 2.0 * f + curve[i + 1].nll.value;
    if (d2 < -1e-9 * (1.0 + std::fabs(f))) return false;
  }
  return true;
}

void cmd_fit(const Settings& s, std::ostream& out) {
  const TransformKind kind = parse_transform(s.transform);
  const FitOptions opts = fit_options(s);
  const std::string format = format_or(s, "json");
  const auto columns = load_columns(s);

  json results = json::array();
  std::ostringstream csv;
  csv << "column,n,dropped,lambda_star,nll_at_star,evaluations,bound_active,interval_lo,"
         "interval_hi,curve_smooth\n";
  for (const Column& col : columns) {
    const Dataset data(col.values);
    const FitResult fit = fit_lambda(data, kind, opts);
    const bool smooth = curve_smooth(data, kind, fit);
    results.push_back({{"column", col.name},
                       {"n", data.size()},
                       {"dropped", col.dropped},
                       {"lambda_star", fit.lambda_star},
                       {"nll_at_star", json_number(fit.nll_at_star)},
                       {"evaluations", fit.evaluations},
                       {"bound_active", fit.bound_active},
                       {"interval", {fit.interval_lo, fit.interval_hi}},
                       {"curve_smooth", smooth}});
    csv << col.name << ',' << data.size() << ',' << col.dropped << ',' << number(fit.lambda_star)
        << ',' << number(fit.nll_at_star) << ',' << fit.evaluations << ','
        << (fit.bound_active ? 1 : 0) << ',' << number(fit.interval_lo) << ','
        << number(fit.interval_hi) << ',' << (smooth ? 1 : 0) << '\n';
  }
  if (format == "csv") {
    out << csv.str();
  } else {
    json doc{{"command", "fit"}, {"transform", std::string(short_name(kind))}};
    if (s.bound) doc["y_bound"] = *s.bound;
    doc["results"] = std::move(results);
    out << doc.dump(2) << '\n';
  }
}

void cmd_curve(const Settings& s, std::ostream& out) {
  const TransformKind kind = parse_transform(s.transform);
  if (s.grid.size() != 3) throw ConfigError("curve needs --grid LO HI N");
  const double lo = s.grid[0];
  const double hi = s.grid[1];
  const double count = s.grid[2];
  if (!(lo < hi) || !(count >= 2) || count != std::floor(count) || count > 1e7) {
    throw ConfigError("--grid needs LO < HI and an integer N >= 2");
  }
  std::vector<Engine> engines;
  for (const std::string& name : s.engines) engines.push_back(parse_engine(name));
  if (engines.empty()) engines.push_back(Engine::Stable);
  const std::string format = format_or(s, "csv");
  const auto grid = linspace(lo, hi, static_cast<std::size_t>(count));
  const auto columns = load_columns(s);

  std::ostringstream csv;
  csv << "column,engine,lambda,nll,finite\n";
  json points = json::array();
  for (const Column& col : columns) {
    const Dataset data(col.values);
    for (Engine engine : engines) {
      for (const CurvePoint& p : nll_curve(data, kind, grid, engine)) {
        csv << col.name << ',' << engine_name(engine) << ',' << number(p.lambda) << ','
            << number(p.nll.value) << ',' << (p.nll.finite ? 1 : 0) << '\n';
        points.push_back({{"column", col.name},
                          {"engine", std::string(engine_name(engine))},
                          {"lambda", p.lambda},
                          {"nll", json_number(p.nll.value)},
                          {"finite", p.nll.finite}});
      }
    }
  }
  if (format == "csv") {
    out << csv.str();
  } else {
    json doc{{"command", "curve"}, {"transform", std::string(short_name(kind))}};
    doc["points"] = std::move(points);
    out << doc.dump(2) << '\n';
  }
}

void cmd_fedsim(const Settings& s, std::ostream& out) {
  const TransformKind kind = parse_transform(s.transform);
  FitOptions opts = fit_options(s);
  if (!opts.y_bound) opts.y_bound = kDefaultYBound;
  const Protocol protocol = parse_protocol(s.protocol);
  if (s.shards < 1) throw ConfigError("--shards must be at least 1");
  const std::string format = format_or(s, "json");
  const auto columns = load_columns(s);

  std::unique_ptr<std::ofstream> trace;
  if (!s.trace.empty()) {
    trace = std::make_unique<std::ofstream>(s.trace);
    if (!*trace) throw ParseError("cannot write trace file '" + s.trace + "'");
  }

  json results = json::array();
  std::ostringstream csv;
  csv << "column,lambda_star,nll_at_star,rounds,setup_rounds,clients,messages_total,"
         "bound_active,centralized_lambda_star\n";
  for (const Column& col : columns) {
    const Dataset whole(col.values);
    const auto shards = make_shards(col.values, s.shards, s.seed);
    if (trace) *trace << json{{"type", "column"}, {"column", col.name}}.dump() << '\n';
    const FedFitResult fed = fed_fit(shards, kind, opts, FedRun{protocol, nullptr, trace.get()});
    const FitResult central = fit_lambda(whole, kind, opts);
    json summary = json::parse(encode_summary(fed, kind, protocol));
    summary["column"] = col.name;
    summary["n"] = whole.size();
    summary["dropped"] = col.dropped;
    summary["seed"] = s.seed;
    summary["centralized_lambda_star"] = central.lambda_star;
    results.push_back(std::move(summary));
    csv << col.name << ',' << number(fed.lambda_star) << ',' << number(fed.nll_at_star) << ','
        << fed.rounds << ',' << fed.setup_rounds << ',' << fed.clients << ','
        << fed.messages_total << ',' << (fed.bound_active ? 1 : 0) << ','
        << number(central.lambda_star) << '\n';
  }
  if (format == "csv") {
    out << csv.str();
  } else {
    json doc{{"command", "fedsim"},
             {"transform", std::string(short_name(kind))},
             {"protocol", protocol.name()},
             {"shards", s.shards}};
    doc["results"] = std::move(results);
    out << doc.dump(2) << '\n';
  }
}

json fixture_json(const AdversarialCase& c) {
  json data = json::array();
  for (double x : c.data) data.push_back(x);
  return {{"transform", std::string(short_name(c.transform))},
          {"overflow", std::string(sign_name(c.sign))},
          {"precision", std::string(profile(c.precision).name)},
          {"data", std::move(data)},
          {"lambda_star", c.expected_lambda},
          {"extreme_log10", c.expected_extreme_log10},
          {"provenance", c.provenance}};
}

void cmd_advgen(const Settings& s, std::ostream& out) {
  const TransformKind kind = parse_transform(s.transform);
  const OverflowSign sign = parse_overflow_sign(s.sign);
  const Precision precision = parse_precision(s.precision);
  AdversarialCase c;
  if (s.base) {
    c = gen_custom(kind, sign, precision, CustomRecipe{*s.base, s.duplicates, s.perturbation});
  } else {
    c = gen_adversarial(kind, sign, precision);
  }
  json doc = fixture_json(c);
  if (!s.out_prefix.empty()) {
    const std::string data_path = s.out_prefix + ".csv";
    const std::string fixture_path = s.out_prefix + ".json";
    std::ofstream data_out(data_path);
    if (!data_out) throw ParseError("cannot write '" + data_path + "'");
    data_out << "x\n";
    for (double x : c.data) data_out << number(x) << '\n';
    std::ofstream fixture_out(fixture_path);
    if (!fixture_out) throw ParseError("cannot write '" + fixture_path + "'");
    fixture_out << doc.dump(2) << '\n';
    doc["data_file"] = data_path;
    doc["fixture_file"] = fixture_path;
  }
  if (format_or(s, "json") == "csv") {
    out << "x\n";
    for (double x : c.data) out << number(x) << '\n';
  } else {
    out << doc.dump(2) << '\n';
  }
}

void cmd_check(const Settings& s, std::ostream& out) {
  const TransformKind kind = parse_transform(s.transform);
  const PrecisionProfile& prof = profile(parse_precision(s.precision));
  const std::string format = format_or(s, "json");
  const auto columns = load_columns(s);

  json results = json::array();
  std::ostringstream csv;
  csv << "column,lambda,precision,max_log10,max_sign,flagged,n\n";
  for (const Column& col : columns) {
    const Dataset data(col.values);
    const double lambda = s.lambda ? *s.lambda : fit_lambda(data, kind, fit_options(s)).lambda_star;
    const OverflowReport report = detect_overflow(data, kind, lambda, prof);
    std::size_t flagged = 0;
    json per_value = json::array();
    for (std::size_t i = 0; i < data.size(); ++i) {
      flagged += report.flagged[i] ? 1 : 0;
      per_value.push_back(json_number(report.log10_magnitude[i]));
    }
    results.push_back({{"column", col.name},
                       {"lambda", lambda},
                       {"precision", std::string(prof.name)},
                       {"max_log10", json_number(report.max_log10)},
                       {"max_sign", report.max_sign},
                       {"flagged", flagged},
                       {"overflow", report.any_flagged},
                       {"log10_magnitude", std::move(per_value)}});
    csv << col.name << ',' << number(lambda) << ',' << prof.name << ','
        << number(report.max_log10) << ',' << report.max_sign << ',' << flagged << ','
        << data.size() << '\n';
  }
  if (format == "csv") {
    out << csv.str();
  } else {
    json doc{{"command", "check"}, {"transform", std::string(short_name(kind))}};
    doc["results"] = std::move(results);
    out << doc.dump(2) << '\n';
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Numerically stable Box-Cox and Yeo-Johnson power transforms", "stablepower"};
  app.set_config("--config", "", "Read options from a key = value file");
  app.require_subcommand(1);

  app.add_option("--transform", s.transform, "bc or yj")->check(CLI::IsMember({"bc", "yj"}));
  app.add_option("--bound", s.bound, "Cap |transformed value| at Y (y_B)");
  app.add_option("--interval", s.interval, "Lambda search interval LO HI")->expected(2);
  app.add_option("--x-tol", s.x_tol, "Bracket tolerance, relative to 1 + |lambda|");
  app.add_option("--max-evals", s.max_evals, "Maximum objective evaluations");
  app.add_option("--columns", s.columns, "Column names or zero-based indices")->delimiter(',');
  app.add_flag("--no-header", s.no_header, "First CSV row is data");
  app.add_option("--format", s.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--grid", s.grid, "Lambda grid LO HI N")->expected(3);
  app.add_option("--engine", s.engines, "stable, linear, keep-constant, no-factor")
      ->delimiter(',');
  app.add_option("--shards", s.shards, "Number of simulated clients");
  app.add_option("--seed", s.seed, "Seed for the shard assignment");
  app.add_option("--protocol", s.protocol, "brent or grid:N");
  app.add_option("--trace", s.trace, "Write the federated trace as JSON lines");
  app.add_option("--sign", s.sign, "negative or positive overflow");
  app.add_option("--precision", s.precision, "double, quadruple or octuple");
  app.add_option("--base", s.base, "Custom adversarial base value");
  app.add_option("--duplicates", s.duplicates, "Custom adversarial duplicate count");
  app.add_option("--perturbation", s.perturbation, "Custom adversarial perturbation");
  app.add_option("--out", s.out_prefix, "Write PREFIX.csv and PREFIX.json");
  app.add_option("--lambda", s.lambda, "Lambda to check (default: fitted)");

  auto add_file_command = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->add_option("file", s.file, "CSV input")->required();
    return sub;
  };
  CLI::App* fit = add_file_command("fit", "Fit lambda per column");
  CLI::App* curve = add_file_command("curve", "Evaluate the NLL on a lambda grid");
  CLI::App* fedsim = add_file_command("fedsim", "Simulate federated fitting");
  CLI::App* check = add_file_command("check", "Predict transformed magnitudes");
  CLI::App* advgen = app.add_subcommand("advgen", "Generate an adversarial dataset");
  advgen->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  std::ostringstream buffer;
  try {
    if (fit->parsed()) cmd_fit(s, buffer);
    if (curve->parsed()) cmd_curve(s, buffer);
    if (fedsim->parsed()) cmd_fedsim(s, buffer);
    if (check->parsed()) cmd_check(s, buffer);
    if (advgen->parsed()) cmd_advgen(s, buffer);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DegenerateError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  out << buffer.str();
  return kExitOk;
}

}  // namespace stablepower::cli
