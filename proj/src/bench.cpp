// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "gss/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "json.hpp"

namespace gss {
namespace {

using Json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

ConfigError bad_value(const std::string& key, const std::string& value,
                      const std::string& origin, const char* expected) {
  return ConfigError((origin.empty() ? "" : origin + ": ") + "'" + key + "=" +
                     value + "': expected " + expected);
}

template <typename T>
T parse_int(const std::string& key, const std::string& value,
            const std::string& origin) {
  T out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (value.empty() || ec != std::errc() || ptr != end) {
    throw bad_value(key, value, origin, "an integer");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& value,
                  const std::string& origin) {
  char* end = nullptr;
  const double out = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size()) {
    throw bad_value(key, value, origin, "a number");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value,
                const std::string& origin) {
  std::string v = value;
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw bad_value(key, value, origin, "a boolean");
}

std::vector<std::size_t> parse_fanouts(const std::string& key,
                                       const std::string& value,
                                       const std::string& origin) {
  std::vector<std::size_t> out;
  if (trim(value).empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = value.find(',', start);
    out.push_back(parse_int<std::size_t>(
        key, trim(value.substr(start, comma - start)), origin));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json counters_json(const IoCounters& c) {
  Json j;
  j["disk_reads"] = c.disk_reads;
  j["disk_writes"] = c.disk_writes;
  j["cache_hits"] = c.cache_hits;
  j["cache_misses"] = c.cache_misses;
  return j;
}

Json optional_json(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ArgumentError*>(&error)) return kExitUsage;
  if (dynamic_cast<const DataError*>(&error)) return kExitData;
  if (dynamic_cast<const LookupError*>(&error)) return kExitData;
  if (dynamic_cast<const ConfigError*>(&error)) return kExitConfig;
  return kExitInternal;
}

const std::vector<std::string>& run_config_keys() {
  static const std::vector<std::string> keys = {
      "strategy",  "fanouts",   "amp_rate",   "refresh_rate",    "fetch_rate",
      "period",    "fetch_period", "shared_rho", "threshold",    "seed",
      "write_back", "graph",    "synthetic",  "graph_seed",      "batches",
      "seeds_per_batch", "output", "baseline", "consumers",      "dim",
      "sim_scale",
  };
  return keys;
}

void apply_setting(RunConfig& c, const std::string& raw_key,
                   const std::string& raw_value, const std::string& origin) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  StrategyConfig& s = c.strategy;
  if (key == "strategy") {
    s.kind = parse_strategy(value);
  } else if (key == "fanouts") {
    s.fanouts = parse_fanouts(key, value, origin);
  } else if (key == "amp_rate") {
    s.amp_rate = parse_real(key, value, origin);
  } else if (key == "refresh_rate") {
    s.refresh_rate = parse_real(key, value, origin);
  } else if (key == "fetch_rate") {
    s.fetch_rate = parse_real(key, value, origin);
  } else if (key == "period") {
    s.period = parse_int<std::uint32_t>(key, value, origin);
  } else if (key == "fetch_period") {
    s.fetch_period = parse_int<std::uint32_t>(key, value, origin);
  } else if (key == "shared_rho") {
    s.shared_rho = parse_real(key, value, origin);
  } else if (key == "threshold") {
    if (value.empty() || value == "none") {
      c.threshold.reset();
    } else {
      c.threshold = parse_int<std::int64_t>(key, value, origin);
    }
  } else if (key == "seed") {
    s.seed = parse_int<std::uint64_t>(key, value, origin);
  } else if (key == "write_back") {
    s.write_back = parse_bool(key, value, origin);
  } else if (key == "graph") {
    c.graph = value;
  } else if (key == "synthetic") {
    c.synthetic = value;
  } else if (key == "graph_seed") {
    c.graph_seed = parse_int<std::uint64_t>(key, value, origin);
  } else if (key == "batches") {
    c.batches = parse_int<std::uint32_t>(key, value, origin);
  } else if (key == "seeds_per_batch") {
    c.seeds_per_batch = parse_int<std::size_t>(key, value, origin);
  } else if (key == "output") {
    c.output = value;
  } else if (key == "baseline") {
    c.baseline = value;
  } else if (key == "consumers") {
    c.consumers = parse_int<std::size_t>(key, value, origin);
  } else if (key == "dim") {
    c.dim = parse_int<std::size_t>(key, value, origin);
  } else if (key == "sim_scale") {
    c.sim_scale = parse_real(key, value, origin);
  } else {
    throw ConfigError((origin.empty() ? "" : origin + ": ") + "unknown key '" +
                      key + "'");
  }
  c.explicit_keys.insert(key);
}

void RunConfig::validate() const {
  strategy.validate();
  if (batches < 1) throw ConfigError("batches must be >= 1");
  if (seeds_per_batch < 1) throw ConfigError("seeds_per_batch must be >= 1");
  if (consumers < 1) throw ConfigError("consumers must be >= 1");
  if (dim < 1) throw ConfigError("dim must be >= 1");
  if (sim_scale && !(*sim_scale > 0.0)) throw ConfigError("sim_scale must be > 0");
  if (!graph.empty() && !synthetic.empty()) {
    throw ConfigError("set either graph or synthetic, not both");
  }
  if (threshold && strategy.kind == StrategyKind::kFbl) {
    throw ConfigError("threshold needs a caching strategy for the dense side");
  }
  if (threshold && is_shared(strategy.kind) && consumers > 1) {
    throw ConfigError("dual mode with a shared cache supports one consumer");
  }
  const auto params = strategy_params(strategy.kind);
  for (StrategyParam p :
       {StrategyParam::kAmpRate, StrategyParam::kRefreshRate,
        StrategyParam::kFetchRate, StrategyParam::kPeriod,
        StrategyParam::kFetchPeriod, StrategyParam::kSharedRho,
        StrategyParam::kWriteBack}) {
    if (explicit_keys.contains(to_string(p)) &&
        std::find(params.begin(), params.end(), p) == params.end()) {
      throw ConfigError(std::string("'") + to_string(p) +
                        "' does not apply to strategy " +
                        to_string(strategy.kind));
    }
  }
}

namespace {

void apply_config_stream(RunConfig& c, std::istream& in,
                         const std::string& origin) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(line_no);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key=value");
    apply_setting(c, line.substr(0, eq), line.substr(eq + 1), where);
  }
}

}  // namespace

RunConfig parse_run_config(std::istream& in, const std::string& origin) {
  RunConfig c;
  apply_config_stream(c, in, origin);
  return c;
}

void load_run_config(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  apply_config_stream(config, in, path);
}

Graph load_run_graph(const RunConfig& config) {
  if (!config.graph.empty()) return load_graph(config.graph);
  if (!config.synthetic.empty()) {
    return generate_synthetic(parse_synthetic_spec(config.synthetic),
                              config.graph_seed);
  }
  throw ConfigError("no graph source: set graph or synthetic");
}

std::vector<NodeId> batch_seeds(std::size_t node_count, std::size_t count,
                                std::uint64_t seed, std::uint32_t batch) {
  if (node_count == 0) throw DataError("graph has no nodes to draw seeds from");
  const std::size_t k = std::min(count, node_count);
  Rng rng(derive_seed(seed, batch, 0x5eed));
  // Floyd's algorithm: k distinct values from [0, node_count).
  std::unordered_set<NodeId> chosen;
  std::vector<NodeId> out;
  out.reserve(k);
  for (std::size_t j = node_count - k; j < node_count; ++j) {
    auto t = static_cast<NodeId>(uniform_below(rng, j + 1));
    if (!chosen.insert(t).second) {
      t = static_cast<NodeId>(j);
      chosen.insert(t);
    }
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::unique_ptr<TieredStore> make_store(const RunConfig& config,
                                        const Graph& g) {
  StoreConfig sc;
  sc.payload_dim = config.dim;
  sc.payload_seed = config.strategy.seed;
  sc.latency = LatencyModel::from_env();
  if (config.sim_scale) sc.latency.scale = *config.sim_scale;
  sc.keep_log = config.keep_log;
  return std::make_unique<TieredStore>(g.node_count(), sc);
}

double BenchReport::mean_sim_time() const {
  return rows.empty() ? 0.0 : total_sim_time / static_cast<double>(rows.size());
}

double BenchReport::mean_cache_entries() const {
  return rows.empty() ? 0.0
                      : static_cast<double>(total_cache_entries) /
                            static_cast<double>(rows.size());
}

double BenchReport::memory_proxy_bytes() const {
  return mean_cache_entries() * static_cast<double>(1 + dim);
}

std::string join_fanouts(const std::vector<std::size_t>& fanouts) {
  std::string out;
  for (std::size_t i = 0; i < fanouts.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(fanouts[i]);
  }
  return out;
}

BenchReport run_bench(const RunConfig& config, const Graph& g, TieredStore& store) {
  config.validate();
  GroupOptions options;
  options.consumers = config.consumers;
  options.batches = config.batches;
  options.theta = config.threshold;
  const std::size_t n = g.node_count();
  const SeedSource seeds = [&](std::uint32_t t) {
    return batch_seeds(n, config.seeds_per_batch, config.strategy.seed, t);
  };
  const GroupResult result = run_consumers(g, config.strategy, options, seeds, store);

  BenchReport report;
  report.strategy = to_string(config.strategy.kind);
  report.fanouts = config.strategy.fanouts;
  report.dim = config.dim;
  report.live_cache_entries = result.live_cache_entries;
  report.refresh_events = result.refresh_events;
  for (const BatchRecord& r : result.records) {
    BenchRow row;
    row.batch = r.batch;
    row.counters = r.counters;
    row.sim_time = r.sim_time;
    row.cache_entries = r.memory_entries;
    report.totals += row.counters;
    report.total_sim_time += row.sim_time;
    report.total_cache_entries += row.cache_entries;
    report.rows.push_back(row);
  }
  return report;
}

std::optional<double> reduction_pct(double base, double current) {
  if (base == 0.0) return std::nullopt;
  return (base - current) / base * 100.0;
}

void apply_baseline(BenchReport& report, const BenchReport& baseline) {
  Reductions r;
  r.sim_time = reduction_pct(baseline.total_sim_time, report.total_sim_time);
  r.disk_reads = reduction_pct(static_cast<double>(baseline.totals.disk_reads),
                               static_cast<double>(report.totals.disk_reads));
  r.cache_entries =
      reduction_pct(static_cast<double>(baseline.total_cache_entries),
                    static_cast<double>(report.total_cache_entries));
  report.baseline_strategy = baseline.strategy;
  report.reductions = r;
}

void write_report_csv(const BenchReport& report, std::ostream& out) {
  out << "strategy,fanouts,batch,disk_reads,disk_writes,cache_hits,"
         "cache_misses,sim_time,cache_entries\n";
  const std::string fanouts = "\"" + join_fanouts(report.fanouts) + "\"";
  for (const BenchRow& row : report.rows) {
    out << report.strategy << ',' << fanouts << ',' << row.batch << ','
        << row.counters.disk_reads << ',' << row.counters.disk_writes << ','
        << row.counters.cache_hits << ',' << row.counters.cache_misses << ','
        << format_real(row.sim_time) << ',' << row.cache_entries << '\n';
  }
}

void write_report_json(const BenchReport& report, const RunConfig& config,
                       std::ostream& out) {
  Json j;
  j["schema"] = "gss-report-v1";
  j["strategy"] = report.strategy;
  j["fanouts"] = report.fanouts;
  Json cfg;
  const StrategyConfig& s = config.strategy;
  cfg["amp_rate"] = s.amp_rate;
  cfg["refresh_rate"] = s.refresh_rate;
  cfg["fetch_rate"] = s.fetch_rate;
  cfg["period"] = s.period;
  cfg["fetch_period"] = s.fetch_period;
  cfg["shared_rho"] = s.shared_rho;
  cfg["write_back"] = s.write_back;
  cfg["seed"] = s.seed;
  cfg["threshold"] = config.threshold ? Json(*config.threshold) : Json(nullptr);
  cfg["graph"] = config.graph;
  cfg["synthetic"] = config.synthetic;
  cfg["graph_seed"] = config.graph_seed;
  cfg["batches"] = config.batches;
  cfg["seeds_per_batch"] = config.seeds_per_batch;
  cfg["consumers"] = config.consumers;
  cfg["dim"] = config.dim;
  j["config"] = cfg;
  Json totals = counters_json(report.totals);
  totals["sim_time"] = report.total_sim_time;
  totals["cache_entries"] = report.total_cache_entries;
  j["totals"] = totals;
  j["mean_sim_time"] = report.mean_sim_time();
  j["mean_cache_entries"] = report.mean_cache_entries();
  j["memory_proxy_bytes"] = report.memory_proxy_bytes();
  j["live_cache_entries"] = report.live_cache_entries;
  j["refresh_events"] = report.refresh_events;
  if (report.reductions) {
    Json b;
    b["strategy"] = report.baseline_strategy;
    b["sim_time_pct"] = optional_json(report.reductions->sim_time);
    b["disk_reads_pct"] = optional_json(report.reductions->disk_reads);
    b["cache_entries_pct"] = optional_json(report.reductions->cache_entries);
    j["reduction"] = b;
  } else {
    j["reduction"] = nullptr;
  }
  out << j.dump(2) << '\n';
}

BenchReport read_report_json(std::istream& in, const std::string& origin) {
  try {
    const Json j = Json::parse(in);
    if (j.value("schema", "") != "gss-report-v1") {
      throw DataError(origin + ": not a gss-report-v1 document");
    }
    BenchReport r;
    r.strategy = j.at("strategy").get<std::string>();
    r.fanouts = j.at("fanouts").get<std::vector<std::size_t>>();
    const Json& t = j.at("totals");
    r.totals.disk_reads = t.at("disk_reads").get<std::uint64_t>();
    r.totals.disk_writes = t.at("disk_writes").get<std::uint64_t>();
    r.totals.cache_hits = t.at("cache_hits").get<std::uint64_t>();
    r.totals.cache_misses = t.at("cache_misses").get<std::uint64_t>();
    r.total_sim_time = t.at("sim_time").get<double>();
    r.total_cache_entries = t.at("cache_entries").get<std::uint64_t>();
    r.live_cache_entries = j.at("live_cache_entries").get<std::size_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(origin + ": malformed report: " + e.what());
  }
}

}  // namespace gss
