// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "gss/bench.hpp"
#include "gss/cost_model.hpp"
#include "gss/graph.hpp"
#include "json.hpp"

namespace gss {
namespace {

// Shortest round-trip decimal, with ".0" on integral values.
std::string format_number(double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, result.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

// Splits trailing key=value tokens into a map; anything else is a usage error.
std::map<std::string, std::string> parse_pairs(
    const std::vector<std::string>& tokens) {
  std::map<std::string, std::string> out;
  for (const std::string& tok : tokens) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ArgumentError("unexpected argument '" + tok + "'");
    }
    out[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return out;
}

std::vector<std::int64_t> parse_thetas(const std::string& list) {
  std::vector<std::int64_t> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    try {
      if (colon == std::string::npos) {
        out.push_back(std::stoll(item));
        continue;
      }
      // lo:hi:step, inclusive
      const auto second = item.find(':', colon + 1);
      const std::int64_t lo = std::stoll(item.substr(0, colon));
      const std::int64_t hi = std::stoll(item.substr(colon + 1, second - colon - 1));
      const std::int64_t step =
          second == std::string::npos ? 1 : std::stoll(item.substr(second + 1));
      if (step <= 0) throw ArgumentError("theta step must be positive");
      for (std::int64_t t = lo; t <= hi; t += step) out.push_back(t);
    } catch (const std::logic_error&) {
      throw ArgumentError("bad theta '" + item + "'");
    }
  }
  for (std::int64_t t : out) {
    if (t < 0) throw ArgumentError("theta must be non-negative");
  }
  return out;
}

struct GraphSource {
  std::string graph;
  std::string synthetic;
  std::uint64_t graph_seed = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--graph", graph, "edge-list file");
    cmd->add_option("--synthetic", synthetic, "er:N:P or ba:N:M");
    cmd->add_option("--graph_seed", graph_seed, "generator seed");
  }

  Graph load() const {
    RunConfig c;
    c.graph = graph;
    c.synthetic = synthetic;
    c.graph_seed = graph_seed;
    c.validate();
    return load_run_graph(c);
  }
};

int cmd_gen(const std::string& model, const std::string& a, const std::string& b,
            std::uint64_t seed, std::string out_path,
            const std::vector<std::string>& extra, std::ostream& out) {
  for (const auto& [key, value] : parse_pairs(extra)) {
    if (key == "seed") {
      try {
        seed = std::stoull(value);
      } catch (const std::logic_error&) {
        throw ArgumentError("bad seed '" + value + "'");
      }
    } else if (key == "out") {
      out_path = value;
    } else {
      throw ArgumentError("unknown gen setting '" + key + "'");
    }
  }
  const Graph g = generate_synthetic(parse_synthetic_spec(model + ":" + a + ":" + b), seed);
  if (out_path.empty()) {
    write_edge_list(g, out);
  } else {
    std::ofstream file = open_output(out_path);
    write_edge_list(g, file);
  }
  return kExitOk;
}

int cmd_bench(RunConfig config, const std::string& config_path,
              const std::vector<std::pair<std::string, std::string>>& flags,
              const std::vector<std::string>& extra, const std::string& io_log,
              std::ostream& out) {
  if (!config_path.empty()) load_run_config(config, config_path);
  for (const auto& [key, value] : flags) apply_setting(config, key, value, "--" + key);
  for (const auto& [key, value] : parse_pairs(extra)) apply_setting(config, key, value);
  config.keep_log = !io_log.empty();
  config.validate();

  const Graph g = load_run_graph(config);
  const auto store = make_store(config, g);
  BenchReport report = run_bench(config, g, *store);
  if (!config.baseline.empty()) {
    std::ifstream in(config.baseline);
    if (!in) throw DataError("cannot open baseline '" + config.baseline + "'");
    apply_baseline(report, read_report_json(in, config.baseline));
  }

  if (config.output.empty()) {
    write_report_csv(report, out);
  } else {
    std::ofstream csv = open_output(config.output + ".csv");
    write_report_csv(report, csv);
    std::ofstream json = open_output(config.output + ".json");
    write_report_json(report, config, json);
    out << "strategy=" << report.strategy
        << " disk_reads=" << report.totals.disk_reads
        << " sim_time=" << format_number(report.total_sim_time)
        << " cache_entries=" << report.total_cache_entries;
    if (report.reductions && report.reductions->sim_time) {
      out << " sim_time_reduction=" << format_percent(*report.reductions->sim_time)
          << "%";
    }
    out << '\n';
  }
  if (!io_log.empty()) {
    std::ofstream log = open_output(io_log);
    store->export_log_csv(log);
  }
  return kExitOk;
}

int cmd_sweep(const GraphSource& source, const std::string& thetas_arg,
              std::size_t cap, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
  const std::vector<std::int64_t> thetas = parse_thetas(thetas_arg);
  if (thetas.empty()) throw ArgumentError("empty theta list");
  const Graph g = source.load();
  const SweepResult sweep = sweep_threshold(g, thetas, cap);
  const StorageEstimate& best = sweep.rows[sweep.argmin];
  std::ostream* summary = &out;
  if (out_path.empty()) {
    write_sweep_csv(sweep, out);
    summary = &err;
  } else {
    std::ofstream file = open_output(out_path);
    write_sweep_csv(sweep, file);
  }
  *summary << "argmin theta=" << best.theta << " total=" << best.total << '\n';
  return kExitOk;
}

int cmd_costmodel(const CostParams& p, std::ostream& out) {
  p.validate();
  const double dm = t_disk_memory(p);
  const double dcm = t_disk_cache_memory(p);
  const double ratio = dcm / dm;
  out << "disk-memory " << format_number(dm) << '\n';
  out << "disk-cache-memory " << format_number(dcm) << '\n';
  out << "ratio " << format_number(ratio) << '\n';
  nlohmann::ordered_json j;
  j["schema"] = "gss-costmodel-v1";
  j["batch_size"] = p.batch_size;
  j["cache_size"] = p.cache_size;
  j["alpha_refresh"] = p.alpha_refresh;
  j["v_m"] = p.v_m;
  j["v_c"] = p.v_c;
  j["t_disk_memory"] = dm;
  j["t_disk_cache_memory"] = dcm;
  j["ratio"] = ratio;
  out << j.dump() << '\n';
  return kExitOk;
}

int cmd_split(const GraphSource& source, std::int64_t theta,
              const std::string& prefix, std::ostream& out) {
  if (theta < 0) throw ArgumentError("theta must be non-negative");
  const Graph g = source.load();
  const SplitResult split = split_by_degree(g, theta);
  out << "theta=" << theta << " dense_nodes=" << split.dense_nodes.size()
      << " sparse_nodes=" << split.sparse_nodes.size()
      << " dense_edges=" << split.dense_subgraph.edge_count()
      << " sparse_edges=" << split.sparse_subgraph.edge_count()
      << " cross_edges=" << split.cross_edges << '\n';
  if (prefix.empty()) return kExitOk;
  const auto dump = [&](const char* side, const Graph& sub, const IdMap& ids) {
    write_edge_list(sub, prefix + "." + side + ".edges");
    std::ofstream map = open_output(prefix + "." + side + ".ids");
    map << "# local original\n";
    for (std::size_t i = 0; i < ids.to_original.size(); ++i) {
      map << i << ' ' << ids.to_original[i] << '\n';
    }
  };
  dump("dense", split.dense_subgraph, split.dense_ids);
  dump("sparse", split.sparse_subgraph, split.sparse_ids);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Cache-aware graph neighbor sampling benchmark", "gss"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic edge list");
  std::string gen_model, gen_a, gen_b, gen_out;
  std::uint64_t gen_seed = 0;
  std::vector<std::string> gen_extra;
  gen->add_option("model", gen_model, "er or ba")->required();
  gen->add_option("a", gen_a, "node count")->required();
  gen->add_option("b", gen_b, "edge probability (er) or edges per node (ba)")
      ->required();
  gen->add_option("settings", gen_extra, "seed=S out=PATH");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("-o,--out", gen_out, "output file (stdout if absent)");

  // bench
  auto* bench = app.add_subcommand("bench", "Run a sampling strategy");
  std::string bench_config, bench_io_log;
  std::vector<std::string> bench_extra;
  std::map<std::string, std::string> bench_values;
  std::vector<std::pair<std::string, CLI::Option*>> bench_flags;
  bench->add_option("--config", bench_config, "key=value config file");
  bench->add_option("--io_log", bench_io_log, "write the I/O log as CSV");
  for (const std::string& key : run_config_keys()) {
    bench_flags.emplace_back(key, bench->add_option("--" + key, bench_values[key]));
  }
  bench->add_option("settings", bench_extra, "key=value overrides");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Storage estimate over thresholds");
  GraphSource sweep_source;
  sweep_source.add_to(sweep);
  std::string sweep_thetas, sweep_out;
  std::size_t sweep_cap = 15;
  sweep->add_option("--thetas", sweep_thetas, "comma list; lo:hi:step ranges allowed")
      ->required();
  sweep->add_option("--cap", sweep_cap, "per-node cap for dense nodes");
  sweep->add_option("-o,--out", sweep_out, "CSV file (stdout if absent)");

  // costmodel
  auto* cost = app.add_subcommand("costmodel", "Batch time under both memory models");
  CostParams cost_params;
  cost->add_option("S_B", cost_params.batch_size)->required();
  cost->add_option("S_C", cost_params.cache_size)->required();
  cost->add_option("alpha", cost_params.alpha_refresh)->required();
  cost->add_option("v_m", cost_params.v_m)->required();
  cost->add_option("v_c", cost_params.v_c)->required();

  // split
  auto* split = app.add_subcommand("split", "Dense/sparse split by degree");
  GraphSource split_source;
  split_source.add_to(split);
  std::int64_t split_theta = 0;
  std::string split_out;
  split->add_option("--theta", split_theta)->required();
  split->add_option("-o,--out", split_out, "prefix for the partition files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      return cmd_gen(gen_model, gen_a, gen_b, gen_seed, gen_out, gen_extra, out);
    }
    if (bench->parsed()) {
      std::vector<std::pair<std::string, std::string>> flags;
      for (const auto& [key, option] : bench_flags) {
        if (option->count() > 0) flags.emplace_back(key, bench_values[key]);
      }
      return cmd_bench(RunConfig{}, bench_config, flags, bench_extra,
                       bench_io_log, out);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sweep_source, sweep_thetas, sweep_cap, sweep_out, out, err);
    }
    if (cost->parsed()) return cmd_costmodel(cost_params, out);
    if (split->parsed()) return cmd_split(split_source, split_theta, split_out, out);
  } catch (const std::exception& e) {
    err << "gss: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitInternal;
}

}  // namespace gss
