// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gss/cost_model.hpp"
#include "gss/graph.hpp"
#include "gss/sampler.hpp"
#include "gss/storage.hpp"

namespace gss {

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitData = 3,
  kExitInternal = 4,
  kExitConfig = 5,
};

/// ArgumentError -> usage, DataError/LookupError -> data, ConfigError ->
/// config, anything else -> internal.
int exit_code_for(const std::exception& error);

struct RunConfig {
  StrategyConfig strategy;
  std::optional<std::int64_t> threshold;  // dual mode when set
  std::string graph;                      // edge-list path
  std::string synthetic;                  // "er:N:P" or "ba:N:M"
  std::uint64_t graph_seed = 0;
  std::uint32_t batches = 100;
  std::size_t seeds_per_batch = 64;
  std::string output;    // writes <output>.csv and <output>.json
  std::string baseline;  // JSON report to compare against
  std::size_t consumers = 1;
  std::size_t dim = 128;
  std::optional<double> sim_scale;
  bool keep_log = true;

  // Keys set explicitly (file or flag); strategy parameters among them
  // must apply to the chosen strategy.
  std::set<std::string> explicit_keys;

  /// ConfigError on inconsistent settings.
  void validate() const;
};

/// Recognized keys, in documentation order.
const std::vector<std::string>& run_config_keys();

/// Sets one key. Unknown keys and unparsable values throw ConfigError;
/// an unknown strategy name throws ArgumentError.
void apply_setting(RunConfig& config, const std::string& key,
                   const std::string& value, const std::string& origin = "");

/// key=value lines; '#' starts a comment.
RunConfig parse_run_config(std::istream& in, const std::string& origin = "<config>");
void load_run_config(RunConfig& config, const std::string& path);

/// Loads the edge list or generates the synthetic graph.
Graph load_run_graph(const RunConfig& config);

/// Distinct uniform seed nodes for batch t.
std::vector<NodeId> batch_seeds(std::size_t node_count, std::size_t count,
                                std::uint64_t seed, std::uint32_t batch);

std::unique_ptr<TieredStore> make_store(const RunConfig& config,
                                        const Graph& g);

struct BenchRow {
  std::uint32_t batch = 0;
  IoCounters counters;
  double sim_time = 0.0;
  std::uint64_t cache_entries = 0;  // entries moved into memory this batch
};

struct Reductions {
  std::optional<double> sim_time;
  std::optional<double> disk_reads;
  std::optional<double> cache_entries;
};

struct BenchReport {
  std::string strategy;
  std::vector<std::size_t> fanouts;
  std::vector<BenchRow> rows;

  IoCounters totals;
  double total_sim_time = 0.0;  // sum of rows, in row order
  std::uint64_t total_cache_entries = 0;
  std::size_t live_cache_entries = 0;
  std::size_t refresh_events = 0;
  std::size_t dim = 128;

  std::string baseline_strategy;
  std::optional<Reductions> reductions;

  double mean_sim_time() const;
  double mean_cache_entries() const;
  /// mean cache_entries * (1 + dim) bytes.
  double memory_proxy_bytes() const;
};

/// Runs the configured batches against `store`.
BenchReport run_bench(const RunConfig& config, const Graph& g, TieredStore& store);

/// (base - current) / base * 100; empty when base is 0.
std::optional<double> reduction_pct(double base, double current);
void apply_baseline(BenchReport& report, const BenchReport& baseline);

void write_report_csv(const BenchReport& report, std::ostream& out);
void write_report_json(const BenchReport& report, const RunConfig& config,
                       std::ostream& out);
/// Reads the summary part of a JSON report (strategy and totals).
BenchReport read_report_json(std::istream& in, const std::string& origin = "<json>");

/// "5,5,5".
std::string join_fanouts(const std::vector<std::size_t>& fanouts);

/// Entry point shared by the gss binary and in-process tests.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace gss
