// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gss/graph.hpp"

namespace gss {

struct CostParams {
  double batch_size = 0.0;     // S_B
  double cache_size = 0.0;     // S_C, at most S_B
  double alpha_refresh = 0.0;  // cache refresh rate in [0,1]
  double v_m = 1.0;            // memory processing speed
  double v_c = 1.0;            // cache processing speed

  /// ArgumentError on any violated bound.
  void validate() const;
};

/// S_B / v_m.
double t_disk_memory(double batch_size, double v_m);
double t_disk_memory(const CostParams& p);

/// (S_B - S_C) / v_m + (1 - alpha) * S_C / v_c.
double t_disk_cache_memory(const CostParams& p);

struct StorageEstimate {
  std::int64_t theta = 0;
  std::uint64_t sparse_edges = 0;     // out-degree sum over sparse nodes
  std::uint64_t resampled_edges = 0;  // sum of min(total degree, cap) over dense nodes
  std::uint64_t total = 0;
  std::size_t dense_nodes = 0;
};

/// Nodes with total degree > theta are dense.
StorageEstimate storage_estimate(const Graph& g, std::int64_t theta,
                                 std::size_t dense_cap);

struct SweepResult {
  std::vector<StorageEstimate> rows;  // one per theta, input order
  std::size_t argmin = 0;             // first row with the smallest total
};

/// ArgumentError on an empty theta list.
SweepResult sweep_threshold(const Graph& g, std::span<const std::int64_t> thetas,
                            std::size_t dense_cap);

/// CSV "theta,sparse_edges,resampled_edges,total".
void write_sweep_csv(const SweepResult& sweep, std::ostream& out);

/// Sum of fanouts: the cap a dense node needs for one sampling pass.
std::size_t default_dense_cap(std::span<const std::size_t> fanouts);

/// 100 * (original - optimized) / original. ArgumentError for original 0.
double compression_ratio(std::uint64_t original, std::uint64_t optimized);

/// Two-decimal rendering, e.g. "89.72".
std::string format_percent(double value);

}  // namespace gss
