// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "gss/cost_model.hpp"

#include <cstdio>
#include <numeric>
#include <ostream>

namespace gss {

void CostParams::validate() const {
  if (!(batch_size > 0.0)) throw ArgumentError("batch size must be > 0");
  if (!(cache_size >= 0.0)) throw ArgumentError("cache size must be >= 0");
  if (cache_size > batch_size) {
    throw ArgumentError("cache size must not exceed batch size");
  }
  require_unit_interval(alpha_refresh, "refresh rate");
  if (!(v_m > 0.0)) throw ArgumentError("v_m must be > 0");
  if (!(v_c > 0.0)) throw ArgumentError("v_c must be > 0");
}

double t_disk_memory(double batch_size, double v_m) {
  if (!(batch_size > 0.0)) throw ArgumentError("batch size must be > 0");
  if (!(v_m > 0.0)) throw ArgumentError("v_m must be > 0");
  return batch_size / v_m;
}

double t_disk_memory(const CostParams& p) {
  p.validate();
  return p.batch_size / p.v_m;
}

double t_disk_cache_memory(const CostParams& p) {
  p.validate();
  return (p.batch_size - p.cache_size) / p.v_m +
         (1.0 - p.alpha_refresh) * p.cache_size / p.v_c;
}

StorageEstimate storage_estimate(const Graph& g, std::int64_t theta,
                                 std::size_t dense_cap) {
  const DegreeVector deg = total_degree(g, DegreeMode::kTotal);
  StorageEstimate e;
  e.theta = theta;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const std::uint64_t d = deg.degrees[v];
    if (static_cast<std::int64_t>(d) > theta) {
      e.resampled_edges += std::min<std::uint64_t>(d, dense_cap);
      ++e.dense_nodes;
    } else {
      e.sparse_edges += g.out_degree(v);
    }
  }
  e.total = e.sparse_edges + e.resampled_edges;
  return e;
}

SweepResult sweep_threshold(const Graph& g, std::span<const std::int64_t> thetas,
                            std::size_t dense_cap) {
  if (thetas.empty()) throw ArgumentError("threshold sweep needs at least one theta");
  SweepResult r;
  for (std::int64_t theta : thetas) {
    r.rows.push_back(storage_estimate(g, theta, dense_cap));
    if (r.rows.back().total < r.rows[r.argmin].total) r.argmin = r.rows.size() - 1;
  }
  return r;
}

void write_sweep_csv(const SweepResult& sweep, std::ostream& out) {
  out << "theta,sparse_edges,resampled_edges,total\n";
  for (const StorageEstimate& e : sweep.rows) {
    out << e.theta << ',' << e.sparse_edges << ',' << e.resampled_edges << ','
        << e.total << '\n';
  }
}

std::size_t default_dense_cap(std::span<const std::size_t> fanouts) {
  return std::accumulate(fanouts.begin(), fanouts.end(), std::size_t{0});
}

double compression_ratio(std::uint64_t original, std::uint64_t optimized) {
  if (original == 0) throw ArgumentError("original size must be > 0");
  return 100.0 * (static_cast<double>(original) - static_cast<double>(optimized)) /
         static_cast<double>(original);
}

std::string format_percent(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

}  // namespace gss
