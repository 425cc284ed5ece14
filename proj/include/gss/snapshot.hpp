// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "gss/cache.hpp"
#include "gss/common.hpp"
#include "gss/graph.hpp"

namespace gss {

enum class Provenance : std::uint8_t { kStatic = 0, kDynamic = 1 };

struct Neighborhood {
  Provenance origin = Provenance::kStatic;  // source the node was taken from
  std::vector<NodeId> neighbors;
  std::vector<Provenance> provenance;  // parallel to neighbors
  friend bool operator==(const Neighborhood&, const Neighborhood&) = default;
};

/// Per-node sampled neighborhoods, ordered by node id.
struct Snapshot {
  std::map<NodeId, Neighborhood> nodes;

  std::size_t size() const { return nodes.size(); }
  bool contains(NodeId v) const { return nodes.contains(v); }
  /// Inserts or replaces `v`, tagging every entry with `origin`.
  void put(NodeId v, std::vector<NodeId> neighbors, Provenance origin);
  /// Number of nodes whose origin is `p`.
  std::size_t count_nodes(Provenance p) const;
  /// Number of entries tagged `p`.
  std::size_t count_entries(Provenance p) const;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

/// Snapshot holding a uniform sample of up to `per_node` neighbors for
/// every node in `nodes`.
Snapshot sample_snapshot(const Graph& g, std::span<const NodeId> nodes,
                         std::size_t per_node, Provenance origin,
                         std::uint64_t seed);

/// Output covers n nodes: round(alpha * n) drawn from the static keys and
/// the rest from the dynamic keys, disjoint. Each node keeps its source
/// neighborhood. ArgumentError if the sources cannot supply the split.
Snapshot combine_snapshot(const Snapshot& stat, const Snapshot& dyn,
                          double alpha, std::size_t n, std::uint64_t seed);

struct MixWeights {
  double alpha = 0.5;
  double beta = 0.5;

  /// (alpha, 1 - alpha); warns on std::clog when alpha + beta != 1.
  MixWeights normalized() const;
};

/// One step of current = alpha * current + beta * dynamic, with the size of
/// `current` preserved.
Snapshot advance_snapshot(const Snapshot& current, const Snapshot& dyn,
                          const MixWeights& weights, std::uint64_t seed);

struct HierarchyParams {
  std::size_t levels = 1;
  std::vector<double> alpha;  // alpha[0] mixes the dynamic snapshot into level 1
  std::vector<double> beta;   // beta[i] mixes level i-1 into level i, i >= 1
};

/// Bottom-up pass. Level 1 takes round(alpha[0] * |level|) nodes from
/// `dyn`; level i > 1 takes round(beta[i] * |level|) nodes copied from the
/// updated level i-1. The remaining nodes are kept from the previous state.
/// Level sizes are preserved when the sources allow it.
std::vector<Snapshot> hierarchical_update(std::vector<Snapshot> levels,
                                          const Snapshot& dyn,
                                          const HierarchyParams& params,
                                          std::uint64_t seed);

/// Node importance; nodes without an explicit weight count as 1.
struct ImportanceWeights {
  std::unordered_map<NodeId, double> w;

  double weight(NodeId v) const;
  static ImportanceWeights degree_centrality(const Graph& g);
};

struct WeightedSnapshotParams {
  double alpha = 0.5;              // static share of each neighborhood
  std::size_t hops = 1;            // expansion depth
  std::size_t node_budget = 1;     // nodes selected by weight
  std::size_t neighbor_budget = 5; // entries per node
};

/// Picks up to node_budget nodes with probability proportional to weight
/// (without replacement), then for each stores round(alpha * budget)
/// static entries and the rest drawn fresh from the graph. Static entries
/// come from cache layer 0 when a cache is given, else from a fixed-seed
/// sample. hops > 1 also samples the neighborhoods of sampled neighbors.
/// ArgumentError if every weight is zero.
Snapshot weighted_snapshot(const Graph& g, const ImportanceWeights& weights,
                           const WeightedSnapshotParams& params,
                           std::uint64_t seed,
                           const LayeredCache* cache = nullptr);

/// Weighted selection alone: up to k distinct nodes of [0, n).
std::vector<NodeId> weighted_select(std::size_t n,
                                    const ImportanceWeights& weights,
                                    std::size_t k, Rng& rng);

double sampling_cost(const Snapshot& snap);

using QualityScorer = std::function<double(const Snapshot&)>;

struct CostQualityParams {
  double lambda = 0.0;
  QualityScorer scorer;
};

/// Q = sampling cost, so the objective is (1 - lambda) * cost.
QualityScorer size_scorer();
/// Q = sum of base-graph degrees of the snapshot's nodes.
QualityScorer degree_sum_scorer(const Graph& g);

/// cost - lambda * Q.
double objective(const Snapshot& snap, const CostQualityParams& params);

struct BestOfK {
  Snapshot snapshot;
  double objective = 0.0;
  std::size_t index = 0;
};

/// Builds k candidates (generator called with derived seeds) and keeps the
/// one with the lowest objective; ties go to the earliest.
BestOfK best_of_k(std::size_t k,
                  const std::function<Snapshot(std::uint64_t)>& generator,
                  const CostQualityParams& params, std::uint64_t seed);

// "GSSC1" dump with kind 1: per node its origin byte and entries, each
// entry followed by its provenance byte.
void write_snapshot_dump(const Snapshot& snap, std::ostream& out);
Snapshot read_snapshot_dump(std::istream& in);

}  // namespace gss
