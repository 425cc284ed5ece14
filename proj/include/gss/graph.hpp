// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gss/common.hpp"

namespace gss {

struct IdMap;

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct BuildOptions {
  bool symmetrize = false;
  bool build_in_adjacency = false;
};

/// Immutable CSR adjacency. Rows are sorted by target id; duplicate edges
/// are kept as given. The in-adjacency mirror is optional.
class Graph {
 public:
  Graph() : out_offsets_{0} {}

  std::size_t node_count() const { return out_offsets_.size() - 1; }
  std::size_t edge_count() const { return out_targets_.size(); }
  bool symmetrized() const { return symmetrized_; }
  bool has_in_adjacency() const { return !in_offsets_.empty(); }

  std::span<const NodeId> out_neighbors(NodeId v) const {
    return {out_targets_.data() + out_offsets_[v],
            out_targets_.data() + out_offsets_[v + 1]};
  }
  std::span<const NodeId> in_neighbors(NodeId v) const;

  std::size_t out_degree(NodeId v) const {
    return out_offsets_[v + 1] - out_offsets_[v];
  }

  bool has_edge(NodeId u, NodeId v) const;

  const std::vector<EdgeIndex>& out_offsets() const { return out_offsets_; }
  const std::vector<NodeId>& out_targets() const { return out_targets_; }
  const std::vector<EdgeIndex>& in_offsets() const { return in_offsets_; }
  const std::vector<NodeId>& in_targets() const { return in_targets_; }

  /// Edges in CSR order (source-major, target-minor).
  std::vector<Edge> edges() const;

 private:
  friend Graph build_graph(std::span<const Edge>, std::size_t, BuildOptions);
  friend std::pair<Graph, IdMap> induced_subgraph(
      const Graph&, std::span<const NodeId>);

  std::vector<EdgeIndex> out_offsets_;
  std::vector<NodeId> out_targets_;
  std::vector<EdgeIndex> in_offsets_;
  std::vector<NodeId> in_targets_;
  bool symmetrized_ = false;
};

/// Throws ArgumentError naming the first edge with an id >= node_count.
Graph build_graph(std::span<const Edge> edges, std::size_t node_count,
                  BuildOptions options = {});

enum class DegreeMode { kOut, kIn, kTotal };

struct DegreeVector {
  std::vector<std::uint64_t> degrees;
  DegreeMode mode = DegreeMode::kTotal;
};

/// kIn and kTotal need an in-adjacency mirror or a symmetrized graph;
/// otherwise ConfigError.
DegreeVector total_degree(const Graph& g, DegreeMode mode = DegreeMode::kTotal);

// Local id <-> original id mapping for an induced subgraph.
struct IdMap {
  std::vector<NodeId> to_original;  // local -> original
  std::vector<NodeId> to_local;     // original -> local, kInvalidNode if absent

  bool contains(NodeId original) const {
    return original < to_local.size() && to_local[original] != kInvalidNode;
  }
};

struct SplitResult {
  std::int64_t theta = 0;
  std::vector<NodeId> dense_nodes;   // ascending original ids
  std::vector<NodeId> sparse_nodes;  // ascending original ids
  Graph dense_subgraph;
  Graph sparse_subgraph;
  IdMap dense_ids;
  IdMap sparse_ids;
  // Edges whose endpoints fall in different partitions; dropped from both.
  std::size_t cross_edges = 0;
};

/// Dense = {v : total_degree(v) > theta}; ties go to the sparse side.
SplitResult split_by_degree(const Graph& g, std::int64_t theta);

/// Node-induced subgraph over `nodes` (ascending), ids remapped to 0..k-1.
std::pair<Graph, IdMap> induced_subgraph(const Graph& g,
                                         std::span<const NodeId> nodes);

/// N_k(v): nodes within k hops of v over out-edges, including v. Ascending.
std::vector<NodeId> k_hop(const Graph& g, NodeId v, std::size_t k);

struct ErdosRenyi {
  std::size_t n = 0;
  double p = 0.0;
};

struct PreferentialAttachment {
  std::size_t n = 0;
  std::size_t m = 1;
};

using SyntheticModel = std::variant<ErdosRenyi, PreferentialAttachment>;

/// Deterministic for a fixed seed; the result is symmetrized with an
/// in-adjacency mirror and no self loops or duplicate edges.
Graph generate_synthetic(const SyntheticModel& model, std::uint64_t seed);

/// Parses "er:N:P" or "ba:N:M".
SyntheticModel parse_synthetic_spec(const std::string& spec);

// Edge-list files: one "u v" pair per line, '#' comments, optional
// "# nodes=N" header overriding node_count = 1 + max id.
struct EdgeList {
  std::size_t node_count = 0;
  std::vector<Edge> edges;
};

EdgeList read_edge_list(const std::string& path);
EdgeList parse_edge_list(std::istream& in, const std::string& origin = "<stream>");

/// Writes the "# nodes=N" header followed by the edges. For a symmetrized
/// graph each undirected edge is written once as (min, max).
void write_edge_list(const Graph& g, std::ostream& out);
void write_edge_list(const Graph& g, const std::string& path);

/// Loads an edge-list file; symmetrize=true matches the generator output.
Graph load_graph(const std::string& path, bool symmetrize = true);

}  // namespace gss
