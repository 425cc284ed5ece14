// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "gss/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace gss {
namespace {

// Counting-sort edges into CSR form keyed on `key`, rows sorted by `value`.
template <typename Key, typename Value>
void fill_csr(std::span<const Edge> edges, std::size_t node_count, Key key,
              Value value, std::vector<EdgeIndex>& offsets,
              std::vector<NodeId>& targets) {
  offsets.assign(node_count + 1, 0);
  for (const Edge& e : edges) ++offsets[key(e) + 1];
  for (std::size_t v = 0; v < node_count; ++v) offsets[v + 1] += offsets[v];
  targets.resize(edges.size());
  std::vector<EdgeIndex> cursor(offsets.begin(), offsets.end() - 1);
  for (const Edge& e : edges) targets[cursor[key(e)]++] = value(e);
  for (std::size_t v = 0; v < node_count; ++v) {
    std::sort(targets.begin() + static_cast<std::ptrdiff_t>(offsets[v]),
              targets.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]));
  }
}

}  // namespace

std::span<const NodeId> Graph::in_neighbors(NodeId v) const {
  if (has_in_adjacency()) {
    return {in_targets_.data() + in_offsets_[v],
            in_targets_.data() + in_offsets_[v + 1]};
  }
  if (symmetrized_) return out_neighbors(v);
  throw ConfigError("graph has no in-adjacency and is not symmetrized");
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u >= node_count()) return false;
  const auto row = out_neighbors(u);
  return std::binary_search(row.begin(), row.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : out_neighbors(u)) out.push_back({u, v});
  }
  return out;
}

Graph build_graph(std::span<const Edge> edges, std::size_t node_count,
                  BuildOptions options) {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.src >= node_count || e.dst >= node_count) {
      throw ArgumentError("edge #" + std::to_string(i) + " (" +
                          std::to_string(e.src) + "," + std::to_string(e.dst) +
                          ") out of range for node_count=" +
                          std::to_string(node_count));
    }
  }
  std::vector<Edge> all;
  std::span<const Edge> input = edges;
  if (options.symmetrize) {
    all.reserve(edges.size() * 2);
    all.assign(edges.begin(), edges.end());
    for (const Edge& e : edges) all.push_back({e.dst, e.src});
    input = all;
  }

  Graph g;
  g.symmetrized_ = options.symmetrize;
  fill_csr(
      input, node_count, [](const Edge& e) { return e.src; },
      [](const Edge& e) { return e.dst; }, g.out_offsets_, g.out_targets_);
  if (options.build_in_adjacency) {
    fill_csr(
        input, node_count, [](const Edge& e) { return e.dst; },
        [](const Edge& e) { return e.src; }, g.in_offsets_, g.in_targets_);
  }
  return g;
}

DegreeVector total_degree(const Graph& g, DegreeMode mode) {
  const std::size_t n = g.node_count();
  DegreeVector out;
  out.mode = mode;
  out.degrees.assign(n, 0);
  if (mode != DegreeMode::kOut && !g.has_in_adjacency() && !g.symmetrized()) {
    throw ConfigError(
        "in/total degree requires an in-adjacency mirror or a symmetrized "
        "graph");
  }
  for (NodeId v = 0; v < n; ++v) {
    const std::uint64_t out_deg = g.out_degree(v);
    const std::uint64_t in_deg = mode == DegreeMode::kOut
                                     ? 0
                                     : static_cast<std::uint64_t>(
                                           g.in_neighbors(v).size());
    switch (mode) {
      case DegreeMode::kOut:
        out.degrees[v] = out_deg;
        break;
      case DegreeMode::kIn:
        out.degrees[v] = in_deg;
        break;
      case DegreeMode::kTotal:
        out.degrees[v] = out_deg + in_deg;
        break;
    }
  }
  return out;
}

std::pair<Graph, IdMap> induced_subgraph(const Graph& g,
                                         std::span<const NodeId> nodes) {
  IdMap ids;
  ids.to_original.assign(nodes.begin(), nodes.end());
  ids.to_local.assign(g.node_count(), kInvalidNode);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    ids.to_local[nodes[i]] = static_cast<NodeId>(i);
  }
  std::vector<Edge> kept;
  for (NodeId local = 0; local < nodes.size(); ++local) {
    for (NodeId v : g.out_neighbors(nodes[local])) {
      if (ids.to_local[v] != kInvalidNode) kept.push_back({local, ids.to_local[v]});
    }
  }
  Graph sub = build_graph(kept, nodes.size(),
                          {.symmetrize = false,
                           .build_in_adjacency = g.has_in_adjacency()});
  // An induced subgraph of a symmetric graph is symmetric.
  sub.symmetrized_ = g.symmetrized();
  return {std::move(sub), std::move(ids)};
}

SplitResult split_by_degree(const Graph& g, std::int64_t theta) {
  const DegreeVector deg = total_degree(g, DegreeMode::kTotal);
  SplitResult r;
  r.theta = theta;
  std::vector<bool> dense(g.node_count(), false);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (static_cast<std::int64_t>(deg.degrees[v]) > theta) {
      dense[v] = true;
      r.dense_nodes.push_back(v);
    } else {
      r.sparse_nodes.push_back(v);
    }
  }
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.out_neighbors(u)) {
      if (dense[u] != dense[v]) ++r.cross_edges;
    }
  }
  std::tie(r.dense_subgraph, r.dense_ids) = induced_subgraph(g, r.dense_nodes);
  std::tie(r.sparse_subgraph, r.sparse_ids) =
      induced_subgraph(g, r.sparse_nodes);
  return r;
}

std::vector<NodeId> k_hop(const Graph& g, NodeId v, std::size_t k) {
  if (v >= g.node_count()) {
    throw ArgumentError("k_hop: node " + std::to_string(v) +
                        " out of range for node_count=" +
                        std::to_string(g.node_count()));
  }
  std::vector<std::size_t> dist(g.node_count(), SIZE_MAX);
  std::deque<NodeId> queue{v};
  dist[v] = 0;
  std::vector<NodeId> reached{v};
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    if (dist[u] == k) continue;
    for (NodeId w : g.out_neighbors(u)) {
      if (dist[w] != SIZE_MAX) continue;
      dist[w] = dist[u] + 1;
      reached.push_back(w);
      queue.push_back(w);
    }
  }
  std::sort(reached.begin(), reached.end());
  return reached;
}

namespace {

Graph erdos_renyi(const ErdosRenyi& model, std::uint64_t seed) {
  if (model.n < 1) throw ArgumentError("erdos-renyi requires n >= 1");
  if (!(model.p >= 0.0 && model.p <= 1.0)) {
    throw ArgumentError("erdos-renyi requires 0 <= p <= 1");
  }
  Rng rng(seed);
  std::vector<Edge> edges;
  const auto n = static_cast<std::int64_t>(model.n);
  if (model.p >= 1.0) {
    for (std::int64_t v = 1; v < n; ++v) {
      for (std::int64_t w = 0; w < v; ++w) {
        edges.push_back({static_cast<NodeId>(w), static_cast<NodeId>(v)});
      }
    }
  } else if (model.p > 0.0) {
    // Geometric skipping over the lower triangle (Batagelj & Brandes).
    const double log_q = std::log(1.0 - model.p);
    std::int64_t v = 1;
    std::int64_t w = -1;
    while (v < n) {
      const double r = uniform_unit(rng);
      w += 1 + static_cast<std::int64_t>(std::floor(std::log(1.0 - r) / log_q));
      while (w >= v && v < n) {
        w -= v;
        ++v;
      }
      if (v < n) {
        edges.push_back({static_cast<NodeId>(w), static_cast<NodeId>(v)});
      }
    }
  }
  return build_graph(edges, model.n,
                     {.symmetrize = true, .build_in_adjacency = true});
}

Graph preferential_attachment(const PreferentialAttachment& model,
                              std::uint64_t seed) {
  if (model.n < 1) throw ArgumentError("preferential-attachment requires n >= 1");
  if (model.m < 1) throw ArgumentError("preferential-attachment requires m >= 1");
  Rng rng(seed);
  std::vector<Edge> edges;
  // Each endpoint appears once per incident edge: degree-proportional draws.
  std::vector<NodeId> endpoints;
  const std::size_t core = std::min(model.n, model.m + 1);
  for (NodeId v = 1; v < core; ++v) {
    for (NodeId w = 0; w < v; ++w) {
      edges.push_back({w, v});
      endpoints.push_back(w);
      endpoints.push_back(v);
    }
  }
  std::vector<NodeId> chosen;
  for (std::size_t v = core; v < model.n; ++v) {
    chosen.clear();
    while (chosen.size() < model.m) {
      const NodeId t = endpoints[uniform_below(rng, endpoints.size())];
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) {
        chosen.push_back(t);
      }
    }
    for (NodeId t : chosen) {
      edges.push_back({t, static_cast<NodeId>(v)});
      endpoints.push_back(t);
      endpoints.push_back(static_cast<NodeId>(v));
    }
  }
  return build_graph(edges, model.n,
                     {.symmetrize = true, .build_in_adjacency = true});
}

}  // namespace

Graph generate_synthetic(const SyntheticModel& model, std::uint64_t seed) {
  return std::visit(
      [seed](const auto& m) -> Graph {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ErdosRenyi>) {
          return erdos_renyi(m, seed);
        } else {
          return preferential_attachment(m, seed);
        }
      },
      model);
}

SyntheticModel parse_synthetic_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  auto bad = [&spec]() {
    return ArgumentError("synthetic spec must be er:N:P or ba:N:M, got '" +
                         spec + "'");
  };
  if (parts.size() != 3) throw bad();
  try {
    std::size_t used = 0;
    const unsigned long long n = std::stoull(parts[1], &used);
    if (used != parts[1].size()) throw bad();
    if (parts[0] == "er") {
      const double p = std::stod(parts[2], &used);
      if (used != parts[2].size()) throw bad();
      return ErdosRenyi{n, p};
    }
    if (parts[0] == "ba") {
      const unsigned long long m = std::stoull(parts[2], &used);
      if (used != parts[2].size()) throw bad();
      return PreferentialAttachment{n, m};
    }
  } catch (const std::logic_error&) {
    throw bad();
  }
  throw bad();
}

}  // namespace gss
