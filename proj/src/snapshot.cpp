// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "gss/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iostream>

#include "binary_io.hpp"

namespace gss {
namespace {

constexpr std::uint64_t kStaticSampleSeed = 0x5747415449430000ULL;

std::vector<NodeId> keys_of(const Snapshot& s) {
  std::vector<NodeId> out;
  out.reserve(s.size());
  for (const auto& [v, _] : s.nodes) out.push_back(v);
  return out;
}

// Keeps round(w * |old|) nodes drawn from `source` and fills the rest with
// nodes of `old`; either side tops up the other when it runs short.
Snapshot mix_into(const Snapshot& old, const Snapshot& source, double w,
                  Rng& rng) {
  const std::size_t n = old.size();
  const std::size_t want_src = round_fraction(w, n);
  Snapshot out;
  std::vector<NodeId> src_keys = keys_of(source);
  std::size_t src_used = partial_shuffle(src_keys, want_src, rng);
  for (std::size_t i = 0; i < src_used; ++i) {
    out.nodes[src_keys[i]] = source.nodes.at(src_keys[i]);
  }
  std::vector<NodeId> old_keys;
  for (const auto& [v, _] : old.nodes) {
    if (!out.contains(v)) old_keys.push_back(v);
  }
  const std::size_t take_old = partial_shuffle(old_keys, n - out.size(), rng);
  for (std::size_t i = 0; i < take_old; ++i) {
    out.nodes[old_keys[i]] = old.nodes.at(old_keys[i]);
  }
  for (std::size_t i = src_used; i < src_keys.size() && out.size() < n; ++i) {
    if (!out.contains(src_keys[i])) {
      out.nodes[src_keys[i]] = source.nodes.at(src_keys[i]);
    }
  }
  return out;
}

}  // namespace

void Snapshot::put(NodeId v, std::vector<NodeId> neighbors, Provenance origin) {
  Neighborhood& n = nodes[v];
  n.origin = origin;
  n.provenance.assign(neighbors.size(), origin);
  n.neighbors = std::move(neighbors);
}

std::size_t Snapshot::count_nodes(Provenance p) const {
  return static_cast<std::size_t>(std::count_if(
      nodes.begin(), nodes.end(),
      [p](const auto& kv) { return kv.second.origin == p; }));
}

std::size_t Snapshot::count_entries(Provenance p) const {
  std::size_t total = 0;
  for (const auto& [_, n] : nodes) {
    total += static_cast<std::size_t>(
        std::count(n.provenance.begin(), n.provenance.end(), p));
  }
  return total;
}

Snapshot sample_snapshot(const Graph& g, std::span<const NodeId> nodes,
                         std::size_t per_node, Provenance origin,
                         std::uint64_t seed) {
  Rng rng(seed);
  Snapshot s;
  for (NodeId v : nodes) {
    if (v >= g.node_count()) {
      throw ArgumentError("node " + std::to_string(v) + " not in graph");
    }
    s.put(v, sample_neighbors(g, v, per_node, rng), origin);
  }
  return s;
}

Snapshot combine_snapshot(const Snapshot& stat, const Snapshot& dyn,
                          double alpha, std::size_t n, std::uint64_t seed) {
  require_unit_interval(alpha, "alpha");
  const std::size_t n_static = round_fraction(alpha, n);
  const std::size_t n_dynamic = n - n_static;

  std::vector<NodeId> stat_keys = keys_of(stat);
  std::size_t both = 0;
  for (NodeId v : stat_keys) both += dyn.contains(v) ? 1 : 0;
  const std::size_t union_size = stat.size() + dyn.size() - both;
  if (n_static > stat.size() || n_dynamic > dyn.size() || n > union_size) {
    throw ArgumentError(
        "cannot combine " + std::to_string(n_static) + " static + " +
        std::to_string(n_dynamic) + " dynamic nodes from sources of " +
        std::to_string(stat.size()) + " / " + std::to_string(dyn.size()) +
        " keys (" + std::to_string(union_size) + " distinct)");
  }

  Rng rng(seed);
  // Dynamic keys first, taking shared keys only while enough static keys
  // remain for the static share.
  std::vector<NodeId> dyn_keys = keys_of(dyn);
  partial_shuffle(dyn_keys, dyn_keys.size(), rng);
  const std::size_t shared_limit = stat.size() - n_static;
  std::size_t shared_taken = 0;
  Snapshot out;
  for (NodeId v : dyn_keys) {
    if (out.size() == n_dynamic) break;
    if (stat.contains(v)) {
      if (shared_taken == shared_limit) continue;
      ++shared_taken;
    }
    out.nodes[v] = dyn.nodes.at(v);
    out.nodes[v].origin = Provenance::kDynamic;
  }
  std::erase_if(stat_keys, [&out](NodeId v) { return out.contains(v); });
  const std::size_t take = partial_shuffle(stat_keys, n_static, rng);
  for (std::size_t i = 0; i < take; ++i) {
    out.nodes[stat_keys[i]] = stat.nodes.at(stat_keys[i]);
    out.nodes[stat_keys[i]].origin = Provenance::kStatic;
  }
  return out;
}

MixWeights MixWeights::normalized() const {
  if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0)) {
    throw ArgumentError("mix weights must lie in [0,1]");
  }
  if (std::abs(alpha + beta - 1.0) > 1e-12) {
    std::clog << "gss: mix weights alpha=" << alpha << " beta=" << beta
              << " do not sum to 1; using beta=" << 1.0 - alpha << '\n';
  }
  return {alpha, 1.0 - alpha};
}

Snapshot advance_snapshot(const Snapshot& current, const Snapshot& dyn,
                          const MixWeights& weights, std::uint64_t seed) {
  const MixWeights w = weights.normalized();
  Rng rng(seed);
  return mix_into(current, dyn, w.beta, rng);
}

std::vector<Snapshot> hierarchical_update(std::vector<Snapshot> levels,
                                          const Snapshot& dyn,
                                          const HierarchyParams& params,
                                          std::uint64_t seed) {
  if (params.levels < 1) throw ArgumentError("hierarchy needs at least one level");
  if (levels.size() != params.levels || params.alpha.size() != params.levels ||
      params.beta.size() != params.levels) {
    throw ArgumentError("hierarchy: levels, alpha and beta must all have " +
                        std::to_string(params.levels) + " entries");
  }
  for (std::size_t i = 0; i < params.levels; ++i) {
    require_unit_interval(params.alpha[i], "alpha");
    require_unit_interval(params.beta[i], "beta");
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    Rng rng(derive_seed(seed, i));
    const Snapshot& source = i == 0 ? dyn : levels[i - 1];
    const double w = i == 0 ? params.alpha[0] : params.beta[i];
    levels[i] = mix_into(levels[i], source, w, rng);
  }
  return levels;
}

double ImportanceWeights::weight(NodeId v) const {
  const auto it = w.find(v);
  return it == w.end() ? 1.0 : it->second;
}

ImportanceWeights ImportanceWeights::degree_centrality(const Graph& g) {
  ImportanceWeights out;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out.w[v] = static_cast<double>(g.out_degree(v));
  }
  return out;
}

std::vector<NodeId> weighted_select(std::size_t n,
                                    const ImportanceWeights& weights,
                                    std::size_t k, Rng& rng) {
  // Exponential-key selection: key = log(u) / w, largest keys win. Equal in
  // law to successive draws proportional to the remaining weights.
  std::vector<std::pair<double, NodeId>> keyed;
  bool any_positive = false;
  for (NodeId v = 0; v < n; ++v) {
    const double w = weights.weight(v);
    if (!(w >= 0.0) || std::isinf(w)) {
      throw ArgumentError("weight of node " + std::to_string(v) +
                          " must be finite and non-negative");
    }
    if (w == 0.0) continue;
    any_positive = true;
    const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    keyed.emplace_back(std::log(u) / w, v);
  }
  if (!any_positive) throw ArgumentError("all importance weights are zero");
  const std::size_t take = std::min(k, keyed.size());
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(take),
                    keyed.end(), [](const auto& a, const auto& b) {
                      return a.first != b.first ? a.first > b.first
                                                : a.second < b.second;
                    });
  std::vector<NodeId> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(keyed[i].second);
  return out;
}

Snapshot weighted_snapshot(const Graph& g, const ImportanceWeights& weights,
                           const WeightedSnapshotParams& params,
                           std::uint64_t seed, const LayeredCache* cache) {
  require_unit_interval(params.alpha, "alpha");
  if (params.hops < 1) throw ArgumentError("hops must be >= 1");
  if (cache != nullptr && cache->node_count() != g.node_count()) {
    throw ConfigError("attached cache was built for another graph");
  }
  Rng rng(seed);
  const std::vector<NodeId> chosen =
      weighted_select(g.node_count(), weights, params.node_budget, rng);

  const std::size_t budget = params.neighbor_budget;
  const std::size_t n_static = round_fraction(params.alpha, budget);
  Snapshot out;
  auto build = [&](NodeId v) {
    std::vector<NodeId> stat;
    if (cache != nullptr) {
      const auto e = cache->entries(0, v);
      stat.assign(e.begin(), e.end());
    } else {
      Rng fixed(derive_seed(kStaticSampleSeed, v));
      stat = sample_neighbors(g, v, budget, fixed);
    }
    stat.resize(std::min(stat.size(), n_static));
    std::vector<NodeId> pool = distinct_neighbors(g, v);
    std::erase_if(pool, [&stat](NodeId u) {
      return std::find(stat.begin(), stat.end(), u) != stat.end();
    });
    const std::size_t n_dyn = partial_shuffle(pool, budget - stat.size(), rng);
    Neighborhood& nb = out.nodes[v];
    nb.origin = n_dyn > 0 || stat.empty() ? Provenance::kDynamic : Provenance::kStatic;
    nb.neighbors = stat;
    nb.provenance.assign(stat.size(), Provenance::kStatic);
    nb.neighbors.insert(nb.neighbors.end(), pool.begin(),
                        pool.begin() + static_cast<std::ptrdiff_t>(n_dyn));
    nb.provenance.resize(nb.neighbors.size(), Provenance::kDynamic);
  };

  std::deque<std::pair<NodeId, std::size_t>> queue;
  for (NodeId v : chosen) queue.emplace_back(v, 1);
  while (!queue.empty()) {
    const auto [v, depth] = queue.front();
    queue.pop_front();
    if (out.contains(v)) continue;
    build(v);
    if (depth >= params.hops) continue;
    for (NodeId u : out.nodes.at(v).neighbors) queue.emplace_back(u, depth + 1);
  }
  return out;
}

double sampling_cost(const Snapshot& snap) {
  double total = 0.0;
  for (const auto& [_, n] : snap.nodes) total += static_cast<double>(n.neighbors.size());
  return total;
}

QualityScorer size_scorer() {
  return [](const Snapshot& s) { return sampling_cost(s); };
}

QualityScorer degree_sum_scorer(const Graph& g) {
  return [&g](const Snapshot& s) {
    double total = 0.0;
    for (const auto& [v, _] : s.nodes) {
      if (v < g.node_count()) total += static_cast<double>(g.out_degree(v));
    }
    return total;
  };
}

double objective(const Snapshot& snap, const CostQualityParams& params) {
  if (!(params.lambda >= 0.0)) throw ArgumentError("lambda must be >= 0");
  if (!params.scorer) throw ArgumentError("quality scorer is not set");
  const double q = params.scorer(snap);
  if (!(q >= 0.0)) throw ArgumentError("quality scorer returned a negative value");
  return sampling_cost(snap) - params.lambda * q;
}

BestOfK best_of_k(std::size_t k,
                  const std::function<Snapshot(std::uint64_t)>& generator,
                  const CostQualityParams& params, std::uint64_t seed) {
  if (k < 1) throw ArgumentError("best_of_k needs k >= 1");
  BestOfK best;
  for (std::size_t i = 0; i < k; ++i) {
    Snapshot candidate = generator(derive_seed(seed, i));
    const double value = objective(candidate, params);
    if (i == 0 || value < best.objective) {
      best.snapshot = std::move(candidate);
      best.objective = value;
      best.index = i;
    }
  }
  return best;
}

void write_snapshot_dump(const Snapshot& snap, std::ostream& out) {
  using detail::put;
  detail::put_header(out, detail::kDumpKindSnapshot, 1);
  put(out, static_cast<std::uint64_t>(snap.size()));
  for (const auto& [v, n] : snap.nodes) {
    put(out, v);
    put(out, static_cast<std::uint8_t>(n.origin));
    put(out, static_cast<std::uint32_t>(n.neighbors.size()));
    for (std::size_t i = 0; i < n.neighbors.size(); ++i) {
      put(out, n.neighbors[i]);
      put(out, static_cast<std::uint8_t>(n.provenance[i]));
    }
  }
}

Snapshot read_snapshot_dump(std::istream& in) {
  using detail::get;
  const std::uint32_t layers = detail::get_header(in, detail::kDumpKindSnapshot);
  if (layers != 1) throw DataError("GSSC1 snapshot dump must have one layer");
  auto provenance = [](std::uint8_t b) {
    if (b > 1) throw DataError("GSSC1 dump: bad provenance byte");
    return static_cast<Provenance>(b);
  };
  Snapshot snap;
  const auto count = get<std::uint64_t>(in);
  for (std::uint64_t k = 0; k < count; ++k) {
    const auto v = get<std::uint32_t>(in);
    Neighborhood n;
    n.origin = provenance(get<std::uint8_t>(in));
    const auto entries = get<std::uint32_t>(in);
    for (std::uint32_t i = 0; i < entries; ++i) {
      n.neighbors.push_back(get<std::uint32_t>(in));
      n.provenance.push_back(provenance(get<std::uint8_t>(in)));
    }
    if (!snap.nodes.emplace(v, std::move(n)).second) {
      throw DataError("GSSC1 dump: node " + std::to_string(v) + " repeated");
    }
  }
  return snap;
}

}  // namespace gss
