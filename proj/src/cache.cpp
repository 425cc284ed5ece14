// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "gss/cache.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace gss {

std::vector<NodeId> distinct_neighbors(const Graph& g, NodeId v) {
  const auto row = g.out_neighbors(v);
  std::vector<NodeId> out(row.begin(), row.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<NodeId> sample_neighbors(const Graph& g, NodeId v, std::size_t k,
                                     Rng& rng, IoSink* sink, IoTag tag,
                                     std::uint32_t batch) {
  if (k == 0) return {};
  std::vector<NodeId> pool = distinct_neighbors(g, v);
  pool.resize(partial_shuffle(pool, k, rng));
  if (sink != nullptr) {
    for (std::size_t i = 0; i < pool.size(); ++i) {
      sink->charge(IoOp::kDiskRead, tag, v, batch);
    }
  }
  return pool;
}

LayeredCache LayeredCache::init(const Graph& g, std::vector<std::size_t> fanouts,
                                double amp_rate, std::uint64_t seed,
                                IoSink* sink, std::uint32_t batch) {
  if (!(amp_rate >= 1.0)) {
    throw ConfigError("amp_rate must be >= 1, got " + std::to_string(amp_rate));
  }
  if (fanouts.empty()) throw ConfigError("cache needs at least one fanout");
  LayeredCache cache;
  cache.fanouts_ = std::move(fanouts);
  cache.amp_rate_ = amp_rate;
  cache.node_count_ = g.node_count();
  Rng rng(seed);
  for (std::size_t f : cache.fanouts_) {
    Layer layer;
    const double cap = std::ceil(static_cast<double>(f) * amp_rate - 1e-9);
    layer.capacity = cap <= 0.0 ? 0 : static_cast<std::size_t>(cap);
    cache.fill_layer(layer, g, rng, sink, IoTag::kInit, batch);
    cache.layers_.push_back(std::move(layer));
  }
  return cache;
}

void LayeredCache::fill_layer(Layer& layer, const Graph& g, Rng& rng,
                              IoSink* sink, IoTag tag, std::uint32_t batch) {
  const std::size_t cap = layer.capacity;
  layer.ids.assign(node_count_ * cap, kInvalidNode);
  layer.epochs.assign(node_count_ * cap, 0);
  layer.counts.assign(node_count_, 0);
  for (NodeId v = 0; v < node_count_; ++v) {
    const auto picked = sample_neighbors(g, v, cap, rng, sink, tag, batch);
    std::copy(picked.begin(), picked.end(), layer.ids.begin() + v * cap);
    std::fill_n(layer.epochs.begin() + v * cap, picked.size(), batch_counter_);
    layer.counts[v] = static_cast<std::uint32_t>(picked.size());
  }
}

void LayeredCache::require_initialized() const {
  if (!initialized()) throw StateError("cache is not initialized");
}

void LayeredCache::check_graph(const Graph& g) const {
  require_initialized();
  if (g.node_count() != node_count_) {
    throw ConfigError("cache built for " + std::to_string(node_count_) +
                      " nodes, graph has " + std::to_string(g.node_count()));
  }
}

std::size_t LayeredCache::capacity(std::size_t layer) const {
  require_initialized();
  return layers_.at(layer).capacity;
}

std::span<const NodeId> LayeredCache::entries(std::size_t layer,
                                              NodeId node) const {
  require_initialized();
  const Layer& l = layers_.at(layer);
  if (node >= node_count_) {
    throw ArgumentError("node " + std::to_string(node) + " not in cache");
  }
  return {l.ids.data() + node * l.capacity, l.counts[node]};
}

std::span<const std::uint32_t> LayeredCache::epochs(std::size_t layer,
                                                    NodeId node) const {
  require_initialized();
  const Layer& l = layers_.at(layer);
  if (node >= node_count_) {
    throw ArgumentError("node " + std::to_string(node) + " not in cache");
  }
  return {l.epochs.data() + node * l.capacity, l.counts[node]};
}

std::size_t LayeredCache::total_entries() const {
  std::size_t total = 0;
  for (const Layer& l : layers_) {
    total = std::accumulate(l.counts.begin(), l.counts.end(), total);
  }
  return total;
}

void LayeredCache::advance_to(std::uint32_t t) {
  if (t < batch_counter_) {
    throw StateError("batch counter cannot move back from " +
                     std::to_string(batch_counter_) + " to " +
                     std::to_string(t));
  }
  batch_counter_ = t;
}

std::uint64_t LayeredCache::layer_generation(std::size_t layer) const {
  require_initialized();
  return layers_.at(layer).generation;
}

void LayeredCache::refresh_full(const Graph& g, std::uint64_t seed,
                                IoSink* sink, std::uint32_t batch) {
  check_graph(g);
  Rng rng(seed);
  ++generation_;
  for (Layer& layer : layers_) {
    fill_layer(layer, g, rng, sink, IoTag::kRefresh, batch);
    layer.generation = generation_;
  }
}

std::size_t LayeredCache::refresh_layer_partial(Layer& layer, double gamma,
                                                const Graph& g, Rng& rng,
                                                IoSink* sink,
                                                std::uint32_t batch) {
  const std::size_t cap = layer.capacity;
  std::size_t replaced = 0;
  std::vector<std::size_t> order;
  std::vector<NodeId> kept_ids;
  std::vector<std::uint32_t> kept_epochs;
  for (NodeId v = 0; v < node_count_; ++v) {
    const std::size_t n = layer.counts[v];
    const std::size_t n_new = ceil_fraction(gamma, n);
    if (n_new == 0) continue;
    NodeId* ids = layer.ids.data() + v * cap;
    std::uint32_t* eps = layer.epochs.data() + v * cap;

    // Evict the n_new oldest entries; ties by ascending id.
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return eps[a] != eps[b] ? eps[a] < eps[b] : ids[a] < ids[b];
    });
    std::vector<bool> evict(n, false);
    for (std::size_t i = 0; i < n_new; ++i) evict[order[i]] = true;
    kept_ids.clear();
    kept_epochs.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (evict[i]) continue;
      kept_ids.push_back(ids[i]);
      kept_epochs.push_back(eps[i]);
    }

    std::vector<NodeId> pool = distinct_neighbors(g, v);
    std::vector<NodeId> retained = kept_ids;
    std::sort(retained.begin(), retained.end());
    std::erase_if(pool, [&](NodeId u) {
      return std::binary_search(retained.begin(), retained.end(), u);
    });
    const std::size_t drawn = partial_shuffle(pool, n_new, rng);

    std::copy(kept_ids.begin(), kept_ids.end(), ids);
    std::copy(kept_epochs.begin(), kept_epochs.end(), eps);
    for (std::size_t i = 0; i < drawn; ++i) {
      ids[kept_ids.size() + i] = pool[i];
      eps[kept_ids.size() + i] = batch_counter_;
      if (sink != nullptr) sink->charge(IoOp::kDiskRead, IoTag::kRefresh, v, batch);
    }
    layer.counts[v] = static_cast<std::uint32_t>(kept_ids.size() + drawn);
    replaced += drawn;
  }
  return replaced;
}

std::size_t LayeredCache::refresh_partial(std::size_t layer, double gamma,
                                          const Graph& g, std::uint64_t seed,
                                          IoSink* sink, std::uint32_t batch) {
  require_unit_interval(gamma, "refresh rate");
  check_graph(g);
  Rng rng(derive_seed(seed, layer));
  Layer& l = layers_.at(layer);
  const std::size_t replaced = refresh_layer_partial(l, gamma, g, rng, sink, batch);
  if (replaced > 0) l.generation = ++generation_;
  return replaced;
}

std::size_t LayeredCache::refresh_partial_all(double gamma, const Graph& g,
                                              std::uint64_t seed, IoSink* sink,
                                              std::uint32_t batch) {
  require_unit_interval(gamma, "refresh rate");
  check_graph(g);
  std::size_t replaced = 0;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Rng rng(derive_seed(seed, i));
    replaced += refresh_layer_partial(layers_[i], gamma, g, rng, sink, batch);
  }
  if (replaced > 0) {
    ++generation_;
    for (Layer& l : layers_) l.generation = generation_;
  }
  return replaced;
}

void LayeredCache::write_back(std::size_t layer, NodeId node,
                              std::span<const NodeId> fresh) {
  require_initialized();
  Layer& l = layers_.at(layer);
  if (node >= node_count_) {
    throw ArgumentError("node " + std::to_string(node) + " not in cache");
  }
  const std::size_t cap = l.capacity;
  NodeId* ids = l.ids.data() + node * cap;
  std::uint32_t* eps = l.epochs.data() + node * cap;
  for (NodeId u : fresh) {
    const std::size_t n = l.counts[node];
    if (std::find(ids, ids + n, u) != ids + n) continue;
    if (n < cap) {
      ids[n] = u;
      eps[n] = batch_counter_;
      ++l.counts[node];
      continue;
    }
    // Oldest entry not itself part of `fresh`.
    std::size_t oldest = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::find(fresh.begin(), fresh.end(), ids[i]) != fresh.end()) continue;
      if (oldest == n || eps[i] < eps[oldest] ||
          (eps[i] == eps[oldest] && ids[i] < ids[oldest])) {
        oldest = i;
      }
    }
    if (oldest == n) return;
    ids[oldest] = u;
    eps[oldest] = batch_counter_;
  }
}

NeighborLists sample_from_cache(const LayeredCache& cache, std::size_t layer,
                                std::span<const NodeId> seeds, std::size_t f,
                                Rng& rng, IoSink* sink, std::uint32_t batch) {
  if (!cache.initialized()) throw StateError("cache is not initialized");
  NeighborLists out(seeds.size());
  if (f == 0) return out;
  std::vector<NodeId> pool;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto entries = cache.entries(layer, seeds[i]);
    pool.assign(entries.begin(), entries.end());
    pool.resize(partial_shuffle(pool, f, rng));
    if (sink != nullptr) {
      for (std::size_t k = 0; k < pool.size(); ++k) {
        sink->charge(IoOp::kCacheAccess, IoTag::kSample, seeds[i], batch);
      }
    }
    out[i] = pool;
  }
  return out;
}

NeighborLists fetch_mixed(LayeredCache& cache, std::size_t layer,
                          std::span<const NodeId> seeds, std::size_t f,
                          double delta, const Graph& g, Rng& rng,
                          IoSink* sink, std::uint32_t batch, bool write_back) {
  require_unit_interval(delta, "fetch rate");
  if (!cache.initialized()) throw StateError("cache is not initialized");
  NeighborLists out(seeds.size());
  if (f == 0) return out;
  const std::size_t n_disk = ceil_fraction(delta, f);
  std::vector<NodeId> disk;
  std::vector<NodeId> cached;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const NodeId v = seeds[i];
    std::vector<NodeId>& picked = out[i];
    auto chosen = [&picked](NodeId u) {
      return std::find(picked.begin(), picked.end(), u) != picked.end();
    };

    disk = sample_neighbors(g, v, n_disk, rng, sink, IoTag::kFetch, batch);
    picked = disk;

    const auto entries = cache.entries(layer, v);
    cached.clear();
    for (NodeId u : entries) {
      if (!chosen(u)) cached.push_back(u);
    }
    // The cache part and any cache backfill come from one shuffled pool.
    const std::size_t want_cache = f - picked.size();
    if (want_cache > 0 && !cached.empty()) {
      const std::size_t take = partial_shuffle(cached, want_cache, rng);
      picked.insert(picked.end(), cached.begin(),
                    cached.begin() + static_cast<std::ptrdiff_t>(take));
      if (sink != nullptr) {
        for (std::size_t k = 0; k < take; ++k) {
          sink->charge(IoOp::kCacheAccess, IoTag::kFetch, v, batch);
        }
      }
    }

    if (picked.size() < f) {
      std::vector<NodeId> rest = distinct_neighbors(g, v);
      std::erase_if(rest, chosen);
      const std::size_t take = partial_shuffle(rest, f - picked.size(), rng);
      for (std::size_t j = 0; j < take; ++j) {
        picked.push_back(rest[j]);
        disk.push_back(rest[j]);
        if (sink != nullptr) sink->charge(IoOp::kDiskRead, IoTag::kFetch, v, batch);
      }
    }
    if (write_back && !disk.empty()) cache.write_back(layer, v, disk);
  }
  return out;
}

SharedCache::SharedCache(LayeredCache initial)
    : current_(std::make_shared<const LayeredCache>(std::move(initial))) {
  if (!current_->initialized()) {
    throw StateError("shared cache requires an initialized cache");
  }
}

std::shared_ptr<const LayeredCache> SharedCache::acquire() const {
  std::lock_guard lock(mu_);
  return current_;
}

std::uint64_t SharedCache::generation() const { return acquire()->generation(); }

void SharedCache::publish(std::shared_ptr<const LayeredCache> next) {
  std::lock_guard lock(mu_);
  current_ = std::move(next);
}

std::size_t SharedCache::refresh(double rho, const Graph& g, std::uint64_t seed,
                                 IoSink* sink, std::uint32_t batch) {
  require_unit_interval(rho, "shared refresh proportion");
  std::lock_guard writer(writer_mu_);
  if (rho == 0.0) return 0;
  auto next = std::make_shared<LayeredCache>(*acquire());
  next->advance_to(std::max(next->batch_counter(), batch));
  const std::size_t replaced = next->refresh_partial_all(rho, g, seed, sink, batch);
  if (replaced > 0) publish(std::move(next));
  return replaced;
}

void SharedCache::refresh_full(const Graph& g, std::uint64_t seed, IoSink* sink,
                               std::uint32_t batch) {
  std::lock_guard writer(writer_mu_);
  auto next = std::make_shared<LayeredCache>(*acquire());
  next->advance_to(std::max(next->batch_counter(), batch));
  next->refresh_full(g, seed, sink, batch);
  publish(std::move(next));
}

}  // namespace gss
