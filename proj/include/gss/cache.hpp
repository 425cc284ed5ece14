// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "gss/common.hpp"
#include "gss/graph.hpp"
#include "gss/storage.hpp"

namespace gss {

// Distinct neighbors of v (rows are sorted, duplicates collapsed).
std::vector<NodeId> distinct_neighbors(const Graph& g, NodeId v);

/// Uniform without-replacement sample of min(k, distinct degree) neighbors.
/// Charges one disk read per returned entry when `sink` is set.
std::vector<NodeId> sample_neighbors(const Graph& g, NodeId v, std::size_t k,
                                     Rng& rng, IoSink* sink = nullptr,
                                     IoTag tag = IoTag::kSample,
                                     std::uint32_t batch = 0);

/// Amplified neighbor cache, one fixed-capacity slot per (layer, node).
/// Layer l holds up to ceil(fanouts[l] * amp_rate) distinct true neighbors
/// of each node, each tagged with the batch counter at insertion.
///
/// Layers are indexed 0..L-1 in fanout order. Many concurrent readers or a
/// single writer.
class LayeredCache {
 public:
  LayeredCache() = default;

  /// Samples every node of `g` into every layer (disk reads, tag init).
  static LayeredCache init(const Graph& g, std::vector<std::size_t> fanouts,
                           double amp_rate, std::uint64_t seed,
                           IoSink* sink = nullptr, std::uint32_t batch = 0);

  bool initialized() const { return !layers_.empty(); }
  std::size_t layer_count() const { return layers_.size(); }
  std::size_t node_count() const { return node_count_; }
  const std::vector<std::size_t>& fanouts() const { return fanouts_; }
  double amp_rate() const { return amp_rate_; }
  std::size_t capacity(std::size_t layer) const;

  std::span<const NodeId> entries(std::size_t layer, NodeId node) const;
  std::span<const std::uint32_t> epochs(std::size_t layer, NodeId node) const;
  std::size_t total_entries() const;

  std::uint32_t batch_counter() const { return batch_counter_; }
  /// Throws StateError when t would decrease.
  void advance_to(std::uint32_t t);

  // Bumped by every refresh that changes contents. Each layer carries the
  // generation of its last rewrite; after refresh_full/refresh_partial_all
  // all layer tags equal generation().
  std::uint64_t generation() const { return generation_; }
  std::uint64_t layer_generation(std::size_t layer) const;

  /// Resamples every entry list to capacity (disk reads, tag refresh).
  void refresh_full(const Graph& g, std::uint64_t seed, IoSink* sink = nullptr,
                    std::uint32_t batch = 0);

  /// Replaces ceil(gamma * |entries|) of each node's entries in `layer`,
  /// oldest epoch first (ties by ascending id), with fresh draws from the
  /// node's neighbors that are not retained. Returns the replaced count.
  std::size_t refresh_partial(std::size_t layer, double gamma, const Graph& g,
                              std::uint64_t seed, IoSink* sink = nullptr,
                              std::uint32_t batch = 0);

  /// refresh_partial on every layer as one generation step.
  std::size_t refresh_partial_all(double gamma, const Graph& g,
                                  std::uint64_t seed, IoSink* sink = nullptr,
                                  std::uint32_t batch = 0);

  /// Inserts `fresh` neighbors of `node` not already cached, evicting the
  /// oldest entries once full. Used by OTF fetch write-back.
  void write_back(std::size_t layer, NodeId node, std::span<const NodeId> fresh);

  friend void write_cache_dump(const LayeredCache& cache, std::ostream& out);
  friend LayeredCache read_cache_dump(std::istream& in);
  friend bool operator==(const LayeredCache&, const LayeredCache&) = default;

 private:
  struct Layer {
    std::size_t capacity = 0;
    std::uint64_t generation = 0;
    std::vector<NodeId> ids;             // node * capacity + i
    std::vector<std::uint32_t> epochs;   // parallel to ids
    std::vector<std::uint32_t> counts;   // per node
    friend bool operator==(const Layer&, const Layer&) = default;
  };

  void require_initialized() const;
  void check_graph(const Graph& g) const;
  std::size_t refresh_layer_partial(Layer& layer, double gamma, const Graph& g,
                                    Rng& rng, IoSink* sink, std::uint32_t batch);
  void fill_layer(Layer& layer, const Graph& g, Rng& rng, IoSink* sink,
                  IoTag tag, std::uint32_t batch);

  std::vector<Layer> layers_;
  std::vector<std::size_t> fanouts_;
  double amp_rate_ = 1.0;
  std::size_t node_count_ = 0;
  std::uint32_t batch_counter_ = 0;
  std::uint64_t generation_ = 0;
};

// Per-seed sampled neighbors, parallel to the seed list.
using NeighborLists = std::vector<std::vector<NodeId>>;

/// Uniform sample of min(f, |entries|) cached entries per seed. One cache
/// access per returned entry; never touches disk.
NeighborLists sample_from_cache(const LayeredCache& cache, std::size_t layer,
                                std::span<const NodeId> seeds, std::size_t f,
                                Rng& rng, IoSink* sink = nullptr,
                                std::uint32_t batch = 0);

/// ceil(delta * f) neighbors per seed from the graph (disk reads, tag
/// fetch), the rest from the cache (one cache access per entry), without
/// duplicates. Shortfalls are backfilled from the cache, then the graph.
/// With write_back, disk-drawn entries are inserted into the cache.
NeighborLists fetch_mixed(LayeredCache& cache, std::size_t layer,
                          std::span<const NodeId> seeds, std::size_t f,
                          double delta, const Graph& g, Rng& rng,
                          IoSink* sink = nullptr, std::uint32_t batch = 0,
                          bool write_back = false);

/// One cache generation shared by concurrent consumers. Refreshes build
/// the next generation on a private copy and publish it with one pointer
/// swap, so readers see a whole generation or the previous one.
class SharedCache {
 public:
  explicit SharedCache(LayeredCache initial);

  std::shared_ptr<const LayeredCache> acquire() const;
  std::uint64_t generation() const;

  /// Partial refresh of every layer with gamma = rho; rho = 0 is a no-op
  /// that leaves the generation unchanged. Returns replaced entries.
  std::size_t refresh(double rho, const Graph& g, std::uint64_t seed,
                      IoSink* sink = nullptr, std::uint32_t batch = 0);
  void refresh_full(const Graph& g, std::uint64_t seed, IoSink* sink = nullptr,
                    std::uint32_t batch = 0);

 private:
  void publish(std::shared_ptr<const LayeredCache> next);

  mutable std::mutex mu_;       // guards current_
  std::mutex writer_mu_;        // one refresher at a time
  std::shared_ptr<const LayeredCache> current_;
};

// Binary dump: "GSSC1", u8 kind (0 = cache), u32 layer count, then per
// layer the node-count-prefixed entry lists. Little-endian.
void write_cache_dump(const LayeredCache& cache, std::ostream& out);
LayeredCache read_cache_dump(std::istream& in);
void save_cache(const LayeredCache& cache, const std::string& path);
LayeredCache load_cache(const std::string& path);

}  // namespace gss
