// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <fstream>

#include "binary_io.hpp"
#include "gss/cache.hpp"

namespace gss {

using detail::get;
using detail::put;

void write_cache_dump(const LayeredCache& cache, std::ostream& out) {
  cache.require_initialized();
  detail::put_header(out, detail::kDumpKindCache,
                     static_cast<std::uint32_t>(cache.layers_.size()));
  detail::put_f64(out, cache.amp_rate_);
  put(out, cache.batch_counter_);
  put(out, cache.generation_);
  for (std::size_t f : cache.fanouts_) put(out, static_cast<std::uint64_t>(f));
  for (const auto& layer : cache.layers_) {
    put(out, layer.generation);
    put(out, static_cast<std::uint64_t>(cache.node_count_));
    for (NodeId v = 0; v < cache.node_count_; ++v) {
      const std::uint32_t n = layer.counts[v];
      put(out, v);
      put(out, n);
      for (std::size_t i = 0; i < n; ++i) {
        put(out, layer.ids[v * layer.capacity + i]);
        put(out, layer.epochs[v * layer.capacity + i]);
      }
    }
  }
}

LayeredCache read_cache_dump(std::istream& in) {
  const std::uint32_t layer_count = detail::get_header(in, detail::kDumpKindCache);
  if (layer_count == 0) throw DataError("GSSC1 cache dump has no layers");
  LayeredCache cache;
  cache.amp_rate_ = detail::get_f64(in);
  if (!(cache.amp_rate_ >= 1.0)) throw DataError("GSSC1 dump: amp_rate < 1");
  cache.batch_counter_ = get<std::uint32_t>(in);
  cache.generation_ = get<std::uint64_t>(in);
  for (std::uint32_t l = 0; l < layer_count; ++l) {
    cache.fanouts_.push_back(static_cast<std::size_t>(get<std::uint64_t>(in)));
  }
  for (std::uint32_t l = 0; l < layer_count; ++l) {
    LayeredCache::Layer layer;
    const double cap = std::ceil(
        static_cast<double>(cache.fanouts_[l]) * cache.amp_rate_ - 1e-9);
    layer.capacity = cap <= 0.0 ? 0 : static_cast<std::size_t>(cap);
    layer.generation = get<std::uint64_t>(in);
    const auto nodes = get<std::uint64_t>(in);
    if (l == 0) {
      cache.node_count_ = static_cast<std::size_t>(nodes);
    } else if (nodes != cache.node_count_) {
      throw DataError("GSSC1 dump: layers disagree on node count");
    }
    layer.ids.assign(cache.node_count_ * layer.capacity, kInvalidNode);
    layer.epochs.assign(cache.node_count_ * layer.capacity, 0);
    layer.counts.assign(cache.node_count_, 0);
    for (std::size_t k = 0; k < cache.node_count_; ++k) {
      const auto v = get<std::uint32_t>(in);
      const auto n = get<std::uint32_t>(in);
      if (v >= cache.node_count_ || n > layer.capacity) {
        throw DataError("GSSC1 dump: bad entry list for node " + std::to_string(v));
      }
      layer.counts[v] = n;
      for (std::uint32_t i = 0; i < n; ++i) {
        layer.ids[v * layer.capacity + i] = get<std::uint32_t>(in);
        layer.epochs[v * layer.capacity + i] = get<std::uint32_t>(in);
      }
    }
    cache.layers_.push_back(std::move(layer));
  }
  return cache;
}

void save_cache(const LayeredCache& cache, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write cache dump '" + path + "'");
  write_cache_dump(cache, out);
}

LayeredCache load_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open cache dump '" + path + "'");
  return read_cache_dump(in);
}

}  // namespace gss
