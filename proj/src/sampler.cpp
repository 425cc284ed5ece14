// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "gss/sampler.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace gss {
namespace {

constexpr std::uint64_t kInitTag = 1;
constexpr std::uint64_t kRefreshTag = 2;
constexpr std::uint64_t kSampleTag = 3;

struct KindName {
  StrategyKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {StrategyKind::kFbl, "FBL"},
    {StrategyKind::kFcr, "FCR"},
    {StrategyKind::kFcrSc, "FCR_SC"},
    {StrategyKind::kOtfRefreshOnly, "OTF_REFRESH_ONLY"},
    {StrategyKind::kOtfFetchOnly, "OTF_FETCH_ONLY"},
    {StrategyKind::kOtfPrPf, "OTF_PR_PF"},
    {StrategyKind::kOtfPrFf, "OTF_PR_FF"},
    {StrategyKind::kOtfSc, "OTF_SC"},
};

std::size_t distinct_degree(const Graph& g, NodeId v) {
  const auto row = g.out_neighbors(v);
  std::size_t n = 0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i == 0 || row[i] != row[i - 1]) ++n;
  }
  return n;
}

std::vector<NodeId> sorted_unique(std::vector<NodeId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool cache_consistent(const LayeredCache& cache) {
  for (std::size_t l = 0; l < cache.layer_count(); ++l) {
    if (cache.layer_generation(l) != cache.generation()) return false;
  }
  return true;
}

}  // namespace

const char* to_string(StrategyKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

StrategyKind parse_strategy(const std::string& name) {
  std::string upper = name;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (const auto& [kind, canonical] : kKindNames) {
    if (upper == canonical) return kind;
  }
  throw ArgumentError("unknown strategy '" + name + "'");
}

bool uses_cache(StrategyKind kind) { return kind != StrategyKind::kFbl; }

bool is_shared(StrategyKind kind) {
  return kind == StrategyKind::kFcrSc || kind == StrategyKind::kOtfSc;
}

const char* to_string(StrategyParam param) {
  switch (param) {
    case StrategyParam::kAmpRate:
      return "amp_rate";
    case StrategyParam::kRefreshRate:
      return "refresh_rate";
    case StrategyParam::kFetchRate:
      return "fetch_rate";
    case StrategyParam::kPeriod:
      return "period";
    case StrategyParam::kFetchPeriod:
      return "fetch_period";
    case StrategyParam::kSharedRho:
      return "shared_rho";
    case StrategyParam::kWriteBack:
      return "write_back";
  }
  return "?";
}

std::vector<StrategyParam> strategy_params(StrategyKind kind) {
  using P = StrategyParam;
  switch (kind) {
    case StrategyKind::kFbl:
      return {};
    case StrategyKind::kFcr:
    case StrategyKind::kFcrSc:
      return {P::kAmpRate, P::kPeriod};
    case StrategyKind::kOtfRefreshOnly:
    case StrategyKind::kOtfPrFf:
      return {P::kAmpRate, P::kRefreshRate, P::kPeriod};
    case StrategyKind::kOtfFetchOnly:
      return {P::kAmpRate, P::kFetchRate, P::kFetchPeriod, P::kWriteBack};
    case StrategyKind::kOtfPrPf:
      return {P::kAmpRate, P::kRefreshRate, P::kFetchRate, P::kPeriod,
              P::kWriteBack};
    case StrategyKind::kOtfSc:
      return {P::kAmpRate, P::kSharedRho, P::kPeriod};
  }
  return {};
}

void StrategyConfig::validate() const {
  if (!(amp_rate >= 1.0)) {
    throw ConfigError("amp_rate must be >= 1, got " + std::to_string(amp_rate));
  }
  auto unit = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError(std::string(name) + " must lie in [0,1], got " +
                        std::to_string(v));
    }
  };
  unit(refresh_rate, "refresh_rate");
  unit(fetch_rate, "fetch_rate");
  unit(shared_rho, "shared_rho");
  if (period < 1) throw ConfigError("period must be >= 1");
  if (fetch_period < 1) throw ConfigError("fetch_period must be >= 1");
  if (uses_cache(kind) && fanouts.empty()) {
    throw ConfigError(std::string(to_string(kind)) + " needs at least one fanout");
  }
}

std::uint64_t cache_init_seed(const StrategyConfig& config, std::uint64_t stream) {
  return derive_seed(config.seed, stream, kInitTag);
}

std::size_t SampledBlocks::edge_count() const {
  std::size_t n = 0;
  for (const Block& b : blocks) n += b.edges.size();
  return n;
}

Sampler::Sampler(const Graph& g, StrategyConfig config, std::uint64_t stream)
    : graph_(&g), config_(std::move(config)), stream_(stream) {
  config_.validate();
}

Sampler::Sampler(const Graph& g, StrategyConfig config,
                 std::shared_ptr<SharedCache> shared)
    : graph_(&g), config_(std::move(config)), stream_(0), shared_(std::move(shared)) {
  config_.validate();
  if (!is_shared(config_.kind)) {
    throw ConfigError(std::string(to_string(config_.kind)) +
                      " cannot read a shared cache");
  }
  if (shared_ == nullptr) throw ArgumentError("shared cache is null");
  const auto cache = shared_->acquire();
  if (cache->fanouts() != config_.fanouts) {
    throw ConfigError("shared cache fanouts do not match the sampler's");
  }
  if (cache->node_count() != g.node_count()) {
    throw ConfigError("shared cache was built for another graph");
  }
}

const LayeredCache* Sampler::cache() const {
  if (shared_ != nullptr) return shared_->acquire().get();
  return cache_ ? &*cache_ : nullptr;
}

std::size_t Sampler::live_cache_entries() const {
  if (shared_ != nullptr) return shared_->acquire()->total_entries();
  return cache_ ? cache_->total_entries() : 0;
}

void Sampler::ensure_cache(const BatchContext& ctx) {
  if (!uses_cache(config_.kind)) return;
  if (cache_ || shared_ != nullptr) return;
  LayeredCache built =
      LayeredCache::init(*graph_, config_.fanouts, config_.amp_rate,
                         cache_init_seed(config_, stream_), ctx.sink,
                         ctx.batch);
  if (is_shared(config_.kind)) {
    shared_ = std::make_shared<SharedCache>(std::move(built));
  } else {
    cache_ = std::move(built);
  }
}

void Sampler::refresh_if_due(const BatchContext& ctx) {
  const Graph& g = *graph_;
  if (is_shared(config_.kind)) {
    if (ctx.batch % config_.period != 0) return;
    const std::uint64_t seed =
        derive_seed(derive_seed(config_.seed, stream_, kRefreshTag), ctx.batch);
    if (config_.kind == StrategyKind::kFcrSc) {
      shared_->refresh_full(g, seed, ctx.sink, ctx.batch);
    } else {
      shared_->refresh(config_.shared_rho, g, seed, ctx.sink, ctx.batch);
    }
    return;
  }
  if (!cache_) return;
  cache_->advance_to(t_);
  if (t_ % config_.period != 0) return;
  const std::uint64_t seed =
      derive_seed(derive_seed(config_.seed, stream_, kRefreshTag), t_);
  switch (config_.kind) {
    case StrategyKind::kFcr:
      cache_->refresh_full(g, seed, ctx.sink, ctx.batch);
      break;
    case StrategyKind::kOtfRefreshOnly:
    case StrategyKind::kOtfPrPf:
    case StrategyKind::kOtfPrFf:
      cache_->refresh_partial_all(config_.refresh_rate, g, seed, ctx.sink,
                                  ctx.batch);
      break;
    default:
      break;
  }
}

NeighborLists Sampler::expand(const LayeredCache* cache, std::size_t layer,
                              std::span<const NodeId> dst, std::size_t f,
                              bool fetch_batch, Rng& rng,
                              const BatchContext& ctx, std::size_t& memory) {
  const Graph& g = *graph_;
  NeighborLists lists;
  switch (config_.kind) {
    case StrategyKind::kFbl:
      lists.resize(dst.size());
      if (f == 0) break;
      for (std::size_t i = 0; i < dst.size(); ++i) {
        lists[i] = sample_neighbors(g, dst[i], f, rng, ctx.sink, IoTag::kSample,
                                    ctx.batch);
        // The whole row is read before sampling.
        memory += distinct_degree(g, dst[i]);
      }
      return lists;
    case StrategyKind::kOtfPrFf: {
      lists.resize(dst.size());
      if (f == 0) break;
      std::vector<NodeId> pool;
      for (std::size_t i = 0; i < dst.size(); ++i) {
        const auto entries = cache->entries(layer, dst[i]);
        for (std::size_t k = 0; k < entries.size(); ++k) {
          if (ctx.sink != nullptr) {
            ctx.sink->charge(IoOp::kCacheAccess, IoTag::kSample, dst[i], ctx.batch);
          }
        }
        memory += entries.size();
        pool.assign(entries.begin(), entries.end());
        pool.resize(partial_shuffle(pool, f, rng));
        lists[i] = pool;
      }
      return lists;
    }
    case StrategyKind::kOtfPrPf:
    case StrategyKind::kOtfFetchOnly:
      if (fetch_batch) {
        lists = fetch_mixed(*cache_, layer, dst, f, config_.fetch_rate, g, rng,
                            ctx.sink, ctx.batch, config_.write_back);
        break;
      }
      [[fallthrough]];
    default:
      lists = sample_from_cache(*cache, layer, dst, f, rng, ctx.sink, ctx.batch);
      break;
  }
  for (const auto& l : lists) memory += l.size();
  return lists;
}

SampledBlocks Sampler::sample(std::span<const NodeId> seeds,
                              const BatchContext& ctx) {
  const Graph& g = *graph_;
  for (NodeId s : seeds) {
    if (s >= g.node_count()) {
      throw ArgumentError("seed " + std::to_string(s) +
                          " out of range for node_count=" +
                          std::to_string(g.node_count()));
    }
  }
  ensure_cache(ctx);
  refresh_if_due(ctx);

  std::shared_ptr<const LayeredCache> held;
  const LayeredCache* cache = nullptr;
  if (shared_ != nullptr) {
    held = shared_->acquire();
    cache = held.get();
  } else if (cache_) {
    cache = &*cache_;
  }

  bool fetch_batch = false;
  if (config_.kind == StrategyKind::kOtfPrPf) {
    fetch_batch = true;
  } else if (config_.kind == StrategyKind::kOtfFetchOnly) {
    fetch_batch = t_ % config_.fetch_period == 0;
  }

  SampledBlocks out;
  out.seeds.assign(seeds.begin(), seeds.end());
  if (cache != nullptr) {
    out.generation = cache->generation();
    out.generation_consistent = cache_consistent(*cache);
  }
  Rng rng(derive_seed(derive_seed(config_.seed, stream_, kSampleTag), ctx.batch));
  std::vector<NodeId> dst = sorted_unique(out.seeds);
  const std::size_t layers = config_.fanouts.size();
  for (std::size_t i = 0; i < layers; ++i) {
    const std::size_t layer = layers - 1 - i;
    Block block;
    block.fanout = config_.fanouts[layer];
    const NeighborLists lists = expand(cache, layer, dst, block.fanout,
                                       fetch_batch, rng, ctx, out.memory_entries);
    for (std::size_t j = 0; j < dst.size(); ++j) {
      for (NodeId u : lists[j]) {
        block.edges.push_back({u, dst[j]});
        block.frontier.push_back(u);
      }
    }
    block.frontier = sorted_unique(std::move(block.frontier));
    block.dst = std::move(dst);
    dst = block.frontier;
    out.blocks.push_back(std::move(block));
  }
  ++t_;
  return out;
}

DualSampler::DualSampler(const Graph& g, std::int64_t theta,
                         StrategyConfig dense_config, std::uint64_t stream)
    : split_(split_by_degree(g, theta)) {
  if (dense_config.kind == StrategyKind::kFbl) {
    throw ConfigError("dual mode needs a caching strategy for the dense side");
  }
  StrategyConfig sparse_config;
  sparse_config.kind = StrategyKind::kFbl;
  sparse_config.fanouts = dense_config.fanouts;
  sparse_config.seed = dense_config.seed;
  dense_ = std::make_unique<Sampler>(split_.dense_subgraph, std::move(dense_config),
                                     stream);
  sparse_ = std::make_unique<Sampler>(split_.sparse_subgraph,
                                      std::move(sparse_config), stream);
}

std::size_t DualSampler::live_cache_entries() const {
  return dense_->live_cache_entries();
}

SampledBlocks DualSampler::sample(std::span<const NodeId> seeds,
                                  const BatchContext& ctx) {
  std::vector<NodeId> dense_seeds;
  std::vector<NodeId> sparse_seeds;
  for (NodeId s : seeds) {
    if (s >= split_.dense_ids.to_local.size()) {
      throw ArgumentError("seed " + std::to_string(s) + " out of range");
    }
    if (split_.dense_ids.contains(s)) {
      dense_seeds.push_back(split_.dense_ids.to_local[s]);
    } else {
      sparse_seeds.push_back(split_.sparse_ids.to_local[s]);
    }
  }
  RemappingSink dense_sink(ctx.sink, split_.dense_ids.to_original);
  RemappingSink sparse_sink(ctx.sink, split_.sparse_ids.to_original);
  const SampledBlocks dense =
      dense_->sample(dense_seeds, {ctx.batch, ctx.sink ? &dense_sink : nullptr});
  const SampledBlocks sparse =
      sparse_->sample(sparse_seeds, {ctx.batch, ctx.sink ? &sparse_sink : nullptr});

  const auto& dmap = split_.dense_ids.to_original;
  const auto& smap = split_.sparse_ids.to_original;
  auto merged = [&](const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
    std::vector<NodeId> out;
    out.reserve(a.size() + b.size());
    for (NodeId v : a) out.push_back(dmap[v]);
    for (NodeId v : b) out.push_back(smap[v]);
    std::sort(out.begin(), out.end());
    return out;
  };

  SampledBlocks out;
  out.seeds.assign(seeds.begin(), seeds.end());
  out.memory_entries = dense.memory_entries + sparse.memory_entries;
  out.generation = dense.generation;
  out.generation_consistent = dense.generation_consistent;
  for (std::size_t i = 0; i < dense.blocks.size(); ++i) {
    const Block& d = dense.blocks[i];
    const Block& s = sparse.blocks[i];
    Block b;
    b.fanout = d.fanout;
    b.dst = merged(d.dst, s.dst);
    b.frontier = merged(d.frontier, s.frontier);
    b.edges.reserve(d.edges.size() + s.edges.size());
    for (const Edge& e : d.edges) b.edges.push_back({dmap[e.src], dmap[e.dst]});
    for (const Edge& e : s.edges) b.edges.push_back({smap[e.src], smap[e.dst]});
    out.blocks.push_back(std::move(b));
  }
  return out;
}

std::unique_ptr<BlockSampler> make_sampler(const Graph& g,
                                           const StrategyConfig& config,
                                           std::optional<std::int64_t> theta,
                                           std::uint64_t stream) {
  if (theta) return std::make_unique<DualSampler>(g, *theta, config, stream);
  return std::make_unique<Sampler>(g, config, stream);
}

}  // namespace gss
