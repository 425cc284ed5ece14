// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gss/cache.hpp"
#include "gss/common.hpp"
#include "gss/graph.hpp"
#include "gss/storage.hpp"

namespace gss {

enum class StrategyKind {
  kFbl,
  kFcr,
  kFcrSc,
  kOtfRefreshOnly,
  kOtfFetchOnly,
  kOtfPrPf,
  kOtfPrFf,
  kOtfSc,
};

const char* to_string(StrategyKind kind);
/// Accepts the canonical names (FBL, FCR, FCR_SC, OTF_REFRESH_ONLY, ...),
/// case-insensitive. Unknown names throw ArgumentError.
StrategyKind parse_strategy(const std::string& name);

bool uses_cache(StrategyKind kind);
bool is_shared(StrategyKind kind);

// Strategy parameters beyond fanouts and seed.
enum class StrategyParam {
  kAmpRate,
  kRefreshRate,
  kFetchRate,
  kPeriod,
  kFetchPeriod,
  kSharedRho,
  kWriteBack,
};

const char* to_string(StrategyParam param);
/// Parameters the given kind consumes.
std::vector<StrategyParam> strategy_params(StrategyKind kind);

struct StrategyConfig {
  StrategyKind kind = StrategyKind::kFbl;
  std::vector<std::size_t> fanouts{5, 5, 5};
  double amp_rate = 2.0;
  double refresh_rate = 0.15;  // gamma
  double fetch_rate = 0.3;     // delta
  std::uint32_t period = 50;   // T
  std::uint32_t fetch_period = 1;
  double shared_rho = 0.15;
  bool write_back = false;
  std::uint64_t seed = 0;

  /// Range checks; ConfigError on violation.
  void validate() const;
};

struct BatchContext {
  std::uint32_t batch = 0;  // label used for RNG streams and the I/O log
  IoSink* sink = nullptr;
};

// One layer of expansion. Edges are (src = sampled neighbor, dst).
struct Block {
  std::size_t fanout = 0;
  std::vector<NodeId> dst;       // sorted, distinct
  std::vector<Edge> edges;
  std::vector<NodeId> frontier;  // distinct srcs, sorted
};

struct SampledBlocks {
  std::vector<NodeId> seeds;
  // blocks[0] expands the seeds with fanouts[L-1]; blocks[i].frontier is
  // blocks[i+1].dst.
  std::vector<Block> blocks;
  // Entries moved into the memory tier for this batch.
  std::size_t memory_entries = 0;
  // Cache generation read by this batch (0 for FBL).
  std::uint64_t generation = 0;
  // Every layer of the cache read carried the same generation tag.
  bool generation_consistent = true;

  std::size_t edge_count() const;
};

/// Seed of the cache built by a sampler instance on `stream`.
std::uint64_t cache_init_seed(const StrategyConfig& config, std::uint64_t stream);

class BlockSampler {
 public:
  virtual ~BlockSampler() = default;
  virtual SampledBlocks sample(std::span<const NodeId> seeds,
                               const BatchContext& ctx) = 0;
  /// Entries currently held by the cache(s) this sampler reads.
  virtual std::size_t live_cache_entries() const = 0;
};

/// Single-graph sampler for any strategy. The batch counter t starts at 0
/// and advances by one per sample() call; refreshes fire when t % T == 0.
/// The cache is built on the first call and its init charges go to that
/// batch. Shared kinds follow the batch label instead of t, so that
/// several instances can split one schedule.
class Sampler final : public BlockSampler {
 public:
  /// `stream` separates the cache seeds of independent instances.
  Sampler(const Graph& g, StrategyConfig config, std::uint64_t stream = 0);
  /// Shared kinds only: reads (and refreshes) an existing shared cache.
  Sampler(const Graph& g, StrategyConfig config,
          std::shared_ptr<SharedCache> shared);

  SampledBlocks sample(std::span<const NodeId> seeds,
                       const BatchContext& ctx) override;
  std::size_t live_cache_entries() const override;

  const StrategyConfig& config() const { return config_; }
  std::uint32_t batch_counter() const { return t_; }
  /// Null until the first batch, and for FBL.
  const LayeredCache* cache() const;
  std::shared_ptr<SharedCache> shared_cache() const { return shared_; }

 private:
  void ensure_cache(const BatchContext& ctx);
  void refresh_if_due(const BatchContext& ctx);
  NeighborLists expand(const LayeredCache* cache, std::size_t layer,
                       std::span<const NodeId> dst, std::size_t f,
                       bool fetch_batch, Rng& rng, const BatchContext& ctx,
                       std::size_t& memory);

  const Graph* graph_;
  StrategyConfig config_;
  std::uint64_t stream_;
  std::uint32_t t_ = 0;
  std::optional<LayeredCache> cache_;
  std::shared_ptr<SharedCache> shared_;
};

/// Dense/sparse pipeline: nodes with total degree > theta are served by the
/// dense strategy over the dense subgraph, the rest by FBL over the sparse
/// subgraph. Blocks come back in original ids; cross edges are never seen.
class DualSampler final : public BlockSampler {
 public:
  DualSampler(const Graph& g, std::int64_t theta, StrategyConfig dense_config,
              std::uint64_t stream = 0);

  SampledBlocks sample(std::span<const NodeId> seeds,
                       const BatchContext& ctx) override;
  std::size_t live_cache_entries() const override;

  const SplitResult& split() const { return split_; }

 private:
  SplitResult split_;
  std::unique_ptr<Sampler> dense_;
  std::unique_ptr<Sampler> sparse_;
};

std::unique_ptr<BlockSampler> make_sampler(
    const Graph& g, const StrategyConfig& config,
    std::optional<std::int64_t> theta = std::nullopt, std::uint64_t stream = 0);

// Multi-consumer runs. Consumer c handles batches t = c, c+N, c+2N, ...;
// charges are buffered per batch and committed in batch order, so the log
// is the same for any thread interleaving.
struct BatchRecord {
  std::uint32_t batch = 0;
  IoCounters counters;
  double sim_time = 0.0;
  std::size_t memory_entries = 0;
  std::size_t edges = 0;
  std::uint64_t generation = 0;
  bool generation_consistent = true;
};

struct GroupOptions {
  std::size_t consumers = 1;
  std::uint32_t batches = 1;
  std::optional<std::int64_t> theta;  // dual mode when set
};

using SeedSource = std::function<std::vector<NodeId>(std::uint32_t batch)>;
// Called from worker threads, in batch order, while holding the commit turn.
using BlockObserver =
    std::function<void(std::uint32_t batch, const SampledBlocks& blocks)>;

struct GroupResult {
  std::vector<BatchRecord> records;  // by batch
  std::size_t live_cache_entries = 0;
  std::size_t refresh_events = 0;  // shared kinds
};

/// Shared kinds: one SharedCache for all consumers; batch t with
/// t % T == 0 refreshes after every earlier batch has committed, and the
/// cache init is charged to batch 0. Other kinds: one independent sampler
/// per consumer.
GroupResult run_consumers(const Graph& g, const StrategyConfig& config,
                          const GroupOptions& options, const SeedSource& seeds,
                          TieredStore& store,
                          const BlockObserver& observer = {});

}  // namespace gss
