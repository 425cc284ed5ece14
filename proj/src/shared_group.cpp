// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <condition_variable>
#include <exception>
#include <mutex>
#include <thread>

#include "gss/sampler.hpp"

namespace gss {
namespace {

// Turn-taking state for one run: batches commit in order; shared-cache
// readers wait for the refresh epoch their batch belongs to.
class Sequencer {
 public:
  template <typename Pred>
  void wait(Pred pred) {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return failed_ || pred(); });
    if (failed_) throw Aborted{};
  }

  void wait_turn(std::uint32_t t) {
    wait([&] { return committed_ == t; });
  }
  void wait_epoch(std::uint64_t epoch) {
    wait([&] { return epochs_done_ >= epoch; });
  }

  void finish_epoch(std::uint64_t epoch) {
    {
      std::lock_guard lock(mu_);
      epochs_done_ = std::max(epochs_done_, epoch);
    }
    cv_.notify_all();
  }
  void finish_turn() {
    {
      std::lock_guard lock(mu_);
      ++committed_;
    }
    cv_.notify_all();
  }

  void fail(std::exception_ptr error) {
    {
      std::lock_guard lock(mu_);
      if (!error_) error_ = error;
      failed_ = true;
    }
    cv_.notify_all();
  }
  std::exception_ptr error() const { return error_; }

  struct Aborted {};

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::uint32_t committed_ = 0;
  std::uint64_t epochs_done_ = 0;
  bool failed_ = false;
  std::exception_ptr error_;
};

double sum_time(const IoBuffer& buffer) {
  double total = 0.0;
  for (const IoLogEntry& e : buffer.entries()) total += e.time;
  return total;
}

}  // namespace

GroupResult run_consumers(const Graph& g, const StrategyConfig& config,
                          const GroupOptions& options, const SeedSource& seeds,
                          TieredStore& store, const BlockObserver& observer) {
  config.validate();
  if (options.consumers < 1) throw ConfigError("consumers must be >= 1");
  if (options.batches < 1) throw ConfigError("batch count must be >= 1");
  const bool shared = is_shared(config.kind);
  if (shared && options.theta && options.consumers > 1) {
    throw ConfigError("dual mode with a shared cache supports one consumer");
  }
  const std::size_t n = options.consumers;

  // Shared kinds: one cache, built up front, its init charged to batch 0.
  IoBuffer init_charges(store.latency());
  std::shared_ptr<SharedCache> shared_cache;
  std::vector<std::unique_ptr<BlockSampler>> samplers;
  if (shared && !options.theta) {
    shared_cache = std::make_shared<SharedCache>(
        LayeredCache::init(g, config.fanouts, config.amp_rate,
                           cache_init_seed(config, 0), &init_charges, 0));
    for (std::size_t c = 0; c < n; ++c) {
      samplers.push_back(std::make_unique<Sampler>(g, config, shared_cache));
    }
  } else {
    for (std::size_t c = 0; c < n; ++c) {
      samplers.push_back(make_sampler(g, config, options.theta, c));
    }
  }

  GroupResult result;
  result.records.resize(options.batches);
  Sequencer seq;
  const bool gated = shared_cache != nullptr;
  const std::uint32_t period = config.period;

  auto consume = [&](std::size_t c) {
    try {
      IoBuffer buffer(store.latency());
      for (std::uint32_t t = static_cast<std::uint32_t>(c); t < options.batches;
           t += static_cast<std::uint32_t>(n)) {
        const bool refresher = gated && t % period == 0;
        if (refresher) {
          seq.wait_turn(t);
        } else if (gated) {
          seq.wait_epoch(t / period + 1);
        }
        buffer.clear();
        if (t == 0) buffer.append(init_charges);
        const std::vector<NodeId> batch_seeds = seeds(t);
        const SampledBlocks blocks = samplers[c]->sample(batch_seeds, {t, &buffer});
        if (refresher) seq.finish_epoch(t / period + 1);

        BatchRecord& rec = result.records[t];
        rec.batch = t;
        rec.counters = buffer.counters();
        rec.sim_time = sum_time(buffer);
        rec.memory_entries = blocks.memory_entries;
        rec.edges = blocks.edge_count();
        rec.generation = blocks.generation;
        rec.generation_consistent = blocks.generation_consistent;

        seq.wait_turn(t);
        store.commit(buffer);
        if (observer) observer(t, blocks);
        seq.finish_turn();
      }
    } catch (const Sequencer::Aborted&) {
    } catch (...) {
      seq.fail(std::current_exception());
    }
  };

  if (n == 1) {
    consume(0);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(n);
    for (std::size_t c = 0; c < n; ++c) workers.emplace_back(consume, c);
    for (auto& w : workers) w.join();
  }
  if (seq.error()) std::rethrow_exception(seq.error());

  if (shared_cache != nullptr) {
    result.live_cache_entries = shared_cache->acquire()->total_entries();
    result.refresh_events = (options.batches + period - 1) / period;
  } else {
    for (const auto& s : samplers) result.live_cache_entries += s->live_cache_entries();
    if (shared) result.refresh_events = (options.batches + period - 1) / period;
  }
  return result;
}

}  // namespace gss
