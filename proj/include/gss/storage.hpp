// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <list>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gss/common.hpp"

namespace gss {

enum class IoOp : std::uint8_t { kDiskRead, kDiskWrite, kCacheAccess };

// Why a charge happened. kBuffer marks BufferManager traffic; a kBuffer disk
// read is a buffer miss.
enum class IoTag : std::uint8_t { kInit, kRefresh, kFetch, kSample, kBuffer };

const char* to_string(IoOp op);
const char* to_string(IoTag tag);

struct IoLogEntry {
  IoOp op = IoOp::kDiskRead;
  IoTag tag = IoTag::kSample;
  NodeId node = 0;
  std::uint32_t batch = 0;
  double time = 0.0;
};

/// Per-operation latencies in simulated seconds. Charged time is the
/// constant times `scale`; nothing ever sleeps.
struct LatencyModel {
  double disk_read = 5.0011;
  double disk_write = 1.0045;
  double cache_access = 0.0146;
  double scale = 1e-3;

  double charge(IoOp op) const;

  /// Applies GSS_SIM_SCALE from the environment when set.
  static LatencyModel from_env(LatencyModel base);
  static LatencyModel from_env();
};

struct IoCounters {
  std::uint64_t disk_reads = 0;
  std::uint64_t disk_writes = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t cache_misses = 0;

  void tally(IoOp op, IoTag tag);
  IoCounters& operator+=(const IoCounters& o);
  friend bool operator==(const IoCounters&, const IoCounters&) = default;
};

/// Destination for simulated I/O charges.
class IoSink {
 public:
  virtual ~IoSink() = default;
  virtual void charge(IoOp op, IoTag tag, NodeId node, std::uint32_t batch) = 0;
};

/// Charges recorded for later, ordered commit into a TieredStore. Lets
/// concurrent consumers produce a deterministic log.
class IoBuffer final : public IoSink {
 public:
  explicit IoBuffer(LatencyModel latency = {}) : latency_(latency) {}

  void charge(IoOp op, IoTag tag, NodeId node, std::uint32_t batch) override;

  const std::vector<IoLogEntry>& entries() const { return entries_; }
  const IoCounters& counters() const { return counters_; }
  void append(const IoBuffer& other);
  void clear();

 private:
  LatencyModel latency_;
  std::vector<IoLogEntry> entries_;
  IoCounters counters_;
};

/// Forwards charges with subgraph-local ids translated to original ids.
class RemappingSink final : public IoSink {
 public:
  RemappingSink(IoSink* inner, std::span<const NodeId> to_original)
      : inner_(inner), to_original_(to_original) {}

  void charge(IoOp op, IoTag tag, NodeId node, std::uint32_t batch) override {
    if (inner_ != nullptr) inner_->charge(op, tag, to_original_[node], batch);
  }

 private:
  IoSink* inner_;
  std::span<const NodeId> to_original_;
};

enum class AccessPattern { kSampling, kRetrieval, kResampling };

struct StoreConfig {
  std::size_t buffer_capacity = 1024;  // entries
  std::size_t payload_dim = 128;       // bytes per simulated embedding
  std::uint64_t payload_seed = 0;
  LatencyModel latency = {};
  bool keep_log = true;
};

/// Simulated disk / buffer / memory hierarchy. Every charge goes to a
/// virtual clock, a counter, and (unless keep_log is off) the I/O log.
///
/// Single writer: concurrent producers must go through IoBuffer + commit.
/// Counters and clock may be read from other threads.
class TieredStore final : public IoSink {
 public:
  using Payload = std::vector<std::uint8_t>;

  explicit TieredStore(std::size_t node_count, StoreConfig config = {});

  void charge(IoOp op, IoTag tag, NodeId node, std::uint32_t batch) override;
  void commit(const IoBuffer& buffer);

  /// Reads the given payloads from disk into the buffer (tag init).
  void buffer_load(std::span<const NodeId> nodes, std::uint32_t batch = 0);
  /// Hit: cache access. Miss: disk read + insert with LRU eviction.
  Payload buffer_get(NodeId node, std::uint32_t batch = 0);
  /// Write-through: disk write, buffer copy refreshed.
  void buffer_store(NodeId node, Payload payload, std::uint32_t batch = 0);
  bool buffer_contains(NodeId node) const;
  std::size_t buffer_size() const { return lru_.size(); }
  std::size_t buffer_capacity() const { return config_.buffer_capacity; }

  /// Charges `count` repetitions of a k-hop access pattern.
  void charge_pattern(AccessPattern pattern, std::size_t count, NodeId node = 0,
                      std::uint32_t batch = 0);

  const std::vector<IoLogEntry>& log() const { return log_; }
  double clock() const;
  IoCounters counters() const;
  const LatencyModel& latency() const { return config_.latency; }
  const StoreConfig& config() const { return config_; }
  std::size_t node_count() const { return node_count_; }

  /// CSV with header "op,tag,node,batch,time".
  void export_log_csv(std::ostream& out) const;

 private:
  Payload disk_payload(NodeId node) const;
  void check_node(NodeId node) const;
  void record(const IoLogEntry& entry);
  void insert_buffer(NodeId node, Payload payload);

  std::size_t node_count_;
  StoreConfig config_;
  mutable std::mutex mu_;
  std::vector<IoLogEntry> log_;
  double clock_ = 0.0;
  IoCounters counters_;

  std::list<NodeId> lru_;  // front = most recently used
  struct Slot {
    std::list<NodeId>::iterator position;
    Payload payload;
  };
  std::unordered_map<NodeId, Slot> buffer_;
  std::unordered_map<NodeId, Payload> written_;  // disk overrides
};

// Read/write plan handed to the cost optimizer. Deferred reads are recorded
// but excluded from the estimate.
struct IoPlanOp {
  IoOp op = IoOp::kDiskRead;
  NodeId node = 0;
  friend bool operator==(const IoPlanOp&, const IoPlanOp&) = default;
};

struct IoPlan {
  std::vector<IoPlanOp> ops;
  std::vector<NodeId> deferred_reads;

  std::size_t reads() const;
  std::size_t writes() const;
};

enum class OptimizeContext { kHighLoad, kLowCost };

class IoCostOptimizer {
 public:
  IoCostOptimizer(double read_cost = 5.0011, double write_cost = 1.0045,
                  std::size_t read_ceiling = 64);

  double read_cost() const { return read_cost_; }
  double write_cost() const { return write_cost_; }
  double load_factor() const { return load_factor_; }
  std::size_t read_ceiling() const { return read_ceiling_; }

  double estimate(std::size_t reads, std::size_t writes) const;
  double estimate(const IoPlan& plan) const;

  /// Scales the base costs by (1 + load). Not cumulative: each call starts
  /// from the costs given at construction.
  IoCostOptimizer& adjust(double load);

  /// kHighLoad: reads past the ceiling become deferred reads.
  /// kLowCost: duplicate-node reads merged, writes moved after reads.
  /// The estimate never increases.
  IoPlan optimize(IoPlan plan, OptimizeContext context) const;

 private:
  double base_read_cost_;
  double base_write_cost_;
  double read_cost_;
  double write_cost_;
  double load_factor_ = 0.0;
  std::size_t read_ceiling_;
};

}  // namespace gss
