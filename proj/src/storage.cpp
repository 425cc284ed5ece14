// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "gss/storage.hpp"

#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <unordered_set>

namespace gss {

const char* to_string(IoOp op) {
  switch (op) {
    case IoOp::kDiskRead:
      return "disk_read";
    case IoOp::kDiskWrite:
      return "disk_write";
    case IoOp::kCacheAccess:
      return "cache_access";
  }
  return "?";
}

const char* to_string(IoTag tag) {
  switch (tag) {
    case IoTag::kInit:
      return "init";
    case IoTag::kRefresh:
      return "refresh";
    case IoTag::kFetch:
      return "fetch";
    case IoTag::kSample:
      return "sample";
    case IoTag::kBuffer:
      return "buffer";
  }
  return "?";
}

double LatencyModel::charge(IoOp op) const {
  switch (op) {
    case IoOp::kDiskRead:
      return disk_read * scale;
    case IoOp::kDiskWrite:
      return disk_write * scale;
    case IoOp::kCacheAccess:
      return cache_access * scale;
  }
  return 0.0;
}

LatencyModel LatencyModel::from_env(LatencyModel base) {
  if (const char* env = std::getenv("GSS_SIM_SCALE")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) {
      throw ConfigError(std::string("GSS_SIM_SCALE must be a positive number, got '") +
                        env + "'");
    }
    base.scale = v;
  }
  return base;
}

LatencyModel LatencyModel::from_env() { return from_env(LatencyModel{}); }

void IoCounters::tally(IoOp op, IoTag tag) {
  switch (op) {
    case IoOp::kDiskRead:
      ++disk_reads;
      if (tag == IoTag::kBuffer) ++cache_misses;
      break;
    case IoOp::kDiskWrite:
      ++disk_writes;
      break;
    case IoOp::kCacheAccess:
      ++cache_hits;
      break;
  }
}

IoCounters& IoCounters::operator+=(const IoCounters& o) {
  disk_reads += o.disk_reads;
  disk_writes += o.disk_writes;
  cache_hits += o.cache_hits;
  cache_misses += o.cache_misses;
  return *this;
}

void IoBuffer::charge(IoOp op, IoTag tag, NodeId node, std::uint32_t batch) {
  entries_.push_back({op, tag, node, batch, latency_.charge(op)});
  counters_.tally(op, tag);
}

void IoBuffer::append(const IoBuffer& other) {
  entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
  counters_ += other.counters_;
}

void IoBuffer::clear() {
  entries_.clear();
  counters_ = {};
}

TieredStore::TieredStore(std::size_t node_count, StoreConfig config)
    : node_count_(node_count), config_(config) {
  if (config_.buffer_capacity < 1) {
    throw ConfigError("buffer capacity must be at least 1");
  }
  if (!(config_.latency.scale > 0.0)) {
    throw ConfigError("latency scale must be positive");
  }
}

void TieredStore::record(const IoLogEntry& entry) {
  clock_ += entry.time;
  counters_.tally(entry.op, entry.tag);
  if (config_.keep_log) log_.push_back(entry);
}

void TieredStore::charge(IoOp op, IoTag tag, NodeId node, std::uint32_t batch) {
  std::lock_guard lock(mu_);
  record({op, tag, node, batch, config_.latency.charge(op)});
}

void TieredStore::commit(const IoBuffer& buffer) {
  std::lock_guard lock(mu_);
  for (const IoLogEntry& e : buffer.entries()) record(e);
}

double TieredStore::clock() const {
  std::lock_guard lock(mu_);
  return clock_;
}

IoCounters TieredStore::counters() const {
  std::lock_guard lock(mu_);
  return counters_;
}

void TieredStore::check_node(NodeId node) const {
  if (node >= node_count_) {
    throw LookupError("node " + std::to_string(node) + " not on disk (" +
                      std::to_string(node_count_) + " nodes)");
  }
}

TieredStore::Payload TieredStore::disk_payload(NodeId node) const {
  if (auto it = written_.find(node); it != written_.end()) return it->second;
  Rng rng(derive_seed(config_.payload_seed, node));
  Payload p(config_.payload_dim);
  for (auto& byte : p) byte = static_cast<std::uint8_t>(rng() & 0xff);
  return p;
}

void TieredStore::insert_buffer(NodeId node, Payload payload) {
  if (auto it = buffer_.find(node); it != buffer_.end()) {
    lru_.splice(lru_.begin(), lru_, it->second.position);
    it->second.payload = std::move(payload);
    return;
  }
  if (lru_.size() >= config_.buffer_capacity) {
    buffer_.erase(lru_.back());
    lru_.pop_back();
  }
  lru_.push_front(node);
  buffer_.emplace(node, Slot{lru_.begin(), std::move(payload)});
}

void TieredStore::buffer_load(std::span<const NodeId> nodes,
                              std::uint32_t batch) {
  for (NodeId node : nodes) check_node(node);
  std::lock_guard lock(mu_);
  for (NodeId node : nodes) {
    if (auto it = buffer_.find(node); it != buffer_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second.position);
      continue;
    }
    record({IoOp::kDiskRead, IoTag::kInit, node, batch,
            config_.latency.charge(IoOp::kDiskRead)});
    insert_buffer(node, disk_payload(node));
  }
}

TieredStore::Payload TieredStore::buffer_get(NodeId node, std::uint32_t batch) {
  check_node(node);
  std::lock_guard lock(mu_);
  if (auto it = buffer_.find(node); it != buffer_.end()) {
    record({IoOp::kCacheAccess, IoTag::kBuffer, node, batch,
            config_.latency.charge(IoOp::kCacheAccess)});
    lru_.splice(lru_.begin(), lru_, it->second.position);
    return it->second.payload;
  }
  record({IoOp::kDiskRead, IoTag::kBuffer, node, batch,
          config_.latency.charge(IoOp::kDiskRead)});
  Payload p = disk_payload(node);
  insert_buffer(node, p);
  return p;
}

void TieredStore::buffer_store(NodeId node, Payload payload,
                               std::uint32_t batch) {
  check_node(node);
  if (payload.size() != config_.payload_dim) {
    throw ArgumentError("payload of " + std::to_string(payload.size()) +
                        " bytes, expected " +
                        std::to_string(config_.payload_dim));
  }
  std::lock_guard lock(mu_);
  record({IoOp::kDiskWrite, IoTag::kBuffer, node, batch,
          config_.latency.charge(IoOp::kDiskWrite)});
  written_[node] = payload;
  insert_buffer(node, std::move(payload));
}

bool TieredStore::buffer_contains(NodeId node) const {
  std::lock_guard lock(mu_);
  return buffer_.contains(node);
}

void TieredStore::charge_pattern(AccessPattern pattern, std::size_t count,
                                 NodeId node, std::uint32_t batch) {
  for (std::size_t i = 0; i < count; ++i) {
    switch (pattern) {
      case AccessPattern::kSampling:
        charge(IoOp::kDiskRead, IoTag::kSample, node, batch);
        charge(IoOp::kDiskWrite, IoTag::kSample, node, batch);
        break;
      case AccessPattern::kResampling:
        charge(IoOp::kDiskRead, IoTag::kRefresh, node, batch);
        charge(IoOp::kDiskWrite, IoTag::kRefresh, node, batch);
        break;
      case AccessPattern::kRetrieval:
        charge(IoOp::kCacheAccess, IoTag::kSample, node, batch);
        break;
    }
  }
}

void TieredStore::export_log_csv(std::ostream& out) const {
  std::lock_guard lock(mu_);
  out << "op,tag,node,batch,time\n";
  const auto precision = out.precision(17);
  for (const IoLogEntry& e : log_) {
    out << to_string(e.op) << ',' << to_string(e.tag) << ',' << e.node << ','
        << e.batch << ',' << e.time << '\n';
  }
  out.precision(precision);
}

std::size_t IoPlan::reads() const {
  return static_cast<std::size_t>(std::count_if(
      ops.begin(), ops.end(),
      [](const IoPlanOp& o) { return o.op == IoOp::kDiskRead; }));
}

std::size_t IoPlan::writes() const {
  return static_cast<std::size_t>(std::count_if(
      ops.begin(), ops.end(),
      [](const IoPlanOp& o) { return o.op == IoOp::kDiskWrite; }));
}

IoCostOptimizer::IoCostOptimizer(double read_cost, double write_cost,
                                 std::size_t read_ceiling)
    : base_read_cost_(read_cost),
      base_write_cost_(write_cost),
      read_cost_(read_cost),
      write_cost_(write_cost),
      read_ceiling_(read_ceiling) {
  if (!(read_cost > 0.0) || !(write_cost > 0.0)) {
    throw ConfigError("I/O costs must be positive");
  }
}

double IoCostOptimizer::estimate(std::size_t reads, std::size_t writes) const {
  return static_cast<double>(reads) * read_cost_ +
         static_cast<double>(writes) * write_cost_;
}

double IoCostOptimizer::estimate(const IoPlan& plan) const {
  return estimate(plan.reads(), plan.writes());
}

IoCostOptimizer& IoCostOptimizer::adjust(double load) {
  if (!(load >= 0.0)) throw ArgumentError("load must be non-negative");
  load_factor_ = load;
  read_cost_ = base_read_cost_ * (1.0 + load);
  write_cost_ = base_write_cost_ * (1.0 + load);
  return *this;
}

IoPlan IoCostOptimizer::optimize(IoPlan plan, OptimizeContext context) const {
  switch (context) {
    case OptimizeContext::kHighLoad: {
      std::size_t reads = 0;
      std::vector<IoPlanOp> kept;
      kept.reserve(plan.ops.size());
      for (const IoPlanOp& op : plan.ops) {
        if (op.op == IoOp::kDiskRead && ++reads > read_ceiling_) {
          plan.deferred_reads.push_back(op.node);
        } else {
          kept.push_back(op);
        }
      }
      plan.ops = std::move(kept);
      break;
    }
    case OptimizeContext::kLowCost: {
      std::vector<IoPlanOp> reads;
      std::vector<IoPlanOp> writes;
      std::unordered_set<NodeId> seen;
      for (const IoPlanOp& op : plan.ops) {
        if (op.op == IoOp::kDiskRead) {
          if (seen.insert(op.node).second) reads.push_back(op);
        } else {
          writes.push_back(op);
        }
      }
      plan.ops = std::move(reads);
      plan.ops.insert(plan.ops.end(), writes.begin(), writes.end());
      break;
    }
  }
  return plan;
}

}  // namespace gss
