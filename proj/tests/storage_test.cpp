// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <numeric>
#include <sstream>

#include "gss/storage.hpp"
#include "gtest/gtest.h"

namespace gss {
namespace {

constexpr double kReadMs = 5.0011;
constexpr double kWriteMs = 1.0045;
constexpr double kCacheMs = 0.0146;

StoreConfig unit_scale(std::size_t capacity = 2) {
  StoreConfig c;
  c.buffer_capacity = capacity;
  c.payload_dim = 8;
  c.latency.scale = 1.0;
  return c;
}

double log_sum(const TieredStore& s) {
  double total = 0.0;
  for (const IoLogEntry& e : s.log()) total += e.time;
  return total;
}

IoCounters log_counters(const std::vector<IoLogEntry>& log) {
  IoCounters c;
  for (const IoLogEntry& e : log) c.tally(e.op, e.tag);
  return c;
}

TEST(LatencyModel, Constants) {
  const LatencyModel m;
  EXPECT_EQ(m.disk_read, kReadMs);
  EXPECT_EQ(m.disk_write, kWriteMs);
  EXPECT_EQ(m.cache_access, kCacheMs);
  LatencyModel unit = m;
  unit.scale = 1.0;
  EXPECT_EQ(unit.charge(IoOp::kDiskRead), kReadMs);
  EXPECT_EQ(unit.charge(IoOp::kDiskWrite), kWriteMs);
  EXPECT_EQ(unit.charge(IoOp::kCacheAccess), kCacheMs);
}

TEST(LatencyModel, EnvironmentScale) {
  ::setenv("GSS_SIM_SCALE", "0.5", 1);
  EXPECT_EQ(LatencyModel::from_env().scale, 0.5);
  ::setenv("GSS_SIM_SCALE", "-1", 1);
  EXPECT_THROW(LatencyModel::from_env(), ConfigError);
  ::setenv("GSS_SIM_SCALE", "abc", 1);
  EXPECT_THROW(LatencyModel::from_env(), ConfigError);
  ::unsetenv("GSS_SIM_SCALE");
  EXPECT_EQ(LatencyModel::from_env().scale, LatencyModel{}.scale);
}

TEST(TieredStore, FreshStoreHasEmptyLog) {
  const TieredStore s(10, unit_scale());
  EXPECT_TRUE(s.log().empty());
  EXPECT_EQ(s.clock(), 0.0);
  EXPECT_EQ(s.counters(), IoCounters{});
}

TEST(TieredStore, HitCostsOneCacheAccess) {
  TieredStore s(10, unit_scale());
  const std::vector<NodeId> ab{0, 1};
  s.buffer_load(ab);
  const std::size_t before = s.log().size();
  const double clock = s.clock();
  s.buffer_get(0);
  ASSERT_EQ(s.log().size(), before + 1);
  EXPECT_EQ(s.log().back().op, IoOp::kCacheAccess);
  EXPECT_EQ(s.log().back().time, kCacheMs);
  EXPECT_NEAR(s.clock() - clock, kCacheMs, 1e-12);
  EXPECT_EQ(s.counters().cache_hits, 1u);
}

TEST(TieredStore, MissReadsFromDiskAndEvictsLru) {
  TieredStore s(10, unit_scale());
  const std::vector<NodeId> ab{0, 1};
  s.buffer_load(ab);
  s.buffer_get(0);  // 0 is now more recent than 1
  const double clock = s.clock();
  s.buffer_get(2);
  EXPECT_EQ(s.log().back().time, kReadMs);
  EXPECT_NEAR(s.clock() - clock, kReadMs, 1e-12);
  EXPECT_EQ(s.log().back().op, IoOp::kDiskRead);
  EXPECT_TRUE(s.buffer_contains(2));
  EXPECT_TRUE(s.buffer_contains(0));
  EXPECT_FALSE(s.buffer_contains(1));
  EXPECT_EQ(s.counters().cache_misses, 1u);
}

TEST(TieredStore, StoreWritesThrough) {
  TieredStore s(10, unit_scale());
  const TieredStore::Payload p(8, 7);
  const double clock = s.clock();
  s.buffer_store(3, p);
  EXPECT_DOUBLE_EQ(s.clock() - clock, kWriteMs);
  EXPECT_EQ(s.counters().disk_writes, 1u);
  EXPECT_EQ(s.buffer_get(3), p);
  // Evict 3 and read it back from disk.
  s.buffer_get(4);
  s.buffer_get(5);
  ASSERT_FALSE(s.buffer_contains(3));
  EXPECT_EQ(s.buffer_get(3), p);
}

TEST(TieredStore, PayloadsAreDeterministic) {
  TieredStore a(10, unit_scale());
  TieredStore b(10, unit_scale());
  EXPECT_EQ(a.buffer_get(6), b.buffer_get(6));
  EXPECT_EQ(a.buffer_get(6).size(), 8u);
}

TEST(TieredStore, BadArguments) {
  TieredStore s(4, unit_scale());
  EXPECT_THROW(s.buffer_get(4), LookupError);
  EXPECT_THROW(s.buffer_store(1, TieredStore::Payload(3)), ArgumentError);
}

TEST(TieredStore, AccessPatterns) {
  TieredStore s(4, unit_scale());
  s.charge_pattern(AccessPattern::kRetrieval, 3);
  EXPECT_EQ(s.counters().cache_hits, 3u);
  EXPECT_EQ(s.counters().disk_reads, 0u);
  EXPECT_EQ(s.counters().disk_writes, 0u);

  TieredStore t(4, unit_scale());
  t.charge_pattern(AccessPattern::kSampling, 1);
  EXPECT_EQ(t.counters().disk_reads, 1u);
  EXPECT_EQ(t.counters().disk_writes, 1u);
  EXPECT_DOUBLE_EQ(t.clock(), kReadMs + kWriteMs);

  TieredStore u(4, unit_scale());
  u.charge_pattern(AccessPattern::kResampling, 2);
  EXPECT_EQ(u.counters().disk_reads, 2u);
  EXPECT_EQ(u.log().front().tag, IoTag::kRefresh);

  const std::size_t before = u.log().size();
  for (auto p : {AccessPattern::kSampling, AccessPattern::kRetrieval,
                 AccessPattern::kResampling}) {
    u.charge_pattern(p, 0);
  }
  EXPECT_EQ(u.log().size(), before);
}

TEST(TieredStore, ClockAndCountersReconcileWithLog) {
  TieredStore s(50, unit_scale(4));
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const auto node = static_cast<NodeId>(uniform_below(rng, 50));
    switch (uniform_below(rng, 4)) {
      case 0:
        s.buffer_get(node, i);
        break;
      case 1:
        s.buffer_store(node, TieredStore::Payload(8, 1), i);
        break;
      case 2:
        s.charge(IoOp::kDiskRead, IoTag::kSample, node, i);
        break;
      default:
        s.charge_pattern(AccessPattern::kSampling, 2, node, i);
    }
  }
  EXPECT_DOUBLE_EQ(s.clock(), log_sum(s));
  EXPECT_EQ(s.counters(), log_counters(s.log()));
}

TEST(TieredStore, CommitAppendsBufferInOrder) {
  TieredStore s(10, unit_scale());
  IoBuffer buf(s.latency());
  buf.charge(IoOp::kDiskRead, IoTag::kInit, 1, 0);
  buf.charge(IoOp::kCacheAccess, IoTag::kSample, 2, 0);
  s.commit(buf);
  ASSERT_EQ(s.log().size(), 2u);
  EXPECT_EQ(s.log()[0].node, 1u);
  EXPECT_EQ(s.log()[1].op, IoOp::kCacheAccess);
  EXPECT_EQ(s.counters(), buf.counters());
  EXPECT_DOUBLE_EQ(s.clock(), kReadMs + kCacheMs);
}

TEST(TieredStore, LogCsvExport) {
  TieredStore s(10, unit_scale());
  s.charge(IoOp::kDiskRead, IoTag::kInit, 3, 0);
  std::ostringstream out;
  s.export_log_csv(out);
  EXPECT_EQ(out.str(), "op,tag,node,batch,time\ndisk_read,init,3,0,5.0011000000000001\n");
}

TEST(RemappingSink, TranslatesIds) {
  IoBuffer inner;
  const std::vector<NodeId> map{10, 20, 30};
  RemappingSink sink(&inner, map);
  sink.charge(IoOp::kDiskRead, IoTag::kSample, 2, 4);
  ASSERT_EQ(inner.entries().size(), 1u);
  EXPECT_EQ(inner.entries()[0].node, 30u);
  RemappingSink null_sink(nullptr, map);
  null_sink.charge(IoOp::kDiskRead, IoTag::kSample, 0, 0);
}

TEST(IoCostOptimizer, LinearEstimate) {
  const IoCostOptimizer opt;
  EXPECT_DOUBLE_EQ(opt.estimate(2, 1), 11.0067);
  EXPECT_EQ(opt.estimate(0, 0), 0.0);
}

TEST(IoCostOptimizer, AdjustScalesFromBase) {
  IoCostOptimizer opt;
  opt.adjust(0.0);
  EXPECT_EQ(opt.read_cost(), kReadMs);
  EXPECT_EQ(opt.write_cost(), kWriteMs);
  opt.adjust(1.0);
  EXPECT_DOUBLE_EQ(opt.read_cost(), 2 * kReadMs);
  EXPECT_DOUBLE_EQ(opt.write_cost(), 2 * kWriteMs);
  opt.adjust(1.0);  // not cumulative
  EXPECT_DOUBLE_EQ(opt.read_cost(), 2 * kReadMs);
  EXPECT_THROW(opt.adjust(-0.1), ArgumentError);
}

IoPlan make_plan(std::initializer_list<IoPlanOp> ops) {
  IoPlan p;
  p.ops = ops;
  return p;
}

TEST(IoCostOptimizer, HighLoadWithinCeilingUnchanged) {
  const IoCostOptimizer opt(kReadMs, kWriteMs, 4);
  const IoPlan plan = make_plan({{IoOp::kDiskRead, 1}, {IoOp::kDiskWrite, 2}});
  const IoPlan out = opt.optimize(plan, OptimizeContext::kHighLoad);
  EXPECT_EQ(out.ops, plan.ops);
  EXPECT_TRUE(out.deferred_reads.empty());
}

TEST(IoCostOptimizer, HighLoadDefersExcessReads) {
  const IoCostOptimizer opt(kReadMs, kWriteMs, 2);
  const IoPlan plan = make_plan({{IoOp::kDiskRead, 1},
                                 {IoOp::kDiskRead, 2},
                                 {IoOp::kDiskWrite, 9},
                                 {IoOp::kDiskRead, 3}});
  const IoPlan out = opt.optimize(plan, OptimizeContext::kHighLoad);
  EXPECT_EQ(out.reads(), 2u);
  EXPECT_EQ(out.writes(), 1u);
  EXPECT_EQ(out.deferred_reads, (std::vector<NodeId>{3}));
}

TEST(IoCostOptimizer, LowCostMergesDuplicateReads) {
  const IoCostOptimizer opt;
  const IoPlan plan = make_plan({{IoOp::kDiskWrite, 5},
                                 {IoOp::kDiskRead, 1},
                                 {IoOp::kDiskRead, 1},
                                 {IoOp::kDiskRead, 2}});
  const IoPlan out = opt.optimize(plan, OptimizeContext::kLowCost);
  EXPECT_EQ(out.reads(), 2u);
  EXPECT_EQ(out.writes(), 1u);
  EXPECT_LT(opt.estimate(out), opt.estimate(plan));
  EXPECT_EQ(out.ops.front().op, IoOp::kDiskRead);
}

TEST(IoCostOptimizer, EmptyPlan) {
  const IoCostOptimizer opt;
  for (auto ctx : {OptimizeContext::kHighLoad, OptimizeContext::kLowCost}) {
    const IoPlan out = opt.optimize({}, ctx);
    EXPECT_TRUE(out.ops.empty());
    EXPECT_EQ(opt.estimate(out), 0.0);
  }
}

}  // namespace
}  // namespace gss
