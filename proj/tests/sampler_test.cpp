// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "boost/math/distributions/chi_squared.hpp"
#include "gss/sampler.hpp"
#include "gtest/gtest.h"
#include "oracles.hpp"

namespace gss {
namespace {

using testing::AdjacencyOracle;
using testing::RawGraph;

constexpr StrategyKind kAllKinds[] = {
    StrategyKind::kFbl,          StrategyKind::kFcr,
    StrategyKind::kFcrSc,        StrategyKind::kOtfRefreshOnly,
    StrategyKind::kOtfFetchOnly, StrategyKind::kOtfPrPf,
    StrategyKind::kOtfPrFf,      StrategyKind::kOtfSc,
};

StrategyConfig make_config(StrategyKind kind, std::vector<std::size_t> fanouts = {5, 5}) {
  StrategyConfig c;
  c.kind = kind;
  c.fanouts = std::move(fanouts);
  return c;
}

std::vector<NodeId> draw_seeds(Rng& rng, std::size_t n, std::size_t count) {
  std::vector<NodeId> all(n);
  std::iota(all.begin(), all.end(), 0);
  all.resize(partial_shuffle(all, count, rng));
  return all;
}

struct BatchTrace {
  IoBuffer io;
  SampledBlocks blocks;
};

// Runs `batches` batches on one sampler; batch t uses seeds(t).
template <typename SeedFn>
std::vector<BatchTrace> run(BlockSampler& s, std::uint32_t batches, SeedFn seeds) {
  std::vector<BatchTrace> out(batches);
  for (std::uint32_t t = 0; t < batches; ++t) {
    const std::vector<NodeId> batch_seeds = seeds(t);
    out[t].blocks = s.sample(batch_seeds, {t, &out[t].io});
  }
  return out;
}

std::size_t count(const IoBuffer& b, IoOp op, IoTag tag) {
  return static_cast<std::size_t>(std::count_if(
      b.entries().begin(), b.entries().end(),
      [&](const IoLogEntry& e) { return e.op == op && e.tag == tag; }));
}

std::set<std::pair<NodeId, NodeId>> edge_set(const Block& b) {
  std::set<std::pair<NodeId, NodeId>> out;
  for (const Edge& e : b.edges) out.insert({e.src, e.dst});
  return out;
}

Graph path3() {
  const std::vector<Edge> edges{{0, 1}, {1, 2}};
  return build_graph(edges, 3, {.symmetrize = true});
}

TEST(Strategy, NamesRoundTrip) {
  for (StrategyKind k : kAllKinds) {
    EXPECT_EQ(parse_strategy(to_string(k)), k);
  }
  EXPECT_EQ(parse_strategy("otf_pr_ff"), StrategyKind::kOtfPrFf);
  EXPECT_THROW(parse_strategy("LRU"), ArgumentError);
}

TEST(Strategy, ValidateRanges) {
  StrategyConfig c = make_config(StrategyKind::kOtfPrPf);
  c.validate();
  c.refresh_rate = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = make_config(StrategyKind::kFcr);
  c.amp_rate = 0.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = make_config(StrategyKind::kFcr);
  c.period = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = make_config(StrategyKind::kFcr, {});
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Strategy, ParamsPerKind) {
  EXPECT_TRUE(strategy_params(StrategyKind::kFbl).empty());
  const auto sc = strategy_params(StrategyKind::kOtfSc);
  EXPECT_NE(std::find(sc.begin(), sc.end(), StrategyParam::kSharedRho), sc.end());
  EXPECT_EQ(std::find(sc.begin(), sc.end(), StrategyParam::kFetchRate), sc.end());
}

TEST(Sampler, PathForcedEdgesForEveryKind) {
  const Graph g = path3();
  for (StrategyKind k : kAllKinds) {
    Sampler s(g, make_config(k, {2}));
    const std::vector<NodeId> seeds{1};
    const SampledBlocks out = s.sample(seeds, {0, nullptr});
    ASSERT_EQ(out.blocks.size(), 1u);
    EXPECT_EQ(edge_set(out.blocks[0]),
              (std::set<std::pair<NodeId, NodeId>>{{0, 1}, {2, 1}}))
        << to_string(k);
    EXPECT_EQ(out.blocks[0].frontier, (std::vector<NodeId>{0, 2}));
  }
}

TEST(Sampler, ZeroFanoutGivesEmptyBlock) {
  const Graph g = path3();
  for (StrategyKind k : {StrategyKind::kFbl, StrategyKind::kFcr}) {
    Sampler s(g, make_config(k, {0}));
    const std::vector<NodeId> seeds{1};
    const SampledBlocks out = s.sample(seeds, {0, nullptr});
    EXPECT_TRUE(out.blocks[0].edges.empty());
    EXPECT_TRUE(out.blocks[0].frontier.empty());
  }
}

TEST(Sampler, FblDiskReadsEqualSampledEdges) {
  const Graph g = generate_synthetic(ErdosRenyi{100, 0.2}, 1);
  Sampler s(g, make_config(StrategyKind::kFbl));
  Rng rng(2);
  const auto trace = run(s, 5, [&](std::uint32_t) { return draw_seeds(rng, 100, 8); });
  for (const BatchTrace& b : trace) {
    EXPECT_EQ(b.io.counters().disk_reads, b.blocks.edge_count());
    EXPECT_EQ(b.io.counters().cache_hits, 0u);
  }
}

TEST(Sampler, InvalidSeedThrows) {
  const Graph g = path3();
  Sampler s(g, make_config(StrategyKind::kFbl, {2}));
  const std::vector<NodeId> seeds{3};
  EXPECT_THROW(s.sample(seeds, {0, nullptr}), ArgumentError);
}

TEST(Sampler, EmptySeedsAreAllowed) {
  const Graph g = path3();
  Sampler s(g, make_config(StrategyKind::kOtfRefreshOnly, {2, 2}));
  const SampledBlocks out = s.sample({}, {0, nullptr});
  EXPECT_EQ(out.edge_count(), 0u);
}

TEST(Sampler, BlocksAreValidOnRandomInstances) {
  Rng rng(606);
  for (int trial = 0; trial < 120; ++trial) {
    RawGraph raw = testing::random_raw_graph(rng, 80, 8);
    raw.symmetrize = true;
    const Graph g = raw.build();
    const AdjacencyOracle adj(raw);
    const StrategyKind kind = kAllKinds[uniform_below(rng, std::size(kAllKinds))];
    std::vector<std::size_t> fanouts(1 + uniform_below(rng, 3));
    for (auto& f : fanouts) f = uniform_below(rng, 7);
    StrategyConfig cfg = make_config(kind, fanouts);
    cfg.amp_rate = 1.0 + uniform_unit(rng) * 2.0;
    cfg.period = 1 + static_cast<std::uint32_t>(uniform_below(rng, 4));
    cfg.seed = rng();
    Sampler s(g, cfg);
    for (std::uint32_t t = 0; t < 6; ++t) {
      const auto seeds = draw_seeds(rng, g.node_count(), 1 + uniform_below(rng, 10));
      const SampledBlocks out = s.sample(seeds, {t, nullptr});
      const auto bad = testing::check_blocks(adj, seeds, fanouts, out);
      ASSERT_TRUE(bad.empty()) << to_string(kind) << ": " << bad.front();
    }
  }
}

TEST(Sampler, FblSelectionPassesChiSquare) {
  const Graph g = generate_synthetic(ErdosRenyi{200, 0.1}, 0);
  NodeId v = 0;
  while (distinct_neighbors(g, v).size() != 20) ++v;
  Sampler s(g, make_config(StrategyKind::kFbl, {5}));
  std::map<NodeId, int> hits;
  constexpr int kTrials = 10000;
  const std::vector<NodeId> seeds{v};
  for (std::uint32_t t = 0; t < kTrials; ++t) {
    const SampledBlocks out = s.sample(seeds, {t, nullptr});
    for (const Edge& e : out.blocks[0].edges) ++hits[e.src];
  }
  const double expected = kTrials * 5.0 / 20.0;
  double chi2 = 0.0;
  for (NodeId u : distinct_neighbors(g, v)) {
    chi2 += (hits[u] - expected) * (hits[u] - expected) / expected;
  }
  const boost::math::chi_squared dist(19);
  EXPECT_GT(1.0 - boost::math::cdf(dist, chi2), 0.01);
}

TEST(Fcr, RefreshesAtMultiplesOfPeriod) {
  const Graph g = generate_synthetic(ErdosRenyi{60, 0.1}, 3);
  StrategyConfig cfg = make_config(StrategyKind::kFcr, {3});
  cfg.period = 3;
  Sampler s(g, cfg);
  Rng rng(1);
  const auto trace = run(s, 7, [&](std::uint32_t) { return draw_seeds(rng, 60, 5); });
  std::vector<std::uint32_t> refresh_batches;
  for (std::uint32_t t = 0; t < 7; ++t) {
    if (count(trace[t].io, IoOp::kDiskRead, IoTag::kRefresh) > 0) refresh_batches.push_back(t);
    EXPECT_EQ(count(trace[t].io, IoOp::kDiskRead, IoTag::kSample), 0u);
  }
  EXPECT_EQ(refresh_batches, (std::vector<std::uint32_t>{0, 3, 6}));
}

TEST(Fcr, PeriodOneRefreshesEveryBatchAtInitSize) {
  const Graph g = generate_synthetic(ErdosRenyi{60, 0.1}, 3);
  StrategyConfig cfg = make_config(StrategyKind::kFcr, {3, 2});
  cfg.period = 1;
  Sampler s(g, cfg);
  Rng rng(1);
  const auto trace = run(s, 5, [&](std::uint32_t) { return draw_seeds(rng, 60, 5); });
  const std::size_t init = count(trace[0].io, IoOp::kDiskRead, IoTag::kInit);
  EXPECT_EQ(init, s.cache()->total_entries());
  for (const BatchTrace& b : trace) {
    EXPECT_EQ(count(b.io, IoOp::kDiskRead, IoTag::kRefresh), init);
  }
}

TEST(Fcr, FewerDiskReadsThanFbl) {
  const Graph g = generate_synthetic(ErdosRenyi{500, 0.05}, 4);
  Sampler fcr(g, make_config(StrategyKind::kFcr));
  Sampler fbl(g, make_config(StrategyKind::kFbl));
  const auto seeds = [](std::uint32_t t) {
    Rng rng(derive_seed(9, t));
    return draw_seeds(rng, 500, 64);
  };
  std::uint64_t fcr_reads = 0;
  std::uint64_t fbl_reads = 0;
  for (const auto& b : run(fcr, 100, seeds)) fcr_reads += b.io.counters().disk_reads;
  for (const auto& b : run(fbl, 100, seeds)) fbl_reads += b.io.counters().disk_reads;
  EXPECT_LT(fcr_reads, fbl_reads);
}

TEST(OtfRefresh, ZeroGammaReadsOnlyAtInit) {
  const Graph g = generate_synthetic(ErdosRenyi{80, 0.1}, 5);
  StrategyConfig cfg = make_config(StrategyKind::kOtfRefreshOnly);
  cfg.refresh_rate = 0.0;
  cfg.period = 2;
  Sampler s(g, cfg);
  Rng rng(1);
  const auto trace = run(s, 10, [&](std::uint32_t) { return draw_seeds(rng, 80, 8); });
  EXPECT_EQ(trace[0].io.counters().disk_reads,
            count(trace[0].io, IoOp::kDiskRead, IoTag::kInit));
  for (std::uint32_t t = 1; t < 10; ++t) EXPECT_EQ(trace[t].io.counters().disk_reads, 0u);
}

TEST(OtfRefresh, FullGammaPeriodOneMatchesFcrReads) {
  const Graph g = generate_synthetic(ErdosRenyi{80, 0.1}, 5);
  StrategyConfig otf = make_config(StrategyKind::kOtfRefreshOnly);
  otf.refresh_rate = 1.0;
  otf.period = 1;
  StrategyConfig fcr = make_config(StrategyKind::kFcr);
  fcr.period = 1;
  Sampler a(g, otf);
  Sampler b(g, fcr);
  const auto seeds = [](std::uint32_t t) {
    Rng rng(derive_seed(1, t));
    return draw_seeds(rng, 80, 8);
  };
  const auto ta = run(a, 8, seeds);
  const auto tb = run(b, 8, seeds);
  for (std::uint32_t t = 0; t < 8; ++t) {
    EXPECT_EQ(ta[t].io.counters().disk_reads, tb[t].io.counters().disk_reads) << t;
  }
}

TEST(OtfRefresh, RefreshReadsMatchPartialCounts) {
  const Graph g = generate_synthetic(ErdosRenyi{300, 0.03}, 6);
  StrategyConfig cfg = make_config(StrategyKind::kOtfRefreshOnly, {5, 5, 5});
  Sampler s(g, cfg);
  Rng rng(2);
  const auto trace = run(s, 200, [&](std::uint32_t) { return draw_seeds(rng, 300, 16); });
  const LayeredCache& c = *s.cache();
  std::size_t per_event = 0;
  for (std::size_t l = 0; l < c.layer_count(); ++l) {
    for (NodeId v = 0; v < 300; ++v) {
      per_event += static_cast<std::size_t>(std::ceil(0.15 * c.entries(l, v).size() - 1e-9));
    }
  }
  std::size_t refresh_reads = 0;
  for (std::uint32_t t = 0; t < 200; ++t) {
    const std::size_t r = count(trace[t].io, IoOp::kDiskRead, IoTag::kRefresh);
    refresh_reads += r;
    if (t % 50 != 0) EXPECT_EQ(trace[t].io.counters().disk_reads, 0u) << t;
  }
  EXPECT_EQ(refresh_reads, 4 * per_event);
}

TEST(OtfFetch, FetchBatchesFollowFetchPeriod) {
  const Graph g = generate_synthetic(ErdosRenyi{100, 0.1}, 7);
  StrategyConfig cfg = make_config(StrategyKind::kOtfFetchOnly);
  cfg.fetch_period = 4;
  Sampler s(g, cfg);
  Rng rng(3);
  const auto trace = run(s, 8, [&](std::uint32_t) { return draw_seeds(rng, 100, 8); });
  std::vector<std::uint32_t> fetch_batches;
  for (std::uint32_t t = 0; t < 8; ++t) {
    if (count(trace[t].io, IoOp::kDiskRead, IoTag::kFetch) > 0) fetch_batches.push_back(t);
  }
  EXPECT_EQ(fetch_batches, (std::vector<std::uint32_t>{0, 4}));
}

TEST(OtfFetch, ZeroDeltaMatchesCacheSampling) {
  const Graph g = generate_synthetic(ErdosRenyi{100, 0.1}, 7);
  StrategyConfig fetch = make_config(StrategyKind::kOtfFetchOnly);
  fetch.fetch_rate = 0.0;
  StrategyConfig cached = make_config(StrategyKind::kOtfRefreshOnly);
  cached.refresh_rate = 0.0;
  Sampler a(g, fetch);
  Sampler b(g, cached);
  const auto seeds = [](std::uint32_t t) {
    Rng rng(derive_seed(2, t));
    return draw_seeds(rng, 100, 8);
  };
  const auto ta = run(a, 6, seeds);
  const auto tb = run(b, 6, seeds);
  for (std::uint32_t t = 0; t < 6; ++t) {
    for (std::size_t i = 0; i < ta[t].blocks.blocks.size(); ++i) {
      EXPECT_EQ(ta[t].blocks.blocks[i].edges, tb[t].blocks.blocks[i].edges);
    }
    EXPECT_EQ(ta[t].io.counters(), tb[t].io.counters());
  }
}

TEST(OtfFetch, HalfDeltaTwoDiskReadsPerSeed) {
  const Graph g = generate_synthetic(ErdosRenyi{200, 0.1}, 0);
  std::vector<NodeId> deg20;
  for (NodeId v = 0; v < 200; ++v) {
    if (distinct_neighbors(g, v).size() == 20) deg20.push_back(v);
  }
  ASSERT_GE(deg20.size(), 4u);
  StrategyConfig cfg = make_config(StrategyKind::kOtfFetchOnly, {4});
  cfg.fetch_rate = 0.5;
  cfg.fetch_period = 2;
  Sampler s(g, cfg);
  const auto trace = run(s, 4, [&](std::uint32_t) { return deg20; });
  for (std::uint32_t t : {0u, 2u}) {
    std::map<NodeId, int> per_seed;
    for (const IoLogEntry& e : trace[t].io.entries()) {
      if (e.op == IoOp::kDiskRead && e.tag == IoTag::kFetch) ++per_seed[e.node];
    }
    for (NodeId v : deg20) EXPECT_EQ(per_seed[v], 2) << "batch " << t << " seed " << v;
  }
}

TEST(OtfPartialFetch, NoRefreshNoFetchIsCacheSampling) {
  const Graph g = generate_synthetic(ErdosRenyi{100, 0.1}, 8);
  StrategyConfig pf = make_config(StrategyKind::kOtfPrPf);
  pf.refresh_rate = 0.0;
  pf.fetch_rate = 0.0;
  StrategyConfig ro = make_config(StrategyKind::kOtfRefreshOnly);
  ro.refresh_rate = 0.0;
  Sampler a(g, pf);
  Sampler b(g, ro);
  const auto seeds = [](std::uint32_t t) {
    Rng rng(derive_seed(3, t));
    return draw_seeds(rng, 100, 8);
  };
  const auto ta = run(a, 5, seeds);
  const auto tb = run(b, 5, seeds);
  for (std::uint32_t t = 0; t < 5; ++t) {
    EXPECT_EQ(ta[t].blocks.blocks.back().edges, tb[t].blocks.blocks.back().edges);
    EXPECT_EQ(ta[t].io.counters(), tb[t].io.counters());
  }
}

TEST(OtfPartialFetch, FullRefreshAndFetchReadAtLeastFbl) {
  const Graph g = generate_synthetic(ErdosRenyi{100, 0.1}, 8);
  StrategyConfig pf = make_config(StrategyKind::kOtfPrPf);
  pf.refresh_rate = 1.0;
  pf.fetch_rate = 1.0;
  pf.period = 1;
  Sampler a(g, pf);
  Sampler b(g, make_config(StrategyKind::kFbl));
  const auto seeds = [](std::uint32_t t) {
    Rng rng(derive_seed(4, t));
    return draw_seeds(rng, 100, 8);
  };
  const auto ta = run(a, 5, seeds);
  const auto tb = run(b, 5, seeds);
  for (std::uint32_t t = 0; t < 5; ++t) {
    EXPECT_GE(ta[t].io.counters().disk_reads, tb[t].io.counters().disk_reads);
  }
}

TEST(OtfPartialFetch, RefreshAndFetchAreTaggedSeparately) {
  const Graph g = generate_synthetic(ErdosRenyi{100, 0.1}, 8);
  StrategyConfig pf = make_config(StrategyKind::kOtfPrPf);
  pf.period = 2;
  Sampler s(g, pf);
  Rng rng(5);
  const auto trace = run(s, 4, [&](std::uint32_t) { return draw_seeds(rng, 100, 8); });
  EXPECT_GT(count(trace[2].io, IoOp::kDiskRead, IoTag::kRefresh), 0u);
  EXPECT_GT(count(trace[2].io, IoOp::kDiskRead, IoTag::kFetch), 0u);
  EXPECT_EQ(count(trace[1].io, IoOp::kDiskRead, IoTag::kRefresh), 0u);
  EXPECT_GT(count(trace[1].io, IoOp::kDiskRead, IoTag::kFetch), 0u);
}

TEST(OtfPartialFullFetch, NoDiskReadsBetweenRefreshes) {
  const Graph g = generate_synthetic(ErdosRenyi{150, 0.06}, 9);
  Sampler s(g, make_config(StrategyKind::kOtfPrFf));
  Rng rng(6);
  const auto trace = run(s, 120, [&](std::uint32_t) { return draw_seeds(rng, 150, 8); });
  for (std::uint32_t t = 0; t < 120; ++t) {
    if (t % 50 != 0) EXPECT_EQ(trace[t].io.counters().disk_reads, 0u) << t;
  }
}

TEST(OtfPartialFullFetch, ChargesWholeCachedList) {
  const Graph g = generate_synthetic(ErdosRenyi{150, 0.06}, 9);
  Sampler s(g, make_config(StrategyKind::kOtfPrFf, {3}));
  const std::vector<NodeId> seeds{4, 9};
  IoBuffer first;
  s.sample(seeds, {0, &first});
  IoBuffer second;
  const SampledBlocks out = s.sample(seeds, {1, &second});
  const std::size_t listed = s.cache()->entries(0, 4).size() + s.cache()->entries(0, 9).size();
  EXPECT_EQ(second.counters().cache_hits, listed);
  EXPECT_EQ(out.memory_entries, listed);
}

// Shared kinds driven by one consumer replay the non-shared trace.
TEST(SharedCacheKinds, SingleConsumerMatchesNonShared) {
  const Graph g = generate_synthetic(ErdosRenyi{200, 0.04}, 10);
  const std::pair<StrategyKind, StrategyKind> pairs[] = {
      {StrategyKind::kFcrSc, StrategyKind::kFcr},
      {StrategyKind::kOtfSc, StrategyKind::kOtfRefreshOnly},
  };
  const SeedSource seeds = [](std::uint32_t t) {
    Rng rng(derive_seed(5, t));
    return draw_seeds(rng, 200, 16);
  };
  for (const auto& [shared, plain] : pairs) {
    StrategyConfig a = make_config(shared);
    a.period = 7;
    StrategyConfig b = a;
    b.kind = plain;
    TieredStore sa(200);
    TieredStore sb(200);
    run_consumers(g, a, {.consumers = 1, .batches = 30}, seeds, sa);
    run_consumers(g, b, {.consumers = 1, .batches = 30}, seeds, sb);
    ASSERT_EQ(sa.log().size(), sb.log().size()) << to_string(shared);
    for (std::size_t i = 0; i < sa.log().size(); ++i) {
      const IoLogEntry& x = sa.log()[i];
      const IoLogEntry& y = sb.log()[i];
      ASSERT_TRUE(x.op == y.op && x.tag == y.tag && x.node == y.node && x.batch == y.batch)
          << to_string(shared) << " entry " << i;
    }
  }
}

TEST(SharedCacheKinds, FourConsumersShareRefreshEvents) {
  const Graph g = generate_synthetic(ErdosRenyi{300, 0.03}, 11);
  const SeedSource seeds = [](std::uint32_t t) {
    Rng rng(derive_seed(6, t));
    return draw_seeds(rng, 300, 16);
  };
  StrategyConfig shared = make_config(StrategyKind::kFcrSc);
  StrategyConfig plain = make_config(StrategyKind::kFcr);
  TieredStore s1(300);
  TieredStore s2(300);
  const GroupResult a = run_consumers(g, shared, {.consumers = 4, .batches = 100}, seeds, s1);
  run_consumers(g, plain, {.consumers = 4, .batches = 100}, seeds, s2);
  EXPECT_EQ(a.refresh_events, 2u);
  EXPECT_LE(s1.counters().disk_reads, s2.counters().disk_reads);
}

TEST(RunConsumers, DeterministicAcrossRuns) {
  const Graph g = generate_synthetic(ErdosRenyi{300, 0.03}, 12);
  const SeedSource seeds = [](std::uint32_t t) {
    Rng rng(derive_seed(7, t));
    return draw_seeds(rng, 300, 16);
  };
  for (StrategyKind k : {StrategyKind::kOtfSc, StrategyKind::kOtfPrPf}) {
    StrategyConfig cfg = make_config(k);
    cfg.period = 5;
    TieredStore a(300);
    TieredStore b(300);
    const GroupResult ra = run_consumers(g, cfg, {.consumers = 4, .batches = 40}, seeds, a);
    const GroupResult rb = run_consumers(g, cfg, {.consumers = 4, .batches = 40}, seeds, b);
    ASSERT_EQ(ra.records.size(), 40u);
    EXPECT_EQ(a.clock(), b.clock());
    for (std::size_t i = 0; i < 40; ++i) {
      EXPECT_EQ(ra.records[i].batch, i);
      EXPECT_EQ(ra.records[i].counters, rb.records[i].counters);
      EXPECT_EQ(ra.records[i].edges, rb.records[i].edges);
    }
  }
}

TEST(RunConsumers, RecordsReconcileWithStore) {
  const Graph g = generate_synthetic(ErdosRenyi{300, 0.03}, 12);
  const SeedSource seeds = [](std::uint32_t t) {
    Rng rng(derive_seed(8, t));
    return draw_seeds(rng, 300, 16);
  };
  StrategyConfig cfg = make_config(StrategyKind::kOtfSc);
  cfg.period = 4;
  TieredStore store(300);
  const GroupResult r = run_consumers(g, cfg, {.consumers = 3, .batches = 25}, seeds, store);
  IoCounters sum;
  for (const BatchRecord& rec : r.records) sum += rec.counters;
  EXPECT_EQ(sum, store.counters());
}

TEST(RunConsumers, SharedDualWithManyConsumersRejected) {
  const Graph g = generate_synthetic(ErdosRenyi{50, 0.1}, 1);
  TieredStore store(50);
  const SeedSource seeds = [](std::uint32_t) { return std::vector<NodeId>{0}; };
  EXPECT_THROW(run_consumers(g, make_config(StrategyKind::kOtfSc),
                             {.consumers = 2, .batches = 2, .theta = 3}, seeds, store),
               ConfigError);
}

TEST(Dual, AllSparseEqualsFbl) {
  const Graph g = generate_synthetic(ErdosRenyi{120, 0.05}, 13);
  const auto deg = total_degree(g).degrees;
  const auto max_deg = static_cast<std::int64_t>(*std::max_element(deg.begin(), deg.end()));
  DualSampler dual(g, max_deg, make_config(StrategyKind::kOtfPrFf));
  Sampler fbl(g, make_config(StrategyKind::kFbl));
  const auto seeds = [](std::uint32_t t) {
    Rng rng(derive_seed(9, t));
    return draw_seeds(rng, 120, 10);
  };
  const auto ta = run(dual, 5, seeds);
  const auto tb = run(fbl, 5, seeds);
  for (std::uint32_t t = 0; t < 5; ++t) {
    for (std::size_t i = 0; i < 2; ++i) {
      EXPECT_EQ(edge_set(ta[t].blocks.blocks[i]), edge_set(tb[t].blocks.blocks[i]));
    }
    EXPECT_EQ(ta[t].io.counters(), tb[t].io.counters());
  }
}

TEST(Dual, AllDenseEqualsDenseStrategy) {
  const Graph g = generate_synthetic(ErdosRenyi{120, 0.05}, 13);
  DualSampler dual(g, -1, make_config(StrategyKind::kOtfRefreshOnly));
  Sampler plain(g, make_config(StrategyKind::kOtfRefreshOnly));
  const auto seeds = [](std::uint32_t t) {
    Rng rng(derive_seed(10, t));
    return draw_seeds(rng, 120, 10);
  };
  const auto ta = run(dual, 5, seeds);
  const auto tb = run(plain, 5, seeds);
  for (std::uint32_t t = 0; t < 5; ++t) {
    for (std::size_t i = 0; i < 2; ++i) {
      EXPECT_EQ(edge_set(ta[t].blocks.blocks[i]), edge_set(tb[t].blocks.blocks[i]));
    }
    EXPECT_EQ(ta[t].io.counters(), tb[t].io.counters());
  }
}

TEST(Dual, EdgesStayInsideOnePartition) {
  const Graph g = generate_synthetic(PreferentialAttachment{2000, 5}, 14);
  DualSampler dual(g, 20, make_config(StrategyKind::kOtfPrFf, {5, 5, 5}));
  const SplitResult& split = dual.split();
  const std::set<NodeId> dense(split.dense_nodes.begin(), split.dense_nodes.end());
  Rng rng(11);
  for (std::uint32_t t = 0; t < 20; ++t) {
    const auto seeds = draw_seeds(rng, 2000, 64);
    const SampledBlocks out = dual.sample(seeds, {t, nullptr});
    for (const Block& b : out.blocks) {
      for (const Edge& e : b.edges) {
        ASSERT_EQ(dense.contains(e.src), dense.contains(e.dst));
        ASSERT_TRUE(g.has_edge(e.dst, e.src));
      }
    }
  }
}

TEST(Dual, FblDenseSideRejected) {
  const Graph g = path3();
  EXPECT_THROW(DualSampler(g, 1, make_config(StrategyKind::kFbl)), ConfigError);
}

}  // namespace
}  // namespace gss
