// Copyright 2026 The Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "incset/router.h"

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.h"

namespace incset {
namespace {

std::shared_ptr<const DataLayout> Share(DataLayout layout) {
  return std::make_shared<const DataLayout>(std::move(layout));
}

// Literal response-order process: machines in `order`; the first responder
// joins, later ones join iff they hold a still-uncovered item.
std::size_t ResponseOrderSpan(const std::vector<MachineId>& order, const ItemSet& q,
                              const oracle::Sets& machines) {
  std::set<ItemId> left(q.begin(), q.end());
  std::size_t span = 0;
  for (MachineId m : order) {
    bool useful = false;
    for (ItemId item : machines[m]) useful = left.erase(item) > 0 || useful;
    if (useful) ++span;
    if (left.empty()) break;
  }
  return span;
}

TEST(StrategyNameTest, RoundTrips) {
  for (Strategy s : {Strategy::kBaseline, Strategy::kNGreedy, Strategy::kGcpaG, Strategy::kGcpaBG,
                     Strategy::kBetterBaseline}) {
    EXPECT_EQ(ParseStrategy(StrategyName(s)), s);
  }
  EXPECT_THROW(ParseStrategy("greedy"), ConfigError);
}

TEST(BaselineTest, AdversarialInstanceExpectedSpan) {
  // n singletons plus one machine holding everything: the full machine's
  // position k among n+1 responders is uniform, giving span k + [k < n].
  const std::uint32_t n = 8;
  oracle::Sets machines;
  ItemSet all;
  for (ItemId i = 0; i < n; ++i) {
    machines.push_back({i});
    all.push_back(i);
  }
  machines.push_back(all);
  const DataLayout layout = oracle::MakeLayout(machines, n);
  const double expected = n / 2.0 + static_cast<double>(n) / (n + 1);
  double sum = 0;
  std::size_t worst = 0;
  const int trials = 20000;
  for (QueryId id = 0; id < trials; ++id) {
    const RoutingResult r = RouteBaseline({id, all}, layout, 5);
    ASSERT_TRUE(oracle::Covers(r.cover.machines, all, machines));
    sum += r.span();
    worst = std::max(worst, r.span());
  }
  EXPECT_NEAR(sum / trials, expected, 0.05);
  EXPECT_EQ(worst, n);
  EXPECT_EQ(BruteForceCover(all, layout).span(), 1u);
}

TEST(BaselineTest, SpanDistributionMatchesResponseOrderProcess) {
  std::mt19937 gen(3);
  const auto machines = oracle::RandomMachines(12, 5, 2, gen);
  const DataLayout layout = oracle::MakeLayout(machines, 12);
  const ItemSet q = {0, 2, 3, 5, 7, 8, 11};
  std::vector<MachineId> order = CandidateMachines(q, layout);
  std::map<std::size_t, double> exact;
  double perms = 0;
  do {
    exact[ResponseOrderSpan(order, q, machines)] += 1;
    perms += 1;
  } while (std::next_permutation(order.begin(), order.end()));
  std::map<std::size_t, double> seen;
  const int trials = 40000;
  for (QueryId id = 0; id < trials; ++id) seen[RouteBaseline({id, q}, layout, 11).span()] += 1;
  for (const auto& [span, count] : exact) {
    EXPECT_NEAR(seen[span] / trials, count / perms, 0.015) << "span " << span;
  }
  for (const auto& [span, count] : seen) EXPECT_TRUE(exact.count(span)) << span;
}

TEST(BaselineTest, SingleCandidateAndDeterminism) {
  const DataLayout layout({{0, 1, 2}, {5}}, 6);
  EXPECT_EQ(RouteBaseline({0, {0, 1, 2}}, layout, 1).cover.machines, (std::vector<MachineId>{0}));
  const DataLayout big = GeneratePlacement({.universe_size = 500, .machine_count = 30});
  const Query q{7, {1, 20, 33, 87, 120, 250, 311, 499}};
  EXPECT_EQ(RouteBaseline(q, big, 4).cover, RouteBaseline(q, big, 4).cover);
  EXPECT_THROW(RouteBaseline({0, {3}}, layout, 1), UncoverableItemError);
}

TEST(BaselineTest, NeverBeatsGreedyOnAverage) {
  const DataLayout layout = GeneratePlacement({.universe_size = 2000, .machine_count = 50});
  const Workload w = GenerateWorkload({.n = 2000, .p = 0.99 / 2000, .query_count = 500});
  double baseline = 0, greedy = 0, better = 0;
  for (const Query& q : w.queries) {
    RoutingResult b = RouteBaseline(q, layout, 2);
    RoutingResult bb = RouteBetterBaseline(q, layout, 2);
    ASSERT_TRUE(CheckResult(b, q, layout));
    ASSERT_TRUE(CheckResult(bb, q, layout));
    baseline += b.span();
    better += bb.span();
    greedy += RouteNGreedy(q, layout).span();
  }
  EXPECT_GT(baseline, greedy);
  EXPECT_GE(better, greedy);
}

TEST(NGreedyTest, EqualsGreedyCover) {
  const DataLayout layout = GeneratePlacement({.universe_size = 1000, .machine_count = 40});
  const Workload w = GenerateWorkload({.n = 1000, .p = 0.99 / 1000, .query_count = 100});
  for (const Query& q : w.queries) {
    RoutingResult r = RouteNGreedy(q, layout);
    EXPECT_EQ(r.cover, GreedyCover(q.items, layout));
    EXPECT_TRUE(CheckResult(r, q, layout));
    EXPECT_EQ(r.strategy, Strategy::kNGreedy);
  }
}

class RealtimeTest : public ::testing::TestWithParam<GPartReuse> {
 protected:
  RouterParams Params() const {
    RouterParams p;
    p.reuse = GetParam();
    return p;
  }
};

TEST_P(RealtimeTest, QueryEqualToAGPartReusesItsMachines) {
  auto layout = Share(GeneratePlacement({.universe_size = 300, .machine_count = 20}));
  const ItemSet items = {4, 17, 58, 99, 140, 201, 255};
  std::vector<Query> pre;
  for (QueryId i = 0; i < 5; ++i) pre.push_back({i, items});
  RealtimeRouter router = RealtimeRouter::Precompute(pre, layout, Params());
  ASSERT_EQ(router.g_parts().size(), 1u);
  EXPECT_EQ(router.g_parts()[0].items, items);
  const std::uint64_t calls = router.counters().greedy_calls;
  const RoutingResult r = router.Route({100, items});
  EXPECT_EQ(r.cover, router.g_parts()[0].machines);
  EXPECT_EQ(router.counters().greedy_calls, calls);
  EXPECT_EQ(r.cluster, std::optional<ClusterId>(0));
}

TEST_P(RealtimeTest, DisjointQueryFallsBackToGreedyAndRegistersAGPart) {
  auto layout = Share(GeneratePlacement({.universe_size = 300, .machine_count = 20}));
  RealtimeRouter router =
      RealtimeRouter::Precompute(std::vector<Query>{{0, {1, 2, 3}}}, layout, Params());
  const Query q{10, {50, 60, 70, 80}};
  const std::size_t before = router.g_parts().size();
  const RoutingResult r = router.Route(q);
  EXPECT_EQ(r.cover, GreedyCover(q.items, *layout));
  EXPECT_FALSE(r.cluster.has_value());
  ASSERT_EQ(router.g_parts().size(), before + 1);
  EXPECT_EQ(router.g_parts().back().items, q.items);
  EXPECT_EQ(router.gpart_tables().back(), router.unattributed_table());
  EXPECT_EQ(router.counters().unattributed, 1u);

  const std::uint64_t calls = router.counters().greedy_calls;
  EXPECT_EQ(router.Route({11, q.items}).cover, r.cover);
  EXPECT_EQ(router.counters().greedy_calls, calls);
}

TEST_P(RealtimeTest, SubsetsOfKnownItemsNeedNoGreedy) {
  auto layout = Share(GeneratePlacement({.universe_size = 400, .machine_count = 25}));
  std::mt19937 gen(7);
  const ItemSet core = oracle::RandomSubset(400, 20, gen);
  std::vector<Query> pre;
  for (QueryId i = 0; i < 6; ++i) {
    ItemSet q;
    for (ItemId item : core) {
      if (gen() % 4) q.push_back(item);
    }
    pre.push_back({i, q});
  }
  pre.push_back({6, core});
  RouterParams params = Params();
  params.clustering.theta2 = 0.0;  // everything sharing an item joins
  RealtimeRouter router = RealtimeRouter::Precompute(pre, layout, params);
  ASSERT_EQ(router.clustering().cluster_count(), 1u);
  for (QueryId id = 100; id < 300; ++id) {
    ItemSet q;
    for (ItemId item : core) {
      if (gen() % 2) q.push_back(item);
    }
    if (q.size() < 2) continue;
    const std::uint64_t calls = router.counters().greedy_calls;
    RoutingResult r = router.Route({id, q});
    EXPECT_TRUE(CheckResult(r, {id, q}, *layout));
    EXPECT_EQ(router.counters().greedy_calls, calls);
  }
}

TEST_P(RealtimeTest, StreamStaysConsistentAndValid) {
  auto layout = Share(GeneratePlacement({.universe_size = 3000, .machine_count = 50}));
  Workload w = GenerateWorkload({.n = 3000, .p = 0.99 / 3000, .query_count = 1500, .seed = 3});
  w.pretrain_fraction = 0.4;
  for (GcpaVariant variant : {GcpaVariant::kGreedy, GcpaVariant::kBetterGreedy}) {
    for (AssignMode mode : {AssignMode::kFast, AssignMode::kFull}) {
      RouterParams params = Params();
      params.variant = variant;
      params.assign_mode = mode;
      RealtimeRouter router = RealtimeRouter::Precompute(w.pretrain(), layout, params);
      ASSERT_NO_THROW(router.CheckConsistency());
      std::uint64_t items = 0;
      for (const Query& q : w.realtime()) {
        RoutingResult r = router.Route(q);
        ASSERT_TRUE(CheckResult(r, q, *layout));
        if (q.items.size() > params.direct_cover_max_len) items += q.items.size();
      }
      EXPECT_NO_THROW(router.CheckConsistency());
      const RealtimeCounters& c = router.counters();
      EXPECT_EQ(c.queries, w.realtime().size());
      EXPECT_EQ(c.items_via_gpart + c.items_via_index + c.items_via_greedy, items);
      std::uint64_t attributed = 0;
      for (auto a : router.attribution()) attributed += a;
      EXPECT_EQ(attributed + c.unattributed + c.direct, c.queries);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Reuse, RealtimeTest,
                         ::testing::Values(GPartReuse::kQueryRelevantMachines,
                                           GPartReuse::kAllMachines));

TEST(RealtimeRouterTest, EmptyPretrainDegeneratesToGreedy) {
  auto layout = Share(GeneratePlacement({.universe_size = 500, .machine_count = 20}));
  RealtimeRouter router = RealtimeRouter::Precompute({}, layout, {});
  EXPECT_EQ(router.clustering().cluster_count(), 0u);
  EXPECT_EQ(router.table_count(), 1u);
  const Query q{0, {3, 9, 27, 81, 243}};
  EXPECT_EQ(router.Route(q).cover, GreedyCover(q.items, *layout));
}

TEST(RealtimeRouterTest, ShortQueriesAreCoveredDirectly) {
  auto layout = Share(GeneratePlacement({.universe_size = 100, .machine_count = 10}));
  RealtimeRouter router = RealtimeRouter::Precompute({}, layout, {});
  const RoutingResult r = router.Route({0, {42}});
  EXPECT_EQ(r.span(), 1u);
  EXPECT_EQ(router.counters().direct, 1u);
  EXPECT_TRUE(router.g_parts().empty());
}

TEST(RealtimeRouterTest, UncoverableItemThrows) {
  auto layout = Share(DataLayout({{0, 1}}, 3));
  RealtimeRouter router = RealtimeRouter::Precompute({}, layout, {});
  EXPECT_THROW(router.Route({0, {0, 2}}), UncoverableItemError);
}

TEST(RealtimeRouterTest, AssignCluster) {
  auto layout = Share(GeneratePlacement({.universe_size = 100, .machine_count = 10}));
  std::vector<Query> pre;
  for (QueryId i = 0; i < 3; ++i) pre.push_back({i, {1, 2, 3, 4}});
  for (QueryId i = 3; i < 6; ++i) pre.push_back({i, {50, 51, 52}});
  RealtimeRouter router = RealtimeRouter::Precompute(pre, layout, {});
  ASSERT_EQ(router.clustering().cluster_count(), 2u);
  for (AssignMode mode : {AssignMode::kFast, AssignMode::kFull}) {
    EXPECT_EQ(router.AssignCluster({9, {2, 3, 90}}, mode), std::optional<ClusterId>(0));
    EXPECT_EQ(router.AssignCluster({9, {51, 95}}, mode), std::optional<ClusterId>(1));
    EXPECT_EQ(router.AssignCluster({9, {80, 81}}, mode), std::nullopt);
  }
}

TEST(RealtimeRouterTest, RestoreRejectsBrokenState) {
  auto layout = Share(DataLayout({{0, 1}, {1, 2}}, 3));
  const Clustering empty;
  GPart bad{0, {0, 2}, Cover{{0}}};  // machine 0 does not hold item 2
  EXPECT_THROW(RealtimeRouter::Restore(layout, {}, empty, {bad}, {0}, {}, {}), ValidationError);
  GPart ok{0, {0}, Cover{{0}}};
  EXPECT_THROW(RealtimeRouter::Restore(layout, {}, empty, {ok}, {1}, {}, {}), ValidationError);
  EXPECT_THROW(RealtimeRouter::Restore(layout, {}, empty, {ok}, {}, {}, {}), ValidationError);
  EXPECT_NO_THROW(RealtimeRouter::Restore(layout, {}, empty, {ok}, {0}, {}, {}));
}

}  // namespace
}  // namespace incset
