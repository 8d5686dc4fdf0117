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


#include "incset/gcpa.h"

#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.h"

namespace incset {
namespace {

oracle::Sets RandomCluster(std::mt19937& gen, std::uint32_t universe) {
  const ItemSet core = oracle::RandomSubset(universe, 12, gen);
  oracle::Sets queries(2 + gen() % 8);
  for (auto& q : queries) {
    for (ItemId item : core) {
      if (gen() % 3) q.push_back(item);
    }
    q = Union(q, oracle::RandomSubset(universe, gen() % 4, gen));
    if (q.empty()) q.push_back(core.front());
  }
  return queries;
}

TEST(ComputeDepthsTest, CountsQueriesPerItem) {
  const oracle::Sets queries = {{1, 2, 3}, {2, 3}, {3, 7}};
  const auto depths = ComputeDepths(queries);
  const std::vector<std::pair<ItemId, std::uint32_t>> expected = {{1, 1}, {2, 2}, {3, 3}, {7, 1}};
  EXPECT_EQ(depths, expected);
}

TEST(PartitionPartsTest, MatchesSignatureGrouping) {
  std::mt19937 gen(1);
  for (int trial = 0; trial < 100; ++trial) {
    const oracle::Sets queries = RandomCluster(gen, 40);
    std::map<std::vector<std::uint32_t>, ItemSet> expected;
    for (ItemId item = 0; item < 40; ++item) {
      std::vector<std::uint32_t> sig;
      for (std::uint32_t q = 0; q < queries.size(); ++q) {
        if (oracle::Contains(queries[q], item)) sig.push_back(q);
      }
      if (!sig.empty()) expected[sig].push_back(item);
    }
    const PartPartition partition = PartitionParts(queries);
    ASSERT_EQ(partition.parts.size(), expected.size());
    for (std::size_t i = 0; i < partition.parts.size(); ++i) {
      const DataPart& part = partition.parts[i];
      EXPECT_EQ(expected.at(part.signature), part.items);
      if (i) {
        const DataPart& prev = partition.parts[i - 1];
        EXPECT_TRUE(prev.depth() > part.depth() ||
                    (prev.depth() == part.depth() && prev.signature < part.signature));
      }
    }
    for (std::uint32_t q = 0; q < queries.size(); ++q) {
      ItemSet rebuilt;
      for (std::uint32_t p : partition.parts_of_query[q]) {
        rebuilt = Union(rebuilt, partition.parts[p].items);
      }
      EXPECT_EQ(rebuilt, queries[q]);
    }
  }
}

TEST(PartitionPartsTest, SameDepthDifferentSignaturesAreDifferentParts) {
  // Items 1 and 2 both have depth 1 but belong to different queries.
  const oracle::Sets queries = {{0, 1}, {0, 2}};
  const PartPartition partition = PartitionParts(queries);
  ASSERT_EQ(partition.parts.size(), 3u);
  EXPECT_EQ(partition.parts[0].items, (ItemSet{0}));
  EXPECT_EQ(partition.parts[1].items, (ItemSet{1}));
  EXPECT_EQ(partition.parts[2].items, (ItemSet{2}));
}

class GcpaProcessTest : public ::testing::TestWithParam<GcpaVariant> {};

TEST_P(GcpaProcessTest, GPartsPartitionTheUnionAndCoverQueries) {
  std::mt19937 gen(2);
  for (int trial = 0; trial < 150; ++trial) {
    const auto machines = oracle::RandomMachines(60, 12, 3, gen);
    const DataLayout layout = oracle::MakeLayout(machines, 60);
    const oracle::Sets queries = RandomCluster(gen, 60);
    const ClusterCoverResult r = GcpaProcess(queries, layout, GetParam());

    ItemSet all;
    for (const auto& q : queries) all = Union(all, q);
    EXPECT_EQ(r.union_size, all.size());
    EXPECT_LE(r.items_processed, all.size());

    std::multiset<ItemId> seen;
    for (std::size_t g = 0; g < r.g_parts.size(); ++g) {
      const GPart& part = r.g_parts[g];
      EXPECT_EQ(part.id, g);
      EXPECT_FALSE(part.items.empty());
      EXPECT_TRUE(oracle::Covers(part.machines.machines, part.items, machines));
      seen.insert(part.items.begin(), part.items.end());
    }
    EXPECT_EQ(ItemSet(seen.begin(), seen.end()), all);  // union, no duplicates
    EXPECT_EQ(seen.size(), all.size());

    ASSERT_EQ(r.query_covers.size(), queries.size());
    for (std::size_t q = 0; q < queries.size(); ++q) {
      EXPECT_TRUE(oracle::Covers(r.query_covers[q].machines, queries[q], machines));
    }
  }
}

TEST_P(GcpaProcessTest, SingleQueryClusterIsOneGreedyCall) {
  std::mt19937 gen(3);
  const auto machines = oracle::RandomMachines(40, 10, 3, gen);
  const DataLayout layout = oracle::MakeLayout(machines, 40);
  const ItemSet q = oracle::RandomSubset(40, 10, gen);
  const ClusterCoverResult r = GcpaProcess(oracle::Sets{q}, layout, GetParam());
  EXPECT_EQ(r.greedy_invocations, 1u);
  ASSERT_EQ(r.g_parts.size(), 1u);
  EXPECT_EQ(r.query_covers[0], GreedyCover(q, layout));
}

TEST_P(GcpaProcessTest, EmptyClusterProducesNothing) {
  const DataLayout layout({{0}}, 1);
  const ClusterCoverResult r = GcpaProcess(oracle::Sets{}, layout, GetParam());
  EXPECT_TRUE(r.g_parts.empty());
  EXPECT_EQ(r.union_size, 0u);
}

INSTANTIATE_TEST_SUITE_P(Variants, GcpaProcessTest,
                         ::testing::Values(GcpaVariant::kGreedy, GcpaVariant::kBetterGreedy));

TEST(GcpaProcessTest2, SpilledPartProducesNoGPart) {
  // Deep part {0} and shallow part {1} sit on the same machine, so covering
  // the deep part spills over and the shallow part needs no G-part.
  const DataLayout layout({{0, 1}, {0}, {1}}, 2);
  const ClusterCoverResult r = GcpaProcess(oracle::Sets{{0, 1}, {0}}, layout, GcpaVariant::kGreedy);
  ASSERT_EQ(r.g_parts.size(), 1u);
  EXPECT_EQ(r.g_parts[0].items, (ItemSet{0, 1}));
  EXPECT_EQ(r.items_processed, 1u);
}

}  // namespace
}  // namespace incset
