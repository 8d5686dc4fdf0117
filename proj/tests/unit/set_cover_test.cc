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


#include "incset/set_cover.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.h"

namespace incset {
namespace {

struct Instance {
  oracle::Sets machines;
  DataLayout layout;
  ItemSet target;
};

Instance RandomInstance(std::mt19937& gen, std::uint32_t max_machines = 10,
                        std::uint32_t max_target = 16) {
  Instance in;
  const std::uint32_t universe = 20 + gen() % 20;
  const std::uint32_t m = 3 + gen() % (max_machines - 2);
  const std::uint32_t r = 1 + gen() % std::min<std::uint32_t>(3, m);
  in.machines = oracle::RandomMachines(universe, m, r, gen);
  in.layout = oracle::MakeLayout(in.machines, universe);
  in.target = oracle::RandomSubset(universe, 1 + gen() % max_target, gen);
  return in;
}

TEST(GreedyCoverTest, MatchesTextbookGreedy) {
  std::mt19937 gen(1);
  for (int trial = 0; trial < 400; ++trial) {
    const Instance in = RandomInstance(gen, 14, 30);
    EXPECT_EQ(GreedyCover(in.target, in.layout).machines,
              oracle::TextbookGreedy(in.target, in.machines))
        << "trial " << trial;
  }
}

TEST(GreedyCoverTest, WithinHarmonicFactorOfOptimum) {
  std::mt19937 gen(2);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance in = RandomInstance(gen);
    const Cover cover = GreedyCover(in.target, in.layout);
    ASSERT_TRUE(oracle::Covers(cover.machines, in.target, in.machines));
    const std::size_t opt = oracle::OptimalSpan(in.target, in.machines);
    EXPECT_LE(cover.span(), oracle::Harmonic(in.target.size()) * opt + 1e-9);
  }
}

TEST(GreedyCoverTest, SeededTieBreakIsValidAndDeterministic) {
  std::mt19937 gen(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance in = RandomInstance(gen);
    const GreedyOptions options{.tie_break = TieBreak::kSeededRandom, .seed = 99};
    const Cover a = GreedyCover(in.target, in.layout, options);
    EXPECT_TRUE(oracle::Covers(a.machines, in.target, in.machines));
    EXPECT_EQ(a, GreedyCover(in.target, in.layout, options));
  }
}

TEST(GreedyCoverTest, GainsAreNonIncreasingAndSumToTarget) {
  std::mt19937 gen(4);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance in = RandomInstance(gen, 14, 30);
    std::vector<GreedyStep> trace;
    GreedyCover(in.target, in.layout, {}, nullptr, &trace);
    std::size_t total = 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      total += trace[i].gain;
      if (i) EXPECT_LE(trace[i].gain, trace[i - 1].gain);
    }
    EXPECT_EQ(total, in.target.size());
  }
}

TEST(GreedyCoverTest, WorkIsLinearInIncidences) {
  std::mt19937 gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance in = RandomInstance(gen, 14, 30);
    CoverStats stats;
    GreedyCover(in.target, in.layout, {}, &stats);
    std::uint64_t incidences = 0;
    for (ItemId item : in.target) incidences += in.layout.machines_of(item).size();
    EXPECT_EQ(stats.incidences, incidences);
    EXPECT_LE(stats.work(), incidences + in.target.size());
    EXPECT_EQ(stats.calls, 1u);
  }
}

TEST(GreedyCoverTest, EdgeCases) {
  const DataLayout layout({{0, 1, 2}, {2, 3}}, 5);
  EXPECT_TRUE(GreedyCover(ItemSet{}, layout).machines.empty());
  EXPECT_EQ(GreedyCover(ItemSet{0, 1, 2}, layout).machines, (std::vector<MachineId>{0}));
  try {
    GreedyCover(ItemSet{1, 4}, layout);
    FAIL();
  } catch (const UncoverableItemError& e) {
    EXPECT_EQ(e.item(), 4u);
  }
}

TEST(BetterGreedyTest, MatchesTextbookGreedyWithSecondaryKey) {
  std::mt19937 gen(6);
  for (int trial = 0; trial < 400; ++trial) {
    Instance in = RandomInstance(gen, 14, 20);
    const ItemSet extra = oracle::RandomSubset(in.layout.universe_size(), gen() % 12, gen);
    const ItemSet reference = Union(in.target, extra);
    EXPECT_EQ(BetterGreedy(in.target, reference, in.layout).machines,
              oracle::TextbookGreedy(in.target, in.machines, reference))
        << "trial " << trial;
  }
}

TEST(BetterGreedyTest, WithinHarmonicFactorOfOptimum) {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance in = RandomInstance(gen);
    const ItemSet reference =
        Union(in.target, oracle::RandomSubset(in.layout.universe_size(), 8, gen));
    const Cover cover = BetterGreedy(in.target, reference, in.layout);
    ASSERT_TRUE(oracle::Covers(cover.machines, in.target, in.machines));
    EXPECT_LE(cover.span(), oracle::Harmonic(in.target.size()) * oracle::OptimalSpan(in.target, in.machines) + 1e-9);
  }
}

TEST(BetterGreedyTest, PrefersTheMachineThatHelpsTheReference) {
  // Machines 0 and 1 tie on {1, 2}; machine 1 also holds reference-only item 5.
  const DataLayout layout({{1, 2}, {1, 2, 5}, {3}}, 6);
  EXPECT_EQ(GreedyCover(ItemSet{1, 2}, layout).machines, (std::vector<MachineId>{0}));
  EXPECT_EQ(BetterGreedy(ItemSet{1, 2}, ItemSet{1, 2, 5}, layout).machines,
            (std::vector<MachineId>{1}));
}

TEST(BruteForceCoverTest, MatchesExhaustiveOptimum) {
  std::mt19937 gen(8);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance in = RandomInstance(gen);
    const Cover cover = BruteForceCover(in.target, in.layout);
    EXPECT_TRUE(oracle::Covers(cover.machines, in.target, in.machines));
    EXPECT_EQ(cover.span(), oracle::OptimalSpan(in.target, in.machines));
  }
}

TEST(BruteForceCoverTest, RefusesLargeInstances) {
  oracle::Sets machines(30);
  ItemSet target;
  for (ItemId i = 0; i < 30; ++i) {
    machines[i] = {i};
    target.push_back(i);
  }
  EXPECT_THROW(BruteForceCover(target, oracle::MakeLayout(machines, 30)), PreconditionError);
}

TEST(BruteForceCoverTest, AdversarialSingletonsVersusFullMachine) {
  oracle::Sets machines;
  ItemSet all;
  for (ItemId i = 0; i < 8; ++i) {
    machines.push_back({i});
    all.push_back(i);
  }
  machines.push_back(all);
  const DataLayout layout = oracle::MakeLayout(machines, 8);
  EXPECT_EQ(BruteForceCover(all, layout).machines, (std::vector<MachineId>{8}));
  EXPECT_EQ(GreedyCover(all, layout).machines, (std::vector<MachineId>{8}));
}

TEST(HelpersTest, CandidatesAndCoveredItems) {
  const DataLayout layout({{0, 1}, {1, 2}, {3}}, 4);
  EXPECT_EQ(CandidateMachines(ItemSet{1, 2}, layout), (std::vector<MachineId>{0, 1}));
  EXPECT_EQ(CoveredItems(ItemSet{0, 2, 3}, std::vector<MachineId>{1, 2}, layout),
            (ItemSet{2, 3}));
  EXPECT_EQ(UnionCovers(Cover{{0, 2}}, Cover{{1, 2}}).machines,
            (std::vector<MachineId>{0, 1, 2}));
}

TEST(CoverNestedTest, AllStrategiesCoverBothQueries) {
  std::mt19937 gen(9);
  for (int trial = 0; trial < 150; ++trial) {
    const Instance in = RandomInstance(gen, 12, 20);
    const ItemSet q2 = Union(in.target, oracle::RandomSubset(in.layout.universe_size(), 6, gen));
    for (auto s : {NestedStrategy::kCoverOuterOnly, NestedStrategy::kGreedyInnerThenRest,
                   NestedStrategy::kBetterGreedyInnerThenRest}) {
      const PairCoverResult r = CoverNested(in.target, q2, in.layout, s);
      EXPECT_TRUE(oracle::Covers(r.cover_q1.machines, in.target, in.machines));
      EXPECT_TRUE(oracle::Covers(r.cover_q2.machines, q2, in.machines));
      EXPECT_TRUE(IsSubset(r.cover_q1.machines, r.cover_q2.machines));
      EXPECT_EQ(r.machines_touched_total, r.cover_q2.span());
      if (s != NestedStrategy::kCoverOuterOnly) {
        EXPECT_EQ(r.cover_q2.span(), r.cover_q1.span() + r.remainder_machines);
        EXPECT_LE(r.items_processed, q2.size());
      }
    }
  }
}

TEST(CoverNestedTest, RejectsNonNestedPair) {
  const DataLayout layout({{0, 1, 2}}, 3);
  EXPECT_THROW(CoverNested(ItemSet{0, 2}, ItemSet{0, 1}, layout,
                           NestedStrategy::kGreedyInnerThenRest),
               PreconditionError);
}

TEST(CoverIntersectingTest, CoversBothAndReducesToGreedyWhenDisjoint) {
  std::mt19937 gen(10);
  for (int trial = 0; trial < 150; ++trial) {
    const Instance in = RandomInstance(gen, 12, 16);
    const ItemSet q2 = oracle::RandomSubset(in.layout.universe_size(), 1 + gen() % 16, gen);
    const PairCoverResult r = CoverIntersecting(in.target, q2, in.layout);
    EXPECT_TRUE(oracle::Covers(r.cover_q1.machines, in.target, in.machines));
    EXPECT_TRUE(oracle::Covers(r.cover_q2.machines, q2, in.machines));
    if (IntersectionSize(in.target, q2) == 0) {
      EXPECT_EQ(r.cover_q1, GreedyCover(in.target, in.layout));
      EXPECT_EQ(r.cover_q2, GreedyCover(q2, in.layout));
    }
  }
}

}  // namespace
}  // namespace incset
