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

// Set-cover kernels over a DataLayout.
//
// GreedyCover keeps candidate machines in a bucket index keyed by the size of
// their intersection with the still-uncovered target. A cursor walks the
// buckets from the largest size downward; a machine whose intersection
// shrinks is re-filed into the lower bucket and its old entry is discarded
// lazily when the bucket is next drawn from. Total work is bounded by the
// number of (machine, target item) incidences plus one blank step per bucket.
//
// BetterGreedy runs the same loop but orders each bucket by a secondary key,
// |machine & (reference \ target)|, so that among equally good machines the
// one that also helps a correlated query wins.

#ifndef INCSET_SET_COVER_H_
#define INCSET_SET_COVER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "incset/common.h"
#include "incset/layout.h"

namespace incset {

enum class TieBreak {
  kLowestId,
  kSeededRandom,
};

struct GreedyOptions {
  TieBreak tie_break = TieBreak::kLowestId;
  std::uint64_t seed = 0;  // used by kSeededRandom only
};

// Instrumentation counters, accumulated across calls when reused.
struct CoverStats {
  std::uint64_t incidences = 0;   // (machine, target item) pairs indexed
  std::uint64_t decrements = 0;   // bucket moves after a pick
  std::uint64_t blank_steps = 0;  // cursor moves past an exhausted bucket
  std::uint64_t picks = 0;        // machines selected
  std::uint64_t calls = 0;

  // Work counted against the linear-time bound.
  std::uint64_t work() const { return decrements + blank_steps; }
};

// One machine choice and the state it was made from; recorded only when a
// trace vector is supplied.
struct GreedyStep {
  MachineId machine = 0;
  std::uint32_t gain = 0;       // newly covered target items
  std::uint32_t secondary = 0;  // |machine & (reference \ target)|
};

// Greedy cover of `target` (sorted). Ties on uncovered-intersection size go
// to the lowest machine id, or to a seeded random order. Throws
// UncoverableItemError if some target item has no machine.
Cover GreedyCover(std::span<const ItemId> target, const DataLayout& layout,
                  const GreedyOptions& options = {},
                  CoverStats* stats = nullptr,
                  std::vector<GreedyStep>* trace = nullptr);

// Covers q1 with respect to q2: greedy on q1 whose ties prefer machines
// holding more of q2 \ q1.
Cover BetterGreedy(std::span<const ItemId> q1, std::span<const ItemId> q2,
                   const DataLayout& layout, const GreedyOptions& options = {},
                   CoverStats* stats = nullptr,
                   std::vector<GreedyStep>* trace = nullptr);

// Exact minimum-cardinality cover by subset enumeration, the
// lexicographically least among all minima. Refuses (PreconditionError) when
// more than kMaxBruteForceCandidates machines intersect the target.
inline constexpr std::size_t kMaxBruteForceCandidates = 22;
Cover BruteForceCover(std::span<const ItemId> target, const DataLayout& layout);

// Machines holding at least one target item, ascending.
std::vector<MachineId> CandidateMachines(std::span<const ItemId> target,
                                         const DataLayout& layout);

// Target items held by at least one machine of `machines`.
ItemSet CoveredItems(std::span<const ItemId> target,
                     std::span<const MachineId> machines,
                     const DataLayout& layout);

Cover UnionCovers(const Cover& a, const Cover& b);

enum class NestedStrategy {
  kCoverOuterOnly,           // greedy on q2, reused for q1
  kGreedyInnerThenRest,      // greedy on q1, then greedy on q2's remainder
  kBetterGreedyInnerThenRest,  // BetterGreedy on q1 w.r.t. q2, then remainder
};

struct PairCoverResult {
  Cover cover_q1;
  Cover cover_q2;
  // Machines spent on q2 beyond what q1's cover already covered.
  std::size_t remainder_machines = 0;
  std::size_t machines_touched_total = 0;  // |cover_q1 | cover_q2|
  std::size_t items_processed = 0;         // target items handed to kernels
  std::size_t kernel_calls = 0;
};

// Pair procedure for q1 a subset of q2 (PreconditionError otherwise).
PairCoverResult CoverNested(std::span<const ItemId> q1,
                            std::span<const ItemId> q2,
                            const DataLayout& layout, NestedStrategy strategy);

// Pair procedure for intersecting queries: BetterGreedy on q1 & q2 with
// respect to q1 | q2, then plain greedy on each query's still-uncovered
// items. Disjoint queries reduce to two independent greedy covers.
PairCoverResult CoverIntersecting(std::span<const ItemId> q1,
                                  std::span<const ItemId> q2,
                                  const DataLayout& layout);

}  // namespace incset

#endif  // INCSET_SET_COVER_H_
