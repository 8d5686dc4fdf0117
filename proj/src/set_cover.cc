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

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <string>
#include <utility>
#include <vector>

namespace incset {
namespace {

// Per-thread scratch reused across calls so the routing hot path does not
// allocate. Machines are renumbered into dense local slots per call.
class SizeBucketIndex {
 public:
  Cover Run(std::span<const ItemId> target, std::span<const ItemId> reference,
            const DataLayout& layout, const GreedyOptions& options,
            CoverStats* stats, std::vector<GreedyStep>* trace);

 private:
  std::uint32_t Slot(MachineId m) const { return slot_of_[m]; }
  bool IsCandidate(MachineId m) const { return stamp_[m] == epoch_; }
  void Reset(const DataLayout& layout);

  // Indexed by machine id.
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint32_t> slot_of_;
  std::uint32_t epoch_ = 0;

  // Indexed by slot.
  std::vector<MachineId> machine_;
  std::vector<std::uint32_t> count_;
  std::vector<std::uint32_t> secondary_;
  std::vector<std::uint64_t> rank_;
  std::vector<std::uint8_t> chosen_;
  std::vector<std::uint32_t> list_begin_;  // size slots + 1
  std::vector<std::uint32_t> list_;        // target positions per slot

  std::vector<std::uint8_t> covered_;  // by target position
  std::vector<std::vector<std::uint32_t>> buckets_;
  std::vector<std::uint8_t> dirty_;
};

void SizeBucketIndex::Reset(const DataLayout& layout) {
  if (stamp_.size() < layout.machine_count()) {
    stamp_.resize(layout.machine_count(), 0);
    slot_of_.resize(layout.machine_count(), 0);
  }
  if (++epoch_ == 0) {  // wrapped; stale stamps could alias
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  machine_.clear();
  count_.clear();
}

Cover SizeBucketIndex::Run(std::span<const ItemId> target,
                           std::span<const ItemId> reference,
                           const DataLayout& layout,
                           const GreedyOptions& options, CoverStats* stats,
                           std::vector<GreedyStep>* trace) {
  Cover cover;
  if (stats) ++stats->calls;
  if (target.empty()) return cover;
  Reset(layout);

  // Candidate discovery and per-slot intersection sizes.
  std::uint64_t incidences = 0;
  for (ItemId item : target) {
    const auto holders = layout.machines_of(item);
    if (holders.empty()) throw UncoverableItemError(item);
    for (MachineId m : holders) {
      if (!IsCandidate(m)) {
        stamp_[m] = epoch_;
        slot_of_[m] = static_cast<std::uint32_t>(machine_.size());
        machine_.push_back(m);
        count_.push_back(0);
      }
      ++count_[Slot(m)];
      ++incidences;
    }
  }
  const auto slots = static_cast<std::uint32_t>(machine_.size());

  // Per-slot lists of target positions (counting sort).
  list_begin_.assign(slots + 1, 0);
  for (std::uint32_t s = 0; s < slots; ++s) list_begin_[s + 1] = list_begin_[s] + count_[s];
  list_.resize(incidences);
  {
    std::vector<std::uint32_t>& fill = secondary_;  // borrowed as cursor
    fill.assign(list_begin_.begin(), list_begin_.end() - 1);
    for (std::uint32_t pos = 0; pos < target.size(); ++pos) {
      for (MachineId m : layout.machines_of(target[pos])) {
        list_[fill[Slot(m)]++] = pos;
      }
    }
  }

  // Secondary key: |machine & (reference \ target)|.
  secondary_.assign(slots, 0);
  if (!reference.empty()) {
    auto t = target.begin();
    for (ItemId item : reference) {
      while (t != target.end() && *t < item) ++t;
      if (t != target.end() && *t == item) continue;
      for (MachineId m : layout.machines_of(item)) {
        if (IsCandidate(m)) ++secondary_[Slot(m)];
      }
    }
  }

  rank_.resize(slots);
  for (std::uint32_t s = 0; s < slots; ++s) {
    rank_[s] = options.tie_break == TieBreak::kSeededRandom
                   ? MixSeed(options.seed, machine_[s])
                   : machine_[s];
  }
  chosen_.assign(slots, 0);
  covered_.assign(target.size(), 0);

  std::uint32_t cursor = 0;
  for (std::uint32_t s = 0; s < slots; ++s) cursor = std::max(cursor, count_[s]);
  if (buckets_.size() < cursor + 1) buckets_.resize(cursor + 1);
  for (std::uint32_t b = 0; b <= cursor; ++b) buckets_[b].clear();
  dirty_.assign(cursor + 1, 1);
  for (std::uint32_t s = 0; s < slots; ++s) buckets_[count_[s]].push_back(s);

  // Best candidate sits at the back of a clean bucket.
  auto worse = [this](std::uint32_t a, std::uint32_t b) {
    if (secondary_[a] != secondary_[b]) return secondary_[a] < secondary_[b];
    if (rank_[a] != rank_[b]) return rank_[a] > rank_[b];
    return machine_[a] > machine_[b];
  };

  cover.machines.reserve(std::min<std::size_t>(slots, target.size()));
  std::size_t uncovered = target.size();
  std::uint64_t decrements = 0, blank_steps = 0, picks = 0;
  while (uncovered > 0) {
    auto& bucket = buckets_[cursor];
    std::erase_if(bucket, [&](std::uint32_t s) {
      return chosen_[s] || count_[s] != cursor;
    });
    if (bucket.empty()) {
      --cursor;
      ++blank_steps;
      continue;
    }
    if (dirty_[cursor]) {
      std::sort(bucket.begin(), bucket.end(), worse);
      dirty_[cursor] = 0;
    }
    const std::uint32_t pick = bucket.back();
    bucket.pop_back();
    chosen_[pick] = 1;
    ++picks;
    if (trace) trace->push_back({machine_[pick], cursor, secondary_[pick]});

    for (std::uint32_t i = list_begin_[pick]; i < list_begin_[pick + 1]; ++i) {
      const std::uint32_t pos = list_[i];
      if (covered_[pos]) continue;
      covered_[pos] = 1;
      --uncovered;
      for (MachineId m : layout.machines_of(target[pos])) {
        const std::uint32_t s = Slot(m);
        if (s == pick) continue;
        --count_[s];
        ++decrements;
        if (!chosen_[s] && count_[s] > 0) {
          buckets_[count_[s]].push_back(s);
          dirty_[count_[s]] = 1;
        }
      }
    }
    cover.machines.push_back(machine_[pick]);
  }
  std::sort(cover.machines.begin(), cover.machines.end());

  if (stats) {
    stats->incidences += incidences;
    stats->decrements += decrements;
    stats->blank_steps += blank_steps;
    stats->picks += picks;
  }
  return cover;
}

SizeBucketIndex& Scratch() {
  thread_local SizeBucketIndex index;
  return index;
}

}  // namespace

Cover GreedyCover(std::span<const ItemId> target, const DataLayout& layout,
                  const GreedyOptions& options, CoverStats* stats,
                  std::vector<GreedyStep>* trace) {
  return Scratch().Run(target, {}, layout, options, stats, trace);
}

Cover BetterGreedy(std::span<const ItemId> q1, std::span<const ItemId> q2,
                   const DataLayout& layout, const GreedyOptions& options,
                   CoverStats* stats, std::vector<GreedyStep>* trace) {
  return Scratch().Run(q1, q2, layout, options, stats, trace);
}

std::vector<MachineId> CandidateMachines(std::span<const ItemId> target,
                                         const DataLayout& layout) {
  std::vector<MachineId> out;
  for (ItemId item : target) {
    const auto holders = layout.machines_of(item);
    out.insert(out.end(), holders.begin(), holders.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ItemSet CoveredItems(std::span<const ItemId> target,
                     std::span<const MachineId> machines,
                     const DataLayout& layout) {
  ItemSet out;
  for (ItemId item : target) {
    for (MachineId m : layout.machines_of(item)) {
      if (std::find(machines.begin(), machines.end(), m) != machines.end()) {
        out.push_back(item);
        break;
      }
    }
  }
  return out;
}

Cover UnionCovers(const Cover& a, const Cover& b) {
  Cover out;
  std::set_union(a.machines.begin(), a.machines.end(), b.machines.begin(),
                 b.machines.end(), std::back_inserter(out.machines));
  return out;
}

Cover BruteForceCover(std::span<const ItemId> target,
                      const DataLayout& layout) {
  if (target.empty()) return {};
  for (ItemId item : target) {
    if (layout.machines_of(item).empty()) throw UncoverableItemError(item);
  }
  const std::vector<MachineId> candidates = CandidateMachines(target, layout);
  if (candidates.size() > kMaxBruteForceCandidates) {
    throw PreconditionError(
        "brute force refused: " + std::to_string(candidates.size()) +
        " candidate machines (limit " +
        std::to_string(kMaxBruteForceCandidates) + ")");
  }
  const std::size_t words = (target.size() + 63) / 64;
  std::vector<std::uint64_t> masks(candidates.size() * words, 0);
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    for (std::size_t pos = 0; pos < target.size(); ++pos) {
      if (layout.Holds(candidates[c], target[pos])) {
        masks[c * words + pos / 64] |= std::uint64_t{1} << (pos % 64);
      }
    }
  }
  std::vector<std::uint64_t> full(words, ~std::uint64_t{0});
  if (target.size() % 64) full.back() = (std::uint64_t{1} << (target.size() % 64)) - 1;

  // Combinations of each size in lexicographic order; the first hit is the
  // lexicographically least minimum.
  const std::size_t n = candidates.size();
  std::vector<std::uint64_t> acc(words);
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::fill(acc.begin(), acc.end(), 0);
      for (std::size_t c : idx) {
        for (std::size_t w = 0; w < words; ++w) acc[w] |= masks[c * words + w];
      }
      if (acc == full) {
        Cover cover;
        for (std::size_t c : idx) cover.machines.push_back(candidates[c]);
        return cover;
      }
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  throw Error("brute force found no cover");  // unreachable: all items held
}

PairCoverResult CoverNested(std::span<const ItemId> q1,
                            std::span<const ItemId> q2,
                            const DataLayout& layout,
                            NestedStrategy strategy) {
  if (!IsSubset(q1, q2)) throw PreconditionError("q1 is not a subset of q2");
  PairCoverResult result;
  if (strategy == NestedStrategy::kCoverOuterOnly) {
    result.cover_q2 = GreedyCover(q2, layout);
    result.cover_q1 = result.cover_q2;
    result.items_processed = q2.size();
    result.kernel_calls = 1;
  } else {
    result.cover_q1 = strategy == NestedStrategy::kGreedyInnerThenRest
                          ? GreedyCover(q1, layout)
                          : BetterGreedy(q1, q2, layout);
    const ItemSet rest =
        Difference(q2, CoveredItems(q2, result.cover_q1.machines, layout));
    const Cover rest_cover = GreedyCover(rest, layout);
    result.remainder_machines = rest_cover.span();
    result.cover_q2 = UnionCovers(result.cover_q1, rest_cover);
    result.items_processed = q1.size() + rest.size();
    result.kernel_calls = 2;
  }
  result.machines_touched_total =
      UnionCovers(result.cover_q1, result.cover_q2).span();
  return result;
}

PairCoverResult CoverIntersecting(std::span<const ItemId> q1,
                                  std::span<const ItemId> q2,
                                  const DataLayout& layout) {
  PairCoverResult result;
  const ItemSet shared = Intersect(q1, q2);
  const ItemSet both = Union(q1, q2);
  Cover shared_cover;
  if (!shared.empty()) {
    shared_cover = BetterGreedy(shared, both, layout);
    ++result.kernel_calls;
  }
  const ItemSet spilled = CoveredItems(both, shared_cover.machines, layout);
  const ItemSet rest1 = Difference(q1, spilled);
  const ItemSet rest2 = Difference(q2, spilled);
  const Cover cover1 = GreedyCover(rest1, layout);
  const Cover cover2 = GreedyCover(rest2, layout);
  result.kernel_calls += 2;
  result.cover_q1 = UnionCovers(shared_cover, cover1);
  result.cover_q2 = UnionCovers(shared_cover, cover2);
  result.remainder_machines = cover2.span();
  result.items_processed = shared.size() + rest1.size() + rest2.size();
  result.machines_touched_total =
      UnionCovers(result.cover_q1, result.cover_q2).span();
  return result;
}

}  // namespace incset
