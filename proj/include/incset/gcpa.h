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

// Cluster-level cover processing.
//
// Items of a cluster are grouped into data parts: two items share a part iff
// exactly the same member queries contain them. Parts are covered deepest
// first. Each part only pays for items no earlier step has covered; the
// machines chosen for it, together with every not-yet-assigned cluster item
// they hold, form a G-part. G-parts partition the cluster's items, and a
// member query's cover is the union of the machines of the G-parts it meets.

#ifndef INCSET_GCPA_H_
#define INCSET_GCPA_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "incset/common.h"
#include "incset/layout.h"
#include "incset/set_cover.h"

namespace incset {

// Item -> number of member queries containing it, sorted by item.
std::vector<std::pair<ItemId, std::uint32_t>> ComputeDepths(
    std::span<const ItemSet> queries);

struct DataPart {
  std::vector<std::uint32_t> signature;  // member positions, ascending
  ItemSet items;

  std::uint32_t depth() const {
    return static_cast<std::uint32_t>(signature.size());
  }
  friend bool operator==(const DataPart&, const DataPart&) = default;
};

struct PartPartition {
  // Deepest first; equal depths ordered by signature.
  std::vector<DataPart> parts;
  // For each member position, the indices of its parts (ascending).
  std::vector<std::vector<std::uint32_t>> parts_of_query;
};

PartPartition PartitionParts(std::span<const ItemSet> queries);

struct GPart {
  std::uint32_t id = 0;
  ItemSet items;
  Cover machines;

  friend bool operator==(const GPart&, const GPart&) = default;
};

enum class GcpaVariant {
  kGreedy,        // parts covered with plain greedy
  kBetterGreedy,  // parts covered with respect to the union of their queries
};

struct ClusterCoverResult {
  std::vector<Cover> query_covers;  // by member position
  std::vector<GPart> g_parts;       // in processing order, ids 0..n-1
  std::uint64_t items_processed = 0;     // items handed to a cover kernel
  std::uint64_t greedy_invocations = 0;
  std::size_t union_size = 0;            // |union of member queries|
  CoverStats kernel_stats;
};

ClusterCoverResult GcpaProcess(std::span<const ItemSet> queries,
                               const DataLayout& layout, GcpaVariant variant);

}  // namespace incset

#endif  // INCSET_GCPA_H_
