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

#include <algorithm>
#include <map>

namespace incset {
namespace {

std::map<ItemId, std::vector<std::uint32_t>> Signatures(
    std::span<const ItemSet> queries) {
  std::map<ItemId, std::vector<std::uint32_t>> signature_of;
  for (std::uint32_t pos = 0; pos < queries.size(); ++pos) {
    for (ItemId item : queries[pos]) signature_of[item].push_back(pos);
  }
  return signature_of;
}

}  // namespace

std::vector<std::pair<ItemId, std::uint32_t>> ComputeDepths(
    std::span<const ItemSet> queries) {
  std::vector<std::pair<ItemId, std::uint32_t>> depths;
  for (const auto& [item, sig] : Signatures(queries)) {
    depths.emplace_back(item, static_cast<std::uint32_t>(sig.size()));
  }
  return depths;
}

PartPartition PartitionParts(std::span<const ItemSet> queries) {
  std::map<std::vector<std::uint32_t>, ItemSet> by_signature;
  for (auto& [item, sig] : Signatures(queries)) {
    by_signature[sig].push_back(item);  // items arrive ascending
  }
  PartPartition out;
  for (auto& [sig, items] : by_signature) {
    out.parts.push_back(DataPart{sig, std::move(items)});
  }
  std::stable_sort(out.parts.begin(), out.parts.end(),
                   [](const DataPart& a, const DataPart& b) {
                     return a.depth() > b.depth();
                   });
  out.parts_of_query.resize(queries.size());
  for (std::uint32_t p = 0; p < out.parts.size(); ++p) {
    for (std::uint32_t pos : out.parts[p].signature) {
      out.parts_of_query[pos].push_back(p);
    }
  }
  return out;
}

ClusterCoverResult GcpaProcess(std::span<const ItemSet> queries,
                               const DataLayout& layout, GcpaVariant variant) {
  ClusterCoverResult result;
  const PartPartition partition = PartitionParts(queries);

  ItemSet universe;
  for (const DataPart& part : partition.parts) {
    universe.insert(universe.end(), part.items.begin(), part.items.end());
  }
  std::sort(universe.begin(), universe.end());
  result.union_size = universe.size();
  constexpr std::uint32_t kUnassigned = UINT32_MAX;
  std::vector<std::uint32_t> owner(universe.size(), kUnassigned);
  auto position = [&](ItemId item) {
    return static_cast<std::size_t>(
        std::lower_bound(universe.begin(), universe.end(), item) -
        universe.begin());
  };

  for (const DataPart& part : partition.parts) {
    ItemSet residual;
    for (ItemId item : part.items) {
      if (owner[position(item)] == kUnassigned) residual.push_back(item);
    }
    if (residual.empty()) continue;  // fully spilled into earlier G-parts

    Cover cover;
    if (variant == GcpaVariant::kGreedy) {
      cover = GreedyCover(residual, layout, {}, &result.kernel_stats);
    } else {
      ItemSet reference;
      for (std::uint32_t pos : part.signature) {
        reference = Union(reference, queries[pos]);
      }
      cover = BetterGreedy(residual, reference, layout, {},
                           &result.kernel_stats);
    }
    ++result.greedy_invocations;
    result.items_processed += residual.size();

    GPart gpart;
    gpart.id = static_cast<std::uint32_t>(result.g_parts.size());
    for (std::size_t i = 0; i < universe.size(); ++i) {
      if (owner[i] != kUnassigned) continue;
      for (MachineId m : layout.machines_of(universe[i])) {
        if (std::binary_search(cover.machines.begin(), cover.machines.end(), m)) {
          owner[i] = gpart.id;
          gpart.items.push_back(universe[i]);
          break;
        }
      }
    }
    gpart.machines = std::move(cover);
    result.g_parts.push_back(std::move(gpart));
  }

  result.query_covers.resize(queries.size());
  std::vector<std::uint32_t> touched;
  for (std::size_t pos = 0; pos < queries.size(); ++pos) {
    touched.clear();
    for (ItemId item : queries[pos]) touched.push_back(owner[position(item)]);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    Cover cover;
    for (std::uint32_t g : touched) {
      cover = UnionCovers(cover, result.g_parts[g].machines);
    }
    result.query_covers[pos] = std::move(cover);
  }
  return result;
}

}  // namespace incset
