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
#include <string>
#include <utility>

namespace incset {

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kBaseline:
      return "baseline";
    case Strategy::kNGreedy:
      return "ngreedy";
    case Strategy::kGcpaG:
      return "gcpa-g";
    case Strategy::kGcpaBG:
      return "gcpa-bg";
    case Strategy::kBetterBaseline:
      return "better-baseline";
  }
  return "unknown";
}

Strategy ParseStrategy(std::string_view name) {
  for (Strategy s : {Strategy::kBaseline, Strategy::kNGreedy, Strategy::kGcpaG,
                     Strategy::kGcpaBG, Strategy::kBetterBaseline}) {
    if (StrategyName(s) == name) return s;
  }
  throw ConfigError("unknown strategy '" + std::string(name) + "'");
}

bool CheckResult(RoutingResult& result, const Query& query,
                 const DataLayout& layout) {
  result.valid = ValidateCover(result.cover, query.items, layout);
  return result.valid;
}

namespace {

void RequireCoverable(const Query& query, const DataLayout& layout) {
  for (ItemId item : query.items) {
    if (layout.machines_of(item).empty()) throw UncoverableItemError(item);
  }
}

}  // namespace

// Machines answer in a random order and a responder is kept when it holds a
// still-uncovered item. Equivalently, each item is covered by its earliest
// responding holder, and the cover is the set of those holders.
RoutingResult RouteBaseline(const Query& query, const DataLayout& layout,
                            std::uint64_t seed) {
  RequireCoverable(query, layout);
  RoutingResult result;
  result.query_id = query.id;
  result.strategy = Strategy::kBaseline;

  std::vector<MachineId> order = CandidateMachines(query.items, layout);
  StreamRng rng(MixSeed(seed, query.id));
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.Uniform(i)]);
  }
  thread_local std::vector<std::uint32_t> rank;
  if (rank.size() < layout.machine_count()) rank.resize(layout.machine_count());
  for (std::size_t i = 0; i < order.size(); ++i) {
    rank[order[i]] = static_cast<std::uint32_t>(i);
  }
  for (ItemId item : query.items) {
    const auto holders = layout.machines_of(item);
    MachineId first = holders[0];
    for (MachineId m : holders) {
      if (rank[m] < rank[first]) first = m;
    }
    result.cover.machines.push_back(first);
  }
  std::sort(result.cover.machines.begin(), result.cover.machines.end());
  result.cover.machines.erase(
      std::unique(result.cover.machines.begin(), result.cover.machines.end()),
      result.cover.machines.end());
  return result;
}

RoutingResult RouteBetterBaseline(const Query& query, const DataLayout& layout,
                                  std::uint64_t seed) {
  RequireCoverable(query, layout);
  RoutingResult result;
  result.query_id = query.id;
  result.strategy = Strategy::kBetterBaseline;
  StreamRng rng(MixSeed(seed, query.id));
  ItemSet uncovered = query.items;
  while (!uncovered.empty()) {
    const ItemId item = uncovered[rng.Uniform(uncovered.size())];
    const auto holders = layout.machines_of(item);
    const MachineId m = holders[rng.Uniform(holders.size())];
    result.cover.machines.push_back(m);
    std::erase_if(uncovered, [&](ItemId x) { return layout.Holds(m, x); });
  }
  std::sort(result.cover.machines.begin(), result.cover.machines.end());
  result.cover.machines.erase(
      std::unique(result.cover.machines.begin(), result.cover.machines.end()),
      result.cover.machines.end());
  return result;
}

RoutingResult RouteNGreedy(const Query& query, const DataLayout& layout) {
  RoutingResult result;
  result.query_id = query.id;
  result.strategy = Strategy::kNGreedy;
  result.cover = GreedyCover(query.items, layout);
  return result;
}

RealtimeRouter::RealtimeRouter(std::shared_ptr<const DataLayout> layout,
                               RouterParams params)
    : layout_(std::move(layout)), params_(params) {
  if (!layout_) throw PreconditionError("router needs a layout");
  params_.clustering.Validate();
  entries_.resize(layout_->universe_size());
  machine_mark_.assign(layout_->machine_count(), 0);
}

std::int32_t RealtimeRouter::gpart_of(std::uint32_t table, ItemId item) const {
  if (item >= entries_.size()) return kNoGPart;
  for (const Entry& e : entries_[item]) {
    if (e.table == table) return static_cast<std::int32_t>(e.gpart);
  }
  return kNoGPart;
}

std::int32_t RealtimeRouter::AddGPart(std::uint32_t table, ItemSet items,
                                      Cover machines) {
  const auto id = static_cast<std::uint32_t>(g_parts_.size());
  for (ItemId item : items) {
    std::uint64_t mask = 0;
    const auto holders = layout_->machines_of(item);
    for (std::size_t h = 0; h < holders.size() && h < 64; ++h) {
      if (std::binary_search(machines.machines.begin(), machines.machines.end(),
                             holders[h])) {
        mask |= std::uint64_t{1} << h;
      }
    }
    entries_[item].push_back({table, id, mask});
  }
  g_parts_.push_back(GPart{id, std::move(items), std::move(machines)});
  gpart_table_.push_back(table);
  gpart_mark_.push_back(0);
  return static_cast<std::int32_t>(id);
}

RealtimeRouter RealtimeRouter::Precompute(
    std::span<const Query> pre_queries,
    std::shared_ptr<const DataLayout> layout, const RouterParams& params) {
  RealtimeRouter router(std::move(layout), params);
  router.clustering_ = SimpleEntropyCluster(pre_queries, params.clustering);
  const std::size_t clusters = router.clustering_.cluster_count();
  router.attribution_.assign(clusters, 0);
  router.table_count_ = static_cast<std::uint32_t>(clusters + 1);

  std::vector<const Query*> by_id;
  for (const Query& q : pre_queries) {
    if (q.id >= by_id.size()) by_id.resize(q.id + 1, nullptr);
    by_id[q.id] = &q;
  }
  std::vector<ItemSet> members;
  for (const Cluster& cluster : router.clustering_.clusters()) {
    members.clear();
    for (QueryId id : cluster.members()) members.push_back(by_id[id]->items);
    ClusterCoverResult processed =
        GcpaProcess(members, *router.layout_, params.variant);
    for (const GPart& gpart : processed.g_parts) {
      router.AddGPart(cluster.id(), gpart.items, gpart.machines);
    }
    router.cluster_results_.push_back(std::move(processed));
  }
  return router;
}

RealtimeRouter RealtimeRouter::Restore(std::shared_ptr<const DataLayout> layout,
                                       RouterParams params,
                                       Clustering clustering,
                                       std::vector<GPart> g_parts,
                                       std::vector<std::uint32_t> gpart_tables,
                                       std::vector<std::uint32_t> attribution,
                                       RealtimeCounters counters) {
  RealtimeRouter router(std::move(layout), params);
  router.clustering_ = std::move(clustering);
  router.table_count_ =
      static_cast<std::uint32_t>(router.clustering_.cluster_count() + 1);
  if (gpart_tables.size() != g_parts.size()) {
    throw ValidationError("every G-part needs an owning table");
  }
  for (std::size_t i = 0; i < g_parts.size(); ++i) {
    if (g_parts[i].id != i) throw ValidationError("G-part ids must be dense");
    if (gpart_tables[i] >= router.table_count_) {
      throw ValidationError("G-part " + std::to_string(i) + " names an unknown table");
    }
    for (ItemId item : g_parts[i].items) {
      if (item >= router.layout_->universe_size()) {
        throw ValidationError("G-part item outside universe");
      }
    }
    router.AddGPart(gpart_tables[i], std::move(g_parts[i].items),
                    std::move(g_parts[i].machines));
  }
  if (attribution.size() != router.clustering_.cluster_count()) {
    throw ValidationError("attribution must have one entry per cluster");
  }
  router.attribution_ = std::move(attribution);
  router.counters_ = counters;
  router.CheckConsistency();
  return router;
}

std::optional<ClusterId> RealtimeRouter::AssignCluster(const Query& query,
                                                       AssignMode mode) const {
  if (query.items.empty() || clustering_.cluster_count() == 0) return std::nullopt;
  if (mode == AssignMode::kFull) {
    if (auto best = BestCluster(clustering_, query.items, params_.clustering)) {
      return best;
    }
  }
  // Random start item; if it belongs to no cluster, the next items are tried
  // in cyclic order.
  StreamRng rng(MixSeed(params_.seed, query.id));
  const std::size_t start = rng.Uniform(query.items.size());
  for (std::size_t i = 0; i < query.items.size(); ++i) {
    std::size_t pos = start + i;
    if (pos >= query.items.size()) pos -= query.items.size();
    const auto clusters = clustering_.clusters_of(query.items[pos]);
    if (!clusters.empty()) return clusters[rng.Uniform(clusters.size())];
  }
  return std::nullopt;
}

RoutingResult RealtimeRouter::Route(const Query& query) {
  const DataLayout& layout = *layout_;
  ++counters_.queries;
  if (query.items.size() <= params_.direct_cover_max_len) {
    RoutingResult result;
    result.query_id = query.id;
    result.strategy = params_.variant == GcpaVariant::kGreedy ? Strategy::kGcpaG
                                                              : Strategy::kGcpaBG;
    result.cover = GreedyCover(query.items, layout);
    ++counters_.direct;
    return result;
  }
  for (ItemId item : query.items) {
    if (layout.machines_of(item).empty()) throw UncoverableItemError(item);
  }
  const std::optional<ClusterId> cluster = AssignCluster(query, params_.assign_mode);
  if (cluster) {
    ++attribution_[*cluster];
  } else {
    ++counters_.unattributed;
  }
  RoutingResult result = CoverFromTable(query, cluster ? *cluster : unattributed_table());
  result.cluster = cluster;
  return result;
}

RoutingResult RealtimeRouter::CoverFromTable(const Query& query,
                                             std::uint32_t table) {
  const DataLayout& layout = *layout_;
  RoutingResult result;
  result.query_id = query.id;
  result.strategy = params_.variant == GcpaVariant::kGreedy ? Strategy::kGcpaG
                                                            : Strategy::kGcpaBG;
  if (++epoch_ == 0) {
    std::fill(machine_mark_.begin(), machine_mark_.end(), 0);
    std::fill(gpart_mark_.begin(), gpart_mark_.end(), 0);
    epoch_ = 1;
  }
  selected_.clear();
  pending_.clear();
  uncovered_.clear();

  for (ItemId item : query.items) {
    const Entry* found = nullptr;
    for (const Entry& e : entries_[item]) {
      if (e.table == table) {
        found = &e;
        break;
      }
    }
    if (!found) {
      pending_.push_back(item);
      continue;
    }
    ++counters_.items_via_gpart;
    const std::uint32_t g = found->gpart;
    if (params_.reuse == GPartReuse::kAllMachines) {
      if (gpart_mark_[g] == epoch_) continue;
      gpart_mark_[g] = epoch_;
      for (MachineId m : g_parts_[g].machines.machines) {
        if (machine_mark_[m] != epoch_) {
          machine_mark_[m] = epoch_;
          selected_.push_back(m);
        }
      }
    } else {
      // The G-part's machines holding this item; together they still cover
      // every query item inside the G-part.
      const auto holders = layout.machines_of(item);
      for (std::size_t h = 0; h < holders.size(); ++h) {
        const MachineId m = holders[h];
        if (machine_mark_[m] == epoch_) continue;
        const bool owned =
            h < 64 ? (found->holders >> h) & 1
                   : std::binary_search(g_parts_[g].machines.machines.begin(),
                                        g_parts_[g].machines.machines.end(), m);
        if (owned) {
          machine_mark_[m] = epoch_;
          selected_.push_back(m);
        }
      }
    }
  }
  for (ItemId item : pending_) {
    bool held = false;
    for (MachineId m : layout.machines_of(item)) {
      if (machine_mark_[m] == epoch_) {
        held = true;
        break;
      }
    }
    if (held) {
      ++counters_.items_via_index;
    } else {
      uncovered_.push_back(item);
    }
  }
  if (!uncovered_.empty()) {
    Cover extra = GreedyCover(uncovered_, layout);
    ++counters_.greedy_calls;
    counters_.items_via_greedy += uncovered_.size();
    for (MachineId m : extra.machines) {
      if (machine_mark_[m] != epoch_) {
        machine_mark_[m] = epoch_;
        selected_.push_back(m);
      }
    }
    AddGPart(table, uncovered_, std::move(extra));
  }
  std::sort(selected_.begin(), selected_.end());
  result.cover.machines = selected_;
  return result;
}

void RealtimeRouter::CheckConsistency() const {
  if (table_count_ != clustering_.cluster_count() + 1) {
    throw ValidationError("table count must be cluster count + 1");
  }
  if (gpart_table_.size() != g_parts_.size()) {
    throw ValidationError("G-part ownership list has the wrong length");
  }
  std::vector<std::vector<Entry>> expected(entries_.size());
  for (const GPart& gpart : g_parts_) {
    if (!std::is_sorted(gpart.items.begin(), gpart.items.end())) {
      throw ValidationError("G-part " + std::to_string(gpart.id) +
                            " items not sorted");
    }
    for (ItemId item : gpart.items) {
      if (item >= expected.size()) {
        throw ValidationError("G-part item outside universe");
      }
      for (const Entry& e : expected[item]) {
        if (e.table == gpart_table_[gpart.id]) {
          throw ValidationError("item " + std::to_string(item) +
                                " appears in two G-parts of table " +
                                std::to_string(e.table));
        }
      }
      std::uint64_t mask = 0;
      const auto holders = layout_->machines_of(item);
      for (std::size_t h = 0; h < holders.size() && h < 64; ++h) {
        if (std::binary_search(gpart.machines.machines.begin(),
                               gpart.machines.machines.end(), holders[h])) {
          mask |= std::uint64_t{1} << h;
        }
      }
      expected[item].push_back({gpart_table_[gpart.id], gpart.id, mask});
    }
    if (!ValidateCover(gpart.machines, gpart.items, *layout_)) {
      throw ValidationError("G-part " + std::to_string(gpart.id) +
                            " not covered by its machines");
    }
  }
  for (std::size_t item = 0; item < expected.size(); ++item) {
    const auto& want = expected[item];
    const auto& have = entries_[item];
    const bool same = want.size() == have.size() &&
                      std::equal(want.begin(), want.end(), have.begin(),
                                 [](const Entry& a, const Entry& b) {
                                   return a.table == b.table && a.gpart == b.gpart &&
                                          a.holders == b.holders;
                                 });
    if (!same) {
      throw ValidationError("item " + std::to_string(item) +
                            " lookup entries disagree with the G-parts");
    }
  }
}

}  // namespace incset
