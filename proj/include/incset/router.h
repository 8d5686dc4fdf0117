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

// Routing strategies over a fixed layout.

#ifndef INCSET_ROUTER_H_
#define INCSET_ROUTER_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "incset/clustering.h"
#include "incset/common.h"
#include "incset/gcpa.h"
#include "incset/layout.h"
#include "incset/set_cover.h"
#include "incset/workload.h"

namespace incset {

enum class Strategy {
  kBaseline,
  kNGreedy,
  kGcpaG,
  kGcpaBG,
  // Reconstructed "smarter" baseline: random uncovered item, then a random
  // machine holding it. Not part of the headline comparisons.
  kBetterBaseline,
};

std::string_view StrategyName(Strategy s);
// Throws ConfigError for an unknown name.
Strategy ParseStrategy(std::string_view name);

struct RoutingResult {
  QueryId query_id = 0;
  Cover cover;
  std::uint64_t elapsed_ns = 0;  // filled by callers that time per query
  Strategy strategy = Strategy::kNGreedy;
  bool valid = false;  // set by CheckResult
  // Cluster whose G-parts the real-time router consulted, if any.
  std::optional<ClusterId> cluster;

  std::size_t span() const { return cover.span(); }
};

// Sets and returns result.valid.
bool CheckResult(RoutingResult& result, const Query& query,
                 const DataLayout& layout);

// Machines respond in a seeded random order (per seed and query id); a
// responder joins the cover iff it holds a still-uncovered item.
RoutingResult RouteBaseline(const Query& query, const DataLayout& layout,
                            std::uint64_t seed);
RoutingResult RouteBetterBaseline(const Query& query, const DataLayout& layout,
                                  std::uint64_t seed);
RoutingResult RouteNGreedy(const Query& query, const DataLayout& layout);

enum class AssignMode {
  kFast,  // one random item, one random cluster holding it
  kFull,  // eligibility + expected-entropy minimization, fast as fallback
};

enum class GPartReuse {
  // Only the G-part's machines that hold one of the query's items.
  kQueryRelevantMachines,
  // Every machine stored with a touched G-part.
  kAllMachines,
};

struct RouterParams {
  ClusteringParams clustering;
  GcpaVariant variant = GcpaVariant::kBetterGreedy;
  AssignMode assign_mode = AssignMode::kFast;
  GPartReuse reuse = GPartReuse::kQueryRelevantMachines;
  // Queries this short skip G-part reuse and are covered directly.
  std::size_t direct_cover_max_len = 1;
  std::uint64_t seed = 1;
};

struct RealtimeCounters {
  std::uint64_t queries = 0;
  std::uint64_t direct = 0;            // short queries covered directly
  std::uint64_t items_via_gpart = 0;   // step 1
  std::uint64_t items_via_index = 0;   // step 2
  std::uint64_t items_via_greedy = 0;  // step 3
  std::uint64_t greedy_calls = 0;
  std::uint64_t unattributed = 0;      // no cluster shares an item
};

// Real-time router. Each pre-real-time cluster owns a table mapping its
// items to the G-parts that cover them; one extra table collects queries
// that share no item with any cluster. An arriving query is assigned to a
// cluster and covered from that cluster's table:
//   1. machines of every G-part holding one of its items,
//   2. remaining items already held by a selected machine,
//   3. greedy on whatever is left, which
//   4. becomes a new G-part of the cluster.
class RealtimeRouter {
 public:
  static constexpr std::int32_t kNoGPart = -1;

  RealtimeRouter(std::shared_ptr<const DataLayout> layout, RouterParams params);

  // Clusters the pre-real-time queries and runs GCPA on every cluster.
  static RealtimeRouter Precompute(std::span<const Query> pre_queries,
                                   std::shared_ptr<const DataLayout> layout,
                                   const RouterParams& params);

  // Restores a router from its parts (snapshot loading). `gpart_tables[i]`
  // names the table owning G-part i.
  static RealtimeRouter Restore(std::shared_ptr<const DataLayout> layout,
                                RouterParams params, Clustering clustering,
                                std::vector<GPart> g_parts,
                                std::vector<std::uint32_t> gpart_tables,
                                std::vector<std::uint32_t> attribution,
                                RealtimeCounters counters);

  // Assigns the query with params().assign_mode and covers it.
  RoutingResult Route(const Query& query);

  // Cluster chosen for `query`; nullopt when no cluster shares an item.
  std::optional<ClusterId> AssignCluster(const Query& query,
                                         AssignMode mode) const;

  const DataLayout& layout() const { return *layout_; }
  std::shared_ptr<const DataLayout> shared_layout() const { return layout_; }
  const RouterParams& params() const { return params_; }
  const Clustering& clustering() const { return clustering_; }

  // Tables 0..cluster_count()-1 belong to clusters; the last one holds
  // G-parts of unattributed queries.
  std::size_t table_count() const { return table_count_; }
  std::uint32_t unattributed_table() const { return table_count_ - 1; }
  const std::vector<GPart>& g_parts() const { return g_parts_; }
  const std::vector<std::uint32_t>& gpart_tables() const { return gpart_table_; }
  // G-part covering `item` in `table`, or kNoGPart.
  std::int32_t gpart_of(std::uint32_t table, ItemId item) const;

  // Real-time queries attributed to each cluster.
  const std::vector<std::uint32_t>& attribution() const { return attribution_; }
  const RealtimeCounters& counters() const { return counters_; }

  // Per-member covers produced while precomputing, by cluster.
  const std::vector<ClusterCoverResult>& cluster_results() const {
    return cluster_results_;
  }

  // Throws ValidationError describing the first broken invariant: within
  // each table the G-parts are disjoint, the table maps exactly their items,
  // and every G-part is covered by its machines.
  void CheckConsistency() const;

 private:
  struct Entry {
    std::uint32_t table;
    std::uint32_t gpart;
    // Bit h set when the item's h-th holder is one of the G-part's machines
    // (holders past 64 are looked up in the G-part instead).
    std::uint64_t holders;
  };

  std::int32_t AddGPart(std::uint32_t table, ItemSet items, Cover machines);
  RoutingResult CoverFromTable(const Query& query, std::uint32_t table);

  std::shared_ptr<const DataLayout> layout_;
  RouterParams params_;
  Clustering clustering_;
  std::vector<ClusterCoverResult> cluster_results_;
  std::uint32_t table_count_ = 1;
  // Item -> its G-part in every table that covers it, in insertion order.
  std::vector<std::vector<Entry>> entries_;
  std::vector<GPart> g_parts_;
  std::vector<std::uint32_t> gpart_table_;
  std::vector<std::uint32_t> attribution_;
  RealtimeCounters counters_;

  // Scratch for CoverFromTable.
  std::vector<std::uint32_t> machine_mark_;
  std::vector<std::uint32_t> gpart_mark_;
  std::uint32_t epoch_ = 0;
  std::vector<MachineId> selected_;
  ItemSet pending_;
  ItemSet uncovered_;
};

}  // namespace incset

#endif  // INCSET_ROUTER_H_
