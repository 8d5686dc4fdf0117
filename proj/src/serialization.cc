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

#include "incset/serialization.h"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "text_util.h"

namespace incset {
namespace {

using Json = nlohmann::ordered_json;

Json ClusterToJson(const Cluster& k) {
  Json items = Json::array();
  for (const auto& [item, count] : k.item_counts()) items.push_back({item, count});
  return Json{{"id", k.id()}, {"members", k.members()}, {"items", std::move(items)}};
}

Json GPartToJson(const GPart& g) {
  return Json{{"id", g.id}, {"items", g.items}, {"machines", g.machines.machines}};
}

// One array element per line keeps large dumps diffable.
std::string JoinLines(const Json& array) {
  std::string out = "[";
  for (std::size_t i = 0; i < array.size(); ++i) {
    out += i ? ",\n  " : "\n  ";
    out += array[i].dump();
  }
  out += array.empty() ? "]" : "\n]";
  return out;
}

std::string ClusteringBody(const Clustering& clustering) {
  Json clusters = Json::array();
  for (const Cluster& k : clustering.clusters()) clusters.push_back(ClusterToJson(k));
  return "{\"total_clustered\":" + std::to_string(clustering.total_clustered()) +
         ",\"progress\":" + Json(clustering.progress()).dump() +
         ",\"clusters\":" + JoinLines(clusters) + "}";
}

// `tables`, when non-empty, adds each G-part's owning table.
std::string GPartsBody(std::span<const GPart> g_parts,
                       std::span<const std::uint32_t> tables = {}) {
  Json array = Json::array();
  for (std::size_t i = 0; i < g_parts.size(); ++i) {
    Json g = GPartToJson(g_parts[i]);
    if (!tables.empty()) g["table"] = tables[i];
    array.push_back(std::move(g));
  }
  return JoinLines(array);
}

Json ParseJson(std::istream& in, const char* what) {
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what(), 0);
  }
}

void ExpectFormat(const Json& j, const char* format, int version) {
  if (!j.is_object() || j.value("format", "") != format) {
    throw ValidationError(std::string("not a ") + format + " document");
  }
  if (j.value("version", -1) != version) {
    throw ValidationError(std::string("unsupported ") + format + " version");
  }
}

Clustering ClusteringFromJson(const Json& j) {
  std::vector<Cluster> clusters;
  for (const Json& c : j.at("clusters")) {
    std::vector<Cluster::ItemCount> counts;
    for (const Json& pair : c.at("items")) {
      counts.emplace_back(pair.at(0).get<ItemId>(), pair.at(1).get<std::uint32_t>());
    }
    clusters.push_back(Cluster::FromParts(c.at("id").get<ClusterId>(),
                                          c.at("members").get<std::vector<QueryId>>(),
                                          std::move(counts)));
  }
  Clustering out = Clustering::FromClusters(
      std::move(clusters), j.at("progress").get<std::vector<std::uint32_t>>());
  if (out.total_clustered() != j.at("total_clustered").get<std::uint64_t>()) {
    throw ValidationError("total_clustered disagrees with cluster sizes");
  }
  return out;
}

std::vector<GPart> GPartsFromJson(const Json& j) {
  std::vector<GPart> out;
  for (const Json& g : j) {
    GPart gpart;
    gpart.id = g.at("id").get<std::uint32_t>();
    gpart.items = g.at("items").get<ItemSet>();
    gpart.machines.machines = g.at("machines").get<std::vector<MachineId>>();
    out.push_back(std::move(gpart));
  }
  return out;
}

template <typename E>
E EnumFrom(const Json& j, const char* key, std::initializer_list<std::pair<const char*, E>> names) {
  const std::string v = j.at(key).get<std::string>();
  for (const auto& [name, value] : names) {
    if (v == name) return value;
  }
  throw ValidationError(std::string("bad value for ") + key + ": " + v);
}

}  // namespace

void WriteClustering(std::ostream& out, const Clustering& clustering) {
  out << "{\"format\":\"clustering\",\"version\":" << kClusteringDumpVersion
      << ",\"clustering\":" << ClusteringBody(clustering) << "}\n";
}

Clustering ReadClustering(std::istream& in) {
  const Json j = ParseJson(in, "clustering");
  ExpectFormat(j, "clustering", kClusteringDumpVersion);
  return ClusteringFromJson(j.at("clustering"));
}

void WriteGPartTable(std::ostream& out, std::span<const GPart> g_parts) {
  out << "{\"format\":\"gparts\",\"version\":" << kGPartTableVersion
      << ",\"gparts\":" << GPartsBody(g_parts) << "}\n";
}

std::vector<GPart> ReadGPartTable(std::istream& in) {
  const Json j = ParseJson(in, "gparts");
  ExpectFormat(j, "gparts", kGPartTableVersion);
  return GPartsFromJson(j.at("gparts"));
}

void WriteRouterSnapshot(std::ostream& out, const RealtimeRouter& router) {
  const DataLayout& layout = router.layout();
  const RouterParams& p = router.params();
  const RealtimeCounters& c = router.counters();
  Json layout_j{{"universe", layout.universe_size()},
                {"machines", layout.machine_count()},
                {"replication", layout.replication()},
                {"seed", layout.seed()}};
  Json params_j{
      {"theta1", p.clustering.theta1},
      {"theta2", p.clustering.theta2},
      {"scope", p.clustering.scope == CandidateScope::kSharedItems ? "shared" : "all"},
      {"max_delta", std::isfinite(p.clustering.max_delta) ? Json(p.clustering.max_delta)
                                                          : Json(nullptr)},
      {"variant", p.variant == GcpaVariant::kGreedy ? "g" : "bg"},
      {"assign_mode", p.assign_mode == AssignMode::kFast ? "fast" : "full"},
      {"reuse", p.reuse == GPartReuse::kAllMachines ? "all" : "relevant"},
      {"direct_cover_max_len", p.direct_cover_max_len},
      {"seed", p.seed}};
  Json counters_j{{"queries", c.queries},
                  {"direct", c.direct},
                  {"items_via_gpart", c.items_via_gpart},
                  {"items_via_index", c.items_via_index},
                  {"items_via_greedy", c.items_via_greedy},
                  {"greedy_calls", c.greedy_calls},
                  {"unattributed", c.unattributed}};
  out << "{\"format\":\"router_snapshot\",\"version\":" << kRouterSnapshotVersion
      << ",\n\"layout\":" << layout_j.dump() << ",\n\"params\":" << params_j.dump()
      << ",\n\"counters\":" << counters_j.dump()
      << ",\n\"attribution\":" << Json(router.attribution()).dump()
      << ",\n\"clustering\":" << ClusteringBody(router.clustering())
      << ",\n\"gparts\":" << GPartsBody(router.g_parts(), router.gpart_tables())
      << "}\n";
}

RealtimeRouter ReadRouterSnapshot(std::istream& in,
                                  std::shared_ptr<const DataLayout> layout) {
  const Json j = ParseJson(in, "router snapshot");
  ExpectFormat(j, "router_snapshot", kRouterSnapshotVersion);
  const Json& l = j.at("layout");
  if (l.at("universe").get<std::uint32_t>() != layout->universe_size() ||
      l.at("machines").get<std::uint32_t>() != layout->machine_count() ||
      l.at("replication").get<std::uint32_t>() != layout->replication() ||
      l.at("seed").get<std::uint64_t>() != layout->seed()) {
    throw ValidationError("snapshot was taken against a different layout");
  }
  const Json& pj = j.at("params");
  RouterParams params;
  params.clustering.theta1 = pj.at("theta1").get<double>();
  params.clustering.theta2 = pj.at("theta2").get<double>();
  params.clustering.scope = EnumFrom<CandidateScope>(
      pj, "scope", {{"shared", CandidateScope::kSharedItems}, {"all", CandidateScope::kAllClusters}});
  params.clustering.max_delta = pj.at("max_delta").is_null()
                                    ? std::numeric_limits<double>::infinity()
                                    : pj.at("max_delta").get<double>();
  params.variant = EnumFrom<GcpaVariant>(
      pj, "variant", {{"g", GcpaVariant::kGreedy}, {"bg", GcpaVariant::kBetterGreedy}});
  params.assign_mode = EnumFrom<AssignMode>(
      pj, "assign_mode", {{"fast", AssignMode::kFast}, {"full", AssignMode::kFull}});
  params.reuse = EnumFrom<GPartReuse>(
      pj, "reuse",
      {{"relevant", GPartReuse::kQueryRelevantMachines}, {"all", GPartReuse::kAllMachines}});
  params.direct_cover_max_len = pj.at("direct_cover_max_len").get<std::size_t>();
  params.seed = pj.at("seed").get<std::uint64_t>();

  const Json& cj = j.at("counters");
  RealtimeCounters counters;
  counters.queries = cj.at("queries").get<std::uint64_t>();
  counters.direct = cj.at("direct").get<std::uint64_t>();
  counters.items_via_gpart = cj.at("items_via_gpart").get<std::uint64_t>();
  counters.items_via_index = cj.at("items_via_index").get<std::uint64_t>();
  counters.items_via_greedy = cj.at("items_via_greedy").get<std::uint64_t>();
  counters.greedy_calls = cj.at("greedy_calls").get<std::uint64_t>();
  counters.unattributed = cj.at("unattributed").get<std::uint64_t>();

  std::vector<std::uint32_t> tables;
  for (const Json& g : j.at("gparts")) tables.push_back(g.at("table").get<std::uint32_t>());
  return RealtimeRouter::Restore(
      std::move(layout), params, ClusteringFromJson(j.at("clustering")),
      GPartsFromJson(j.at("gparts")), std::move(tables),
      j.at("attribution").get<std::vector<std::uint32_t>>(), counters);
}

void SaveRouterSnapshot(const std::string& path, const RealtimeRouter& router) {
  auto out = internal::OpenForWrite(path);
  WriteRouterSnapshot(out, router);
}

RealtimeRouter LoadRouterSnapshot(const std::string& path,
                                  std::shared_ptr<const DataLayout> layout) {
  auto in = internal::OpenForRead(path);
  return ReadRouterSnapshot(in, std::move(layout));
}

}  // namespace incset
