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


// Python bindings for the core library.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "incset/bench.h"
#include "incset/cli.h"
#include "incset/clustering.h"
#include "incset/layout.h"
#include "incset/router.h"
#include "incset/set_cover.h"
#include "incset/workload.h"

namespace py = pybind11;
using namespace incset;

namespace {

std::vector<Query> ToQueries(const std::vector<ItemSet>& item_sets) {
  std::vector<Query> out;
  out.reserve(item_sets.size());
  for (std::size_t i = 0; i < item_sets.size(); ++i) {
    ItemSet items = item_sets[i];
    Normalize(items);
    out.push_back({static_cast<QueryId>(i), std::move(items)});
  }
  return out;
}

std::vector<ItemSet> ToItemSets(const std::vector<Query>& queries) {
  std::vector<ItemSet> out;
  out.reserve(queries.size());
  for (const Query& q : queries) out.push_back(q.items);
  return out;
}

py::dict SummaryDict(const SpanSummary& s) {
  py::dict d;
  d["avg"] = s.avg;
  d["p50"] = s.p50;
  d["p95"] = s.p95;
  d["std"] = s.std_dev;
  d["valid_fraction"] = s.valid_fraction;
  d["total"] = s.total;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Incremental set-cover query routing";

  auto error = py::register_exception<Error>(m, "IncsetError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", error.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<UncoverableItemError>(m, "UncoverableItemError", error.ptr());

  py::class_<PlacementConfig>(m, "PlacementConfig")
      .def(py::init<>())
      .def_readwrite("universe_size", &PlacementConfig::universe_size)
      .def_readwrite("machine_count", &PlacementConfig::machine_count)
      .def_readwrite("replication", &PlacementConfig::replication)
      .def_readwrite("seed", &PlacementConfig::seed);

  py::class_<DataLayout, std::shared_ptr<DataLayout>>(m, "DataLayout")
      .def(py::init([](MachineMap machines, std::uint32_t universe) {
             return std::make_shared<DataLayout>(std::move(machines), universe);
           }),
           py::arg("machines"), py::arg("universe_size"))
      .def_property_readonly("universe_size", &DataLayout::universe_size)
      .def_property_readonly("machine_count", &DataLayout::machine_count)
      .def_property_readonly("replication", &DataLayout::replication)
      .def_property_readonly("seed", &DataLayout::seed)
      .def_property_readonly("machines", &DataLayout::machines)
      .def("machines_of",
           [](const DataLayout& l, ItemId item) {
             auto s = l.machines_of(item);
             return std::vector<MachineId>(s.begin(), s.end());
           })
      .def("holds", &DataLayout::Holds)
      .def("save", [](const DataLayout& l, const std::string& path) { SavePlacement(path, l); })
      .def_static("load", [](const std::string& path) {
        return std::make_shared<DataLayout>(LoadPlacement(path));
      });

  m.def("generate_placement", [](const PlacementConfig& c) {
    return std::make_shared<DataLayout>(GeneratePlacement(c));
  });

  py::class_<WorkloadConfig>(m, "WorkloadConfig")
      .def(py::init<>())
      .def_readwrite("n", &WorkloadConfig::n)
      .def_readwrite("p", &WorkloadConfig::p)
      .def_readwrite("query_count", &WorkloadConfig::query_count)
      .def_readwrite("min_len", &WorkloadConfig::min_len)
      .def_readwrite("max_len", &WorkloadConfig::max_len)
      .def_readwrite("seed", &WorkloadConfig::seed)
      .def_readwrite("max_restarts", &WorkloadConfig::max_restarts);

  m.def("generate_workload",
        [](const WorkloadConfig& c) { return ToItemSets(GenerateWorkload(c).queries); },
        "Generated queries as sorted item lists.");
  m.def("mean_pairwise_intersection", [](const std::vector<ItemSet>& qs) {
    return MeanPairwiseIntersection(ToQueries(qs));
  });

  m.def("greedy_cover", [](ItemSet q, const DataLayout& l) {
    Normalize(q);
    return GreedyCover(q, l).machines;
  });
  m.def("better_greedy", [](ItemSet q1, ItemSet q2, const DataLayout& l) {
    Normalize(q1);
    Normalize(q2);
    return BetterGreedy(q1, q2, l).machines;
  });
  m.def("brute_force_cover", [](ItemSet q, const DataLayout& l) {
    Normalize(q);
    return BruteForceCover(q, l).machines;
  });
  m.def("validate_cover", [](const std::vector<MachineId>& machines, ItemSet q,
                             const DataLayout& l) {
    Normalize(q);
    return ValidateCover(Cover{machines}, q, l);
  });

  py::enum_<CandidateScope>(m, "CandidateScope")
      .value("SHARED_ITEMS", CandidateScope::kSharedItems)
      .value("ALL_CLUSTERS", CandidateScope::kAllClusters);

  py::class_<ClusteringParams>(m, "ClusteringParams")
      .def(py::init<>())
      .def_readwrite("theta1", &ClusteringParams::theta1)
      .def_readwrite("theta2", &ClusteringParams::theta2)
      .def_readwrite("scope", &ClusteringParams::scope)
      .def_readwrite("max_delta", &ClusteringParams::max_delta);

  py::class_<Clustering>(m, "Clustering")
      .def_property_readonly("cluster_count", &Clustering::cluster_count)
      .def_property_readonly("expected_entropy", &Clustering::expected_entropy)
      .def_property_readonly("progress", &Clustering::progress)
      .def("members", [](const Clustering& c, ClusterId id) { return c.cluster(id).members(); })
      .def("clusters_formed_at", &ClustersFormedAt, py::arg("queries_pct"));

  m.def("cluster_queries",
        [](const std::vector<ItemSet>& qs, const ClusteringParams& p) {
          return SimpleEntropyCluster(ToQueries(qs), p);
        },
        py::arg("queries"), py::arg("params") = ClusteringParams{});

  m.def("delta_entropy_single",
        [](double n, double p, double total, double omega, bool member) {
          return DeltaExpectedEntropySingle({.n = n, .p = p, .M = total, .omega = omega}, member);
        },
        py::arg("n"), py::arg("p"), py::arg("total"), py::arg("omega") = 1.0,
        py::arg("member"));

  py::enum_<GcpaVariant>(m, "GcpaVariant")
      .value("GREEDY", GcpaVariant::kGreedy)
      .value("BETTER_GREEDY", GcpaVariant::kBetterGreedy);
  py::enum_<AssignMode>(m, "AssignMode")
      .value("FAST", AssignMode::kFast)
      .value("FULL", AssignMode::kFull);
  py::enum_<GPartReuse>(m, "GPartReuse")
      .value("QUERY_RELEVANT", GPartReuse::kQueryRelevantMachines)
      .value("ALL_MACHINES", GPartReuse::kAllMachines);

  py::class_<RouterParams>(m, "RouterParams")
      .def(py::init<>())
      .def_readwrite("clustering", &RouterParams::clustering)
      .def_readwrite("variant", &RouterParams::variant)
      .def_readwrite("assign_mode", &RouterParams::assign_mode)
      .def_readwrite("reuse", &RouterParams::reuse)
      .def_readwrite("direct_cover_max_len", &RouterParams::direct_cover_max_len)
      .def_readwrite("seed", &RouterParams::seed);

  py::class_<RealtimeRouter>(m, "RealtimeRouter")
      .def(py::init([](const std::vector<ItemSet>& pretrain, std::shared_ptr<DataLayout> layout,
                       const RouterParams& params) {
             return RealtimeRouter::Precompute(ToQueries(pretrain), std::move(layout), params);
           }),
           py::arg("pretrain"), py::arg("layout"), py::arg("params") = RouterParams{})
      .def("route",
           [](RealtimeRouter& r, ItemSet items) {
             Normalize(items);
             return r.Route(Query{0, std::move(items)}).cover.machines;
           })
      .def_property_readonly("gpart_count", [](const RealtimeRouter& r) { return r.g_parts().size(); })
      .def_property_readonly("cluster_count",
                             [](const RealtimeRouter& r) { return r.clustering().cluster_count(); })
      .def("check_consistency", &RealtimeRouter::CheckConsistency);

  m.def("route_baseline", [](ItemSet q, const DataLayout& l, std::uint64_t seed) {
    Normalize(q);
    return RouteBaseline(Query{0, std::move(q)}, l, seed).cover.machines;
  });

  m.def("run_benchmark",
        [](std::uint64_t seed, std::uint32_t repetitions, std::uint32_t query_count,
           std::uint32_t universe, std::uint32_t machines) {
          BenchConfig c;
          c.seed = seed;
          c.repetitions = repetitions;
          c.workload.query_count = query_count;
          c.workload.n = universe;
          c.workload.p = 0.99 / universe;
          c.placement.universe_size = universe;
          c.placement.machine_count = machines;
          const MetricsReport report = RunBenchmark(c);
          py::dict out;
          for (const StrategyReport& s : report.strategies) {
            py::dict d = SummaryDict(s.summary);
            d["route_ns_per_query"] = s.route_ns_per_query;
            out[py::str(std::string(StrategyName(s.strategy)))] = d;
          }
          return out;
        },
        py::arg("seed") = 1, py::arg("repetitions") = 1, py::arg("query_count") = 5000,
        py::arg("universe") = 10000, py::arg("machines") = 50,
        "Per-strategy span summaries keyed by strategy name.");

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::vector<const char*> argv = {"incset"};
          for (const auto& a : args) argv.push_back(a.c_str());
          std::ostringstream out, err;
          const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
