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


#include "incset/cli.h"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "incset/bench.h"
#include "incset/clustering.h"
#include "incset/layout.h"
#include "incset/router.h"
#include "incset/serialization.h"
#include "incset/workload.h"

namespace incset {
namespace {

constexpr const char* kSeedEnv = "ROUTER_SEED";

// "-" writes to `fallback` (standard output).
void WriteTo(const std::string& path, std::ostream& fallback,
             const std::function<void(std::ostream&)>& write) {
  if (path == "-") {
    write(fallback);
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write(out);
  if (!out) throw Error("failed writing '" + path + "'");
}

template <typename E>
CLI::CheckedTransformer EnumOf(const std::map<std::string, E>& names) {
  return CLI::CheckedTransformer(names, CLI::ignore_case);
}

const std::map<std::string, FrontierMode> kFrontierNames = {
    {"extend", FrontierMode::kExtend},
    {"start-neighbors", FrontierMode::kStartNeighborsOnly}};
const std::map<std::string, CandidateScope> kScopeNames = {
    {"shared", CandidateScope::kSharedItems}, {"all", CandidateScope::kAllClusters}};
const std::map<std::string, AssignMode> kAssignNames = {
    {"fast", AssignMode::kFast}, {"full", AssignMode::kFull}};
const std::map<std::string, GPartReuse> kReuseNames = {
    {"relevant", GPartReuse::kQueryRelevantMachines}, {"all", GPartReuse::kAllMachines}};
const std::map<std::string, GcpaVariant> kVariantNames = {
    {"g", GcpaVariant::kGreedy}, {"bg", GcpaVariant::kBetterGreedy}};

void AddSeed(CLI::App* app, std::uint64_t& seed) {
  app->add_option("--seed", seed, "Random seed")->envname(kSeedEnv)->capture_default_str();
}

// Consumed by ExpandConfig before parsing; registered so --help lists it.
void AddConfig(CLI::App* app) {
  app->add_option("--config", "Flat key=value file; keys are long flag names, flags win")
      ->type_name("FILE")
      ->expected(1);
}

bool HasFlag(const std::vector<std::string>& args, const std::string& flag) {
  for (const std::string& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

std::string_view TrimView(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

// Replaces "--config FILE" with one "--key=value" per file entry whose flag
// is not already on the command line. '#' starts a comment line.
std::vector<std::string> ExpandConfig(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config needs a file");
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::vector<std::string> extra;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    const std::string_view t = TrimView(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(path + ":" + std::to_string(n) + ": expected key=value");
    }
    std::string key(TrimView(t.substr(0, eq)));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(n) + ": empty key");
    const std::string flag = "--" + key;
    if (!HasFlag(args, flag) && !HasFlag(extra, flag)) {
      extra.push_back(flag + "=" + std::string(TrimView(t.substr(eq + 1))));
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

void AddClusteringFlags(CLI::App* app, ClusteringParams& p) {
  app->add_option("--theta1", p.theta1, "Probability at which an item is common in a cluster")
      ->capture_default_str();
  app->add_option("--theta2", p.theta2, "Fraction of common items a query needs to join")
      ->capture_default_str();
  app->add_option("--scope", p.scope, "Candidate clusters: shared or all")
      ->transform(EnumOf(kScopeNames))
      ->default_str("shared");
  app->add_option("--max-delta", p.max_delta,
                  "Found a new cluster when the best placement raises expected entropy by more")
      ->default_str("inf");
}

struct WorkloadFlags {
  WorkloadConfig config;
  std::optional<double> p;
  std::optional<double> np;
  CLI::Option* p_opt = nullptr;

  void Add(CLI::App* app) {
    p_opt = app->add_option("--p", p, "Edge probability of the item graph");
    app->add_option("--np", np, "Edge probability times item count (default 0.99)")
        ->excludes(p_opt);
    app->add_option("--count", config.query_count, "Number of queries")->capture_default_str();
    app->add_option("--min-len", config.min_len, "Shortest query")->capture_default_str();
    app->add_option("--max-len", config.max_len, "Longest query")->capture_default_str();
    app->add_option("--frontier", config.frontier, "Sampling frontier: extend or start-neighbors")
        ->transform(EnumOf(kFrontierNames))
        ->default_str("extend");
    app->add_option("--max-restarts", config.max_restarts,
                    "Start vertices tried before a query is clamped")
        ->capture_default_str();
  }

  // Resolves p for an item graph of `n` vertices.
  WorkloadConfig Resolve(std::uint32_t n) const {
    WorkloadConfig out = config;
    out.n = n;
    if (p) {
      out.p = *p;
    } else {
      out.p = np.value_or(0.99) / n;
    }
    return out;
  }
};

std::vector<Strategy> ParseStrategies(const std::vector<std::string>& names) {
  std::vector<Strategy> out;
  for (const std::string& name : names) out.push_back(ParseStrategy(name));
  return out;
}

// ---- gen-placement ----

struct GenPlacementCmd {
  PlacementConfig config;
  std::string out;

  void Add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("gen-placement", "Generate a random item placement");
    AddConfig(sub);
    sub->add_option("--items", config.universe_size, "Universe size")->capture_default_str();
    sub->add_option("--machines", config.machine_count, "Machine count")->capture_default_str();
    sub->add_option("--replication", config.replication, "Replicas per item")
        ->capture_default_str();
    AddSeed(sub, config.seed);
    sub->add_option("--out", out, "Placement file ('-' for stdout)")->required();
  }

  void Run(std::ostream& stdout_stream) const {
    const DataLayout layout = GeneratePlacement(config);
    WriteTo(out, stdout_stream, [&](std::ostream& o) { WritePlacement(o, layout); });
  }
};

// ---- gen-queries ----

struct GenQueriesCmd {
  std::uint32_t items = 10000;
  WorkloadFlags workload;
  std::uint64_t seed = 1;
  std::string out;

  void Add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("gen-queries", "Generate a correlated query workload");
    AddConfig(sub);
    sub->add_option("--items", items, "Item graph size")->capture_default_str();
    workload.Add(sub);
    AddSeed(sub, seed);
    sub->add_option("--out", out, "Query file ('-' for stdout)")->required();
  }

  void Run(std::ostream& stdout_stream) const {
    WorkloadConfig config = workload.Resolve(items);
    config.seed = seed;
    const Workload w = GenerateWorkload(config);
    WriteTo(out, stdout_stream, [&](std::ostream& o) { WriteQueryLog(o, w.queries); });
  }
};

// ---- cluster ----

struct ClusterCmd {
  std::string queries;
  ClusteringParams params;
  std::string out;
  std::string progress_out;
  std::string quality_out;
  std::string cluster_quality_out;

  void Add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("cluster", "Cluster a query file incrementally");
    AddConfig(sub);
    sub->add_option("--queries", queries, "Query file")->required();
    AddClusteringFlags(sub, params);
    sub->add_option("--out", out, "Clustering dump (JSON)");
    sub->add_option("--progress-out", progress_out, "Cluster-progress CSV");
    sub->add_option("--quality-out", quality_out, "Item-probability histogram CSV");
    sub->add_option("--cluster-quality-out", cluster_quality_out,
                    "Per-cluster average-probability CSV");
  }

  void Run(std::ostream& stdout_stream) const {
    params.Validate();
    const Workload w = LoadQueryLog(queries);
    const Clustering clustering = SimpleEntropyCluster(w.queries, params);
    if (!out.empty()) {
      WriteTo(out, stdout_stream, [&](std::ostream& o) { WriteClustering(o, clustering); });
    }
    if (!progress_out.empty()) {
      WriteTo(progress_out, stdout_stream,
              [&](std::ostream& o) { WriteProgressCsv(o, clustering); });
    }
    if (!quality_out.empty() || !cluster_quality_out.empty()) {
      const QualityReport quality = BuildQualityReport(clustering);
      if (!quality_out.empty()) {
        WriteTo(quality_out, stdout_stream, [&](std::ostream& o) { WriteQualityCsv(o, quality); });
      }
      if (!cluster_quality_out.empty()) {
        WriteTo(cluster_quality_out, stdout_stream,
                [&](std::ostream& o) { WriteClusterQualityCsv(o, quality); });
      }
    }
    if (out != "-") {
      stdout_stream << "queries " << clustering.total_clustered() << "\nclusters "
                    << clustering.cluster_count() << "\nexpected_entropy "
                    << FormatDouble(ExpectedEntropy(clustering)) << "\nclusters_pct_at_25 "
                    << FormatDouble(ClustersFormedAt(clustering, 25.0)) << "\n";
    }
  }
};

// ---- bench / pairwise shared inputs ----

struct InputFlags {
  std::string placement;
  std::string queries;
  PlacementConfig placement_config;
  WorkloadFlags workload;

  void Add(CLI::App* sub) {
    sub->add_option("--placement", placement, "Placement file (generated when absent)");
    sub->add_option("--queries", queries, "Query file (generated when absent)");
    sub->add_option("--items", placement_config.universe_size,
                    "Universe and item-graph size for generated inputs")
        ->capture_default_str();
    sub->add_option("--machines", placement_config.machine_count, "Machines, generated placement")
        ->capture_default_str();
    sub->add_option("--replication", placement_config.replication,
                    "Replicas per item, generated placement")
        ->capture_default_str();
    workload.Add(sub);
  }

  void Apply(BenchConfig& config) const {
    if (!placement.empty()) config.placement_path = placement;
    if (!queries.empty()) config.workload_path = queries;
    config.placement = placement_config;
    config.workload = workload.Resolve(placement_config.universe_size);
  }
};

struct RouterFlags {
  ClusteringParams clustering;
  AssignMode assign = AssignMode::kFast;
  GPartReuse reuse = GPartReuse::kQueryRelevantMachines;
  std::size_t direct_len = 1;

  void Add(CLI::App* sub) {
    AddClusteringFlags(sub, clustering);
    sub->add_option("--assign", assign, "Real-time cluster assignment: fast or full")
        ->transform(EnumOf(kAssignNames))
        ->default_str("fast");
    sub->add_option("--reuse", reuse,
                    "G-part machines reused: relevant (holding a query item) or all")
        ->transform(EnumOf(kReuseNames))
        ->default_str("relevant");
    sub->add_option("--direct-len", direct_len,
                    "Queries up to this length are covered directly")
        ->capture_default_str();
  }

  void Apply(BenchConfig& config) const {
    config.clustering = clustering;
    config.assign_mode = assign;
    config.reuse = reuse;
    config.direct_cover_max_len = direct_len;
  }
};

// ---- bench ----

struct BenchCmd {
  InputFlags inputs;
  RouterFlags router;
  double pretrain = 0.4;
  std::vector<std::string> strategies = {"baseline", "ngreedy", "gcpa-g", "gcpa-bg"};
  std::uint32_t repetitions = 5;
  std::uint64_t seed = 1;
  std::string out = "-";
  std::string records_out;
  std::string progress_out;
  std::string pairwise_out;
  std::string candidate = "gcpa-bg";
  std::string reference = "ngreedy";
  bool mask_timing = false;

  void Add(CLI::App& app) {
    CLI::App* sub = app.add_subcommand("bench", "Compare routing strategies on one workload");
    AddConfig(sub);
    inputs.Add(sub);
    router.Add(sub);
    sub->add_option("--pretrain-frac", pretrain, "Leading fraction of queries used to precompute")
        ->capture_default_str();
    sub->add_option("--strategies", strategies,
                    "Comma-separated: baseline, ngreedy, gcpa-g, gcpa-bg, better-baseline")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--repetitions", repetitions, "Timed passes over the real-time queries")
        ->capture_default_str();
    AddSeed(sub, seed);
    sub->add_option("--out", out, "Summary CSV ('-' for stdout)")->capture_default_str();
    sub->add_option("--records-out", records_out, "Per-query span CSV");
    sub->add_option("--progress-out", progress_out, "Cluster-progress CSV of the pretrain set");
    sub->add_option("--pairwise-out", pairwise_out, "Span-difference CSV");
    sub->add_option("--candidate", candidate, "Pairwise candidate strategy")->capture_default_str();
    sub->add_option("--reference", reference, "Pairwise reference strategy")->capture_default_str();
    sub->add_flag("--mask-timing", mask_timing, "Print NA for wall-clock columns");
  }

  void Run(std::ostream& stdout_stream) const {
    BenchConfig config;
    inputs.Apply(config);
    router.Apply(config);
    config.pretrain_fraction = pretrain;
    config.strategies = ParseStrategies(strategies);
    config.repetitions = repetitions;
    config.seed = seed;
    std::optional<Strategy> cand, ref;
    if (!pairwise_out.empty()) {
      cand = ParseStrategy(candidate);
      ref = ParseStrategy(reference);
    }
    const MetricsReport report = RunBenchmark(config);
    WriteTo(out, stdout_stream, [&](std::ostream& o) {
      WriteBenchCsv(o, report, CsvOptions{.mask_timing = mask_timing});
    });
    if (!records_out.empty()) {
      WriteTo(records_out, stdout_stream, [&](std::ostream& o) { WriteRecordsCsv(o, report); });
    }
    if (!progress_out.empty()) {
      if (!report.clustering) throw ConfigError("--progress-out needs a gcpa strategy");
      WriteTo(progress_out, stdout_stream,
              [&](std::ostream& o) { WriteProgressCsv(o, *report.clustering); });
    }
    if (cand) {
      const auto rows = PairwiseDeltas(report, *cand, *ref);
      WriteTo(pairwise_out, stdout_stream,
              [&](std::ostream& o) { WritePairwiseCsv(o, *cand, *ref, rows); });
    }
  }
};

// ---- pairwise ----

struct PairwiseCmd {
  InputFlags inputs;
  RouterFlags router;
  double pretrain = 0.4;
  std::uint64_t seed = 1;
  std::string candidate = "gcpa-bg";
  std::string reference = "ngreedy";
  std::string out = "-";

  void Add(CLI::App& app) {
    CLI::App* sub =
        app.add_subcommand("pairwise", "Per-query span difference between two strategies");
    AddConfig(sub);
    inputs.Add(sub);
    router.Add(sub);
    sub->add_option("--pretrain-frac", pretrain, "Leading fraction of queries used to precompute")
        ->capture_default_str();
    sub->add_option("--candidate", candidate, "Candidate strategy")->capture_default_str();
    sub->add_option("--reference", reference, "Reference strategy")->capture_default_str();
    AddSeed(sub, seed);
    sub->add_option("--out", out, "Pairwise CSV ('-' for stdout)")->capture_default_str();
  }

  void Run(std::ostream& stdout_stream, std::ostream& err) const {
    BenchConfig config;
    inputs.Apply(config);
    router.Apply(config);
    config.pretrain_fraction = pretrain;
    config.seed = seed;
    config.repetitions = 1;
    const Strategy cand = ParseStrategy(candidate);
    const Strategy ref = ParseStrategy(reference);
    config.strategies = {cand};
    if (ref != cand) config.strategies.push_back(ref);
    const MetricsReport report = RunBenchmark(config);
    const auto rows = PairwiseDeltas(report, cand, ref);
    WriteTo(out, stdout_stream, [&](std::ostream& o) { WritePairwiseCsv(o, cand, ref, rows); });
    err << "fraction_within_1 " << FormatDouble(FractionWithin(rows, 1)) << "\n";
  }
};

// ---- analyze ----

struct AnalyzeCmd {
  CLI::App* sub = nullptr;
  CLI::App* single = nullptr;
  CLI::App* multi = nullptr;
  CLI::App* workload_cmd = nullptr;
  CLI::App* quality = nullptr;

  std::vector<double> sizes = {50, 200};
  double total = 100;
  double omega = 1;
  std::uint32_t steps = 100;
  double m = 5;
  std::vector<double> ks = {0, 0.25, 0.5, 0.75, 1};
  std::string landscape_out = "-";

  std::string queries;
  std::uint32_t items = 10000;
  WorkloadFlags workload;
  std::uint64_t seed = 1;
  std::string workload_out = "-";

  ClusteringParams params;
  std::string quality_out = "-";
  std::string cluster_quality_out;

  void AddLandscapeFlags(CLI::App* app) {
    AddConfig(app);
    app->add_option("--n", sizes, "Cluster sizes")->delimiter(',')->capture_default_str();
    app->add_option("--total", total, "Total clustered queries M")->capture_default_str();
    app->add_option("--omega", omega, "Current expected entropy")->capture_default_str();
    app->add_option("--steps", steps, "Probability grid intervals over [0, 1]")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--out", landscape_out, "CSV ('-' for stdout)")->capture_default_str();
  }

  void Add(CLI::App& app) {
    sub = app.add_subcommand("analyze", "Figure data and workload diagnostics");
    sub->require_subcommand(1);

    single = sub->add_subcommand("landscape-single",
                                 "Expected-entropy change for one element over (n, p)");
    AddLandscapeFlags(single);
    multi = sub->add_subcommand("landscape-multi",
                                "Expected-entropy change for m elements over (n, p, k)");
    AddLandscapeFlags(multi);
    multi->add_option("--m", m, "Elements sharing probability p")->capture_default_str();
    multi->add_option("--k", ks, "Fractions of the m elements missing from the query")
        ->delimiter(',')
        ->capture_default_str();

    workload_cmd = sub->add_subcommand(
        "workload", "Mean pairwise intersection against a length-matched uniform workload");
    AddConfig(workload_cmd);
    workload_cmd->add_option("--queries", queries, "Query file (generated when absent)");
    workload_cmd->add_option("--items", items, "Item universe / graph size")
        ->capture_default_str();
    workload.Add(workload_cmd);
    AddSeed(workload_cmd, seed);
    workload_cmd->add_option("--out", workload_out, "CSV ('-' for stdout)")
        ->capture_default_str();

    quality = sub->add_subcommand("quality", "Cluster-quality histograms of a query file");
    AddConfig(quality);
    quality->add_option("--queries", queries, "Query file")->required();
    AddClusteringFlags(quality, params);
    quality->add_option("--out", quality_out, "Probability histogram CSV ('-' for stdout)")
        ->capture_default_str();
    quality->add_option("--cluster-out", cluster_quality_out, "Per-cluster CSV");
  }

  double Grid(std::uint32_t i) const { return static_cast<double>(i) / steps; }

  void RunSingle(std::ostream& o) const {
    o << "#schema landscape-single v1\nn,p,delta_member,delta_nonmember\n";
    for (double n : sizes) {
      for (std::uint32_t i = 0; i <= steps; ++i) {
        const EntropyDeltaInputs in{.n = n, .p = Grid(i), .M = total, .omega = omega};
        o << FormatDouble(n) << ',' << FormatDouble(in.p) << ','
          << FormatDouble(DeltaExpectedEntropySingle(in, true)) << ','
          << FormatDouble(DeltaExpectedEntropySingle(in, false)) << '\n';
      }
    }
  }

  void RunMulti(std::ostream& o) const {
    o << "#schema landscape-multi v1\nn,m,k,p,delta\n";
    for (double n : sizes) {
      for (double k : ks) {
        for (std::uint32_t i = 0; i <= steps; ++i) {
          const EntropyDeltaInputs in{
              .n = n, .p = Grid(i), .M = total, .omega = omega, .m = m, .k = k};
          o << FormatDouble(n) << ',' << FormatDouble(m) << ',' << FormatDouble(k) << ','
            << FormatDouble(in.p) << ',' << FormatDouble(DeltaExpectedEntropyMulti(in)) << '\n';
        }
      }
    }
  }

  void RunWorkload(std::ostream& stdout_stream) const {
    Workload w;
    if (!queries.empty()) {
      w = LoadQueryLog(queries, items);
    } else {
      WorkloadConfig config = workload.Resolve(items);
      config.seed = seed;
      w = GenerateWorkload(config);
    }
    const Workload uniform = UniformWorkload(w.queries, items, MixSeed(seed, 3));
    double mean_len = 0;
    for (const Query& q : w.queries) mean_len += q.items.size();
    if (!w.queries.empty()) mean_len /= w.queries.size();
    const double generated = MeanPairwiseIntersection(w.queries);
    const double random = MeanPairwiseIntersection(uniform.queries);
    WriteTo(workload_out, stdout_stream, [&](std::ostream& o) {
      o << "#schema workload v1\nmetric,value\n"
        << "queries," << w.queries.size() << '\n'
        << "mean_len," << FormatDouble(mean_len) << '\n'
        << "mean_pairwise_intersection," << FormatDouble(generated) << '\n'
        << "uniform_mean_pairwise_intersection," << FormatDouble(random) << '\n';
    });
  }

  void RunQuality(std::ostream& stdout_stream) const {
    params.Validate();
    const Workload w = LoadQueryLog(queries);
    const QualityReport report = BuildQualityReport(SimpleEntropyCluster(w.queries, params));
    WriteTo(quality_out, stdout_stream, [&](std::ostream& o) { WriteQualityCsv(o, report); });
    if (!cluster_quality_out.empty()) {
      WriteTo(cluster_quality_out, stdout_stream,
              [&](std::ostream& o) { WriteClusterQualityCsv(o, report); });
    }
  }

  void Run(std::ostream& stdout_stream) const {
    if (*single) {
      WriteTo(landscape_out, stdout_stream, [&](std::ostream& o) { RunSingle(o); });
    } else if (*multi) {
      WriteTo(landscape_out, stdout_stream, [&](std::ostream& o) { RunMulti(o); });
    } else if (*workload_cmd) {
      RunWorkload(stdout_stream);
    } else {
      RunQuality(stdout_stream);
    }
  }
};

// ---- route ----

struct RouteCmd {
  std::string placement;
  std::string snapshot_in;
  std::string pretrain;
  std::string queries;
  RouterFlags router;
  GcpaVariant variant = GcpaVariant::kBetterGreedy;
  std::uint64_t seed = 1;
  std::string out = "-";
  std::string snapshot_out;

  void Add(CLI::App& app) {
    CLI::App* sub =
        app.add_subcommand("route", "Route a query stream through the real-time router");
    AddConfig(sub);
    sub->add_option("--placement", placement, "Placement file")->required();
    auto* snap = sub->add_option("--snapshot-in", snapshot_in, "Router snapshot to resume from");
    sub->add_option("--pretrain", pretrain, "Query file to precompute from")->excludes(snap);
    sub->add_option("--queries", queries, "Query file to route")->required();
    router.Add(sub);
    sub->add_option("--variant", variant, "GCPA variant: g or bg")
        ->transform(EnumOf(kVariantNames))
        ->default_str("bg");
    AddSeed(sub, seed);
    sub->add_option("--out", out, "Per-query CSV ('-' for stdout)")->capture_default_str();
    sub->add_option("--snapshot-out", snapshot_out, "Router snapshot after routing");
  }

  void Run(std::ostream& stdout_stream) const {
    auto layout = std::make_shared<const DataLayout>(LoadPlacement(placement));
    std::optional<RealtimeRouter> r;
    if (!snapshot_in.empty()) {
      r.emplace(LoadRouterSnapshot(snapshot_in, layout));
    } else {
      RouterParams params;
      params.clustering = router.clustering;
      params.clustering.Validate();
      params.variant = variant;
      params.assign_mode = router.assign;
      params.reuse = router.reuse;
      params.direct_cover_max_len = router.direct_len;
      params.seed = seed;
      std::vector<Query> pre;
      if (!pretrain.empty()) pre = LoadQueryLog(pretrain, layout->universe_size()).queries;
      r.emplace(RealtimeRouter::Precompute(pre, layout, params));
    }
    const Workload w = LoadQueryLog(queries, layout->universe_size());
    WriteTo(out, stdout_stream, [&](std::ostream& o) {
      o << "#schema route v1\nquery_id,query_len,cluster,span,valid,machines\n";
      for (const Query& q : w.queries) {
        RoutingResult result = r->Route(q);
        CheckResult(result, q, *layout);
        o << q.id << ',' << q.items.size() << ','
          << (result.cluster ? std::to_string(*result.cluster) : "NA") << ',' << result.span()
          << ',' << (result.valid ? 1 : 0) << ',';
        for (std::size_t i = 0; i < result.cover.machines.size(); ++i) {
          o << (i ? " " : "") << result.cover.machines[i];
        }
        o << '\n';
      }
    });
    if (!snapshot_out.empty()) SaveRouterSnapshot(snapshot_out, *r);
  }
};

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Query routing over replicated item placements", "incset"};
  app.require_subcommand(1);
  app.fallthrough(false);

  GenPlacementCmd gen_placement;
  GenQueriesCmd gen_queries;
  ClusterCmd cluster;
  BenchCmd bench;
  PairwiseCmd pairwise;
  AnalyzeCmd analyze;
  RouteCmd route;
  gen_placement.Add(app);
  gen_queries.Add(app);
  cluster.Add(app);
  bench.Add(app);
  pairwise.Add(app);
  analyze.Add(app);
  route.Add(app);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = ExpandConfig(std::move(args));
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    // CLI11 consumes the vector from the back.
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand("gen-placement")) {
      gen_placement.Run(out);
    } else if (app.got_subcommand("gen-queries")) {
      gen_queries.Run(out);
    } else if (app.got_subcommand("cluster")) {
      cluster.Run(out);
    } else if (app.got_subcommand("bench")) {
      bench.Run(out);
    } else if (app.got_subcommand("pairwise")) {
      pairwise.Run(out, err);
    } else if (app.got_subcommand("analyze")) {
      analyze.Run(out);
    } else {
      route.Run(out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int RunCli(int argc, const char* const* argv) {
  return RunCli(argc, argv, std::cout, std::cerr);
}

}  // namespace incset
