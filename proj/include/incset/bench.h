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

// Benchmark harness: resolves a layout and workload, routes the real-time
// segment through each strategy, and aggregates spans and timings. Every
// emitted CSV starts with a "#schema <name> v<version>" line.

#ifndef INCSET_BENCH_H_
#define INCSET_BENCH_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "incset/clustering.h"
#include "incset/layout.h"
#include "incset/router.h"
#include "incset/workload.h"

namespace incset {

struct BenchConfig {
  // A path takes precedence over the inline config.
  std::optional<std::string> placement_path;
  PlacementConfig placement;
  std::optional<std::string> workload_path;
  WorkloadConfig workload;

  double pretrain_fraction = 0.4;
  std::vector<Strategy> strategies = {Strategy::kBaseline, Strategy::kNGreedy,
                                      Strategy::kGcpaG, Strategy::kGcpaBG};
  ClusteringParams clustering;
  AssignMode assign_mode = AssignMode::kFast;
  GPartReuse reuse = GPartReuse::kQueryRelevantMachines;
  std::size_t direct_cover_max_len = 1;
  std::uint32_t repetitions = 5;
  // Drives generated placement, generated workload and every router RNG.
  std::uint64_t seed = 1;

  void Validate() const;
};

struct BenchInputs {
  std::shared_ptr<const DataLayout> layout;
  Workload workload;
};

// Loads or generates the layout and workload. Generated inputs derive their
// seeds from config.seed, so the inline configs' own seeds are ignored.
BenchInputs ResolveInputs(const BenchConfig& config);

struct SpanSummary {
  double avg = 0;
  double p50 = 0;  // nearest rank
  double p95 = 0;  // nearest rank
  double std_dev = 0;  // population
  double valid_fraction = 0;
  std::uint64_t total = 0;  // machines touched, summed over queries
};

SpanSummary Summarize(const std::vector<std::uint32_t>& spans,
                      const std::vector<std::uint8_t>& valid);

struct StrategyReport {
  Strategy strategy = Strategy::kNGreedy;
  // Per real-time query, in arrival order.
  std::vector<std::uint32_t> spans;
  std::vector<std::uint8_t> valid;
  // Median over repetitions of the routing loop, divided by query count.
  double route_ns_per_query = 0;
  std::vector<double> repetition_ns_per_query;
  double precompute_ms = 0;  // zero for strategies without precompute
  SpanSummary summary;
};

struct MetricsReport {
  std::uint64_t seed = 0;
  std::vector<QueryId> query_ids;  // real-time segment
  std::vector<std::uint32_t> query_lengths;
  std::vector<StrategyReport> strategies;
  // Pre-real-time clustering, when a GCPA strategy ran.
  std::optional<Clustering> clustering;
  std::optional<RealtimeCounters> realtime_counters;

  std::size_t n_queries() const { return query_ids.size(); }
  // Throws ConfigError when the strategy was not run.
  const StrategyReport& Find(Strategy s) const;
};

MetricsReport RunBenchmark(const BenchConfig& config);
MetricsReport RunBenchmark(const BenchConfig& config, const BenchInputs& inputs);

// Per-query candidate-minus-reference span, aggregated into
// (reference_span, delta) -> count triples sorted by both keys.
struct PairwiseRow {
  std::uint32_t reference_span;
  std::int64_t delta;
  std::uint64_t count;
};
std::vector<PairwiseRow> PairwiseDeltas(const MetricsReport& report,
                                        Strategy candidate, Strategy reference);
// Fraction of queries with delta <= max_delta.
double FractionWithin(const std::vector<PairwiseRow>& rows, std::int64_t max_delta);

struct CsvOptions {
  // Replace wall-clock columns with "NA" so outputs are byte-reproducible.
  bool mask_timing = false;
};

void WriteBenchCsv(std::ostream& out, const MetricsReport& report,
                   const CsvOptions& options = {});
void WriteRecordsCsv(std::ostream& out, const MetricsReport& report);
void WritePairwiseCsv(std::ostream& out, Strategy candidate, Strategy reference,
                      const std::vector<PairwiseRow>& rows);
void WriteProgressCsv(std::ostream& out, const Clustering& clustering);
void WriteQualityCsv(std::ostream& out, const QualityReport& quality);
void WriteClusterQualityCsv(std::ostream& out, const QualityReport& quality);

// Shortest round-trip decimal rendering used by every CSV writer.
std::string FormatDouble(double value);

}  // namespace incset

#endif  // INCSET_BENCH_H_
