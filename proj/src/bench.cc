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

#include "incset/bench.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <utility>

namespace incset {
namespace {

using Clock = std::chrono::steady_clock;

double ElapsedNs(Clock::time_point start, Clock::time_point stop) {
  return std::chrono::duration<double, std::nano>(stop - start).count();
}

double Median(std::vector<double> values) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double NearestRank(const std::vector<std::uint32_t>& sorted, double pct) {
  if (sorted.empty()) return 0;
  auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * sorted.size()));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

// Routes every query once per repetition with `route`, keeping the covers of
// the first repetition.
template <typename RouteFn, typename ResetFn>
void TimeRoutingLoop(std::span<const Query> queries, std::uint32_t repetitions,
                     RouteFn route, ResetFn reset, std::vector<Cover>& covers,
                     StrategyReport& report) {
  covers.assign(queries.size(), Cover{});
  std::vector<Cover> scratch(queries.size());
  for (std::uint32_t rep = 0; rep < repetitions; ++rep) {
    reset();
    auto& sink = rep == 0 ? covers : scratch;
    const auto start = Clock::now();
    for (std::size_t i = 0; i < queries.size(); ++i) {
      sink[i] = route(queries[i]).cover;
    }
    const auto stop = Clock::now();
    report.repetition_ns_per_query.push_back(
        queries.empty() ? 0 : ElapsedNs(start, stop) / queries.size());
  }
  report.route_ns_per_query = Median(report.repetition_ns_per_query);
}

}  // namespace

void BenchConfig::Validate() const {
  if (!(pretrain_fraction >= 0.0 && pretrain_fraction < 1.0)) {
    throw ConfigError("pretrain fraction must lie in [0, 1)");
  }
  if (strategies.empty()) throw ConfigError("no strategies requested");
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (strategies[i] == strategies[j]) {
        throw ConfigError("strategy '" + std::string(StrategyName(strategies[i])) +
                          "' listed twice");
      }
    }
  }
  if (repetitions == 0) throw ConfigError("repetitions must be positive");
  clustering.Validate();
  if (!placement_path) placement.Validate();
  if (!workload_path) {
    workload.Validate();
    if (!placement_path && workload.n > placement.universe_size) {
      throw ConfigError("workload graph is larger than the placement universe");
    }
  }
}

BenchInputs ResolveInputs(const BenchConfig& config) {
  config.Validate();
  BenchInputs inputs;
  if (config.placement_path) {
    inputs.layout = std::make_shared<const DataLayout>(LoadPlacement(*config.placement_path));
  } else {
    PlacementConfig placement = config.placement;
    placement.seed = MixSeed(config.seed, 1);
    inputs.layout = std::make_shared<const DataLayout>(GeneratePlacement(placement));
  }
  if (config.workload_path) {
    inputs.workload = LoadQueryLog(*config.workload_path, inputs.layout->universe_size());
  } else {
    WorkloadConfig workload = config.workload;
    workload.seed = MixSeed(config.seed, 2);
    if (workload.n > inputs.layout->universe_size()) {
      throw ConfigError("workload graph is larger than the placement universe");
    }
    inputs.workload = GenerateWorkload(workload);
  }
  inputs.workload.pretrain_fraction = config.pretrain_fraction;
  return inputs;
}

SpanSummary Summarize(const std::vector<std::uint32_t>& spans,
                      const std::vector<std::uint8_t>& valid) {
  SpanSummary s;
  if (spans.empty()) return s;
  const double n = static_cast<double>(spans.size());
  for (std::uint32_t span : spans) s.total += span;
  s.avg = static_cast<double>(s.total) / n;
  double sq = 0;
  for (std::uint32_t span : spans) sq += (span - s.avg) * (span - s.avg);
  s.std_dev = std::sqrt(sq / n);
  std::vector<std::uint32_t> sorted = spans;
  std::sort(sorted.begin(), sorted.end());
  s.p50 = NearestRank(sorted, 50);
  s.p95 = NearestRank(sorted, 95);
  s.valid_fraction =
      static_cast<double>(std::count(valid.begin(), valid.end(), 1)) / n;
  return s;
}

const StrategyReport& MetricsReport::Find(Strategy s) const {
  for (const StrategyReport& r : strategies) {
    if (r.strategy == s) return r;
  }
  throw ConfigError("strategy '" + std::string(StrategyName(s)) +
                    "' is not in the report");
}

MetricsReport RunBenchmark(const BenchConfig& config) {
  return RunBenchmark(config, ResolveInputs(config));
}

MetricsReport RunBenchmark(const BenchConfig& config, const BenchInputs& inputs) {
  config.Validate();
  if (!inputs.layout) throw PreconditionError("benchmark inputs have no layout");
  const DataLayout& layout = *inputs.layout;
  Workload workload = inputs.workload;
  workload.pretrain_fraction = config.pretrain_fraction;
  const auto pre = workload.pretrain();
  const auto live = workload.realtime();

  MetricsReport report;
  report.seed = config.seed;
  for (const Query& q : live) {
    report.query_ids.push_back(q.id);
    report.query_lengths.push_back(static_cast<std::uint32_t>(q.items.size()));
  }

  std::vector<Cover> covers;
  for (Strategy strategy : config.strategies) {
    StrategyReport sr;
    sr.strategy = strategy;
    switch (strategy) {
      case Strategy::kBaseline:
        TimeRoutingLoop(
            live, config.repetitions,
            [&](const Query& q) { return RouteBaseline(q, layout, config.seed); },
            [] {}, covers, sr);
        break;
      case Strategy::kBetterBaseline:
        TimeRoutingLoop(
            live, config.repetitions,
            [&](const Query& q) { return RouteBetterBaseline(q, layout, config.seed); },
            [] {}, covers, sr);
        break;
      case Strategy::kNGreedy:
        TimeRoutingLoop(
            live, config.repetitions,
            [&](const Query& q) { return RouteNGreedy(q, layout); }, [] {}, covers,
            sr);
        break;
      case Strategy::kGcpaG:
      case Strategy::kGcpaBG: {
        RouterParams params;
        params.clustering = config.clustering;
        params.variant = strategy == Strategy::kGcpaG ? GcpaVariant::kGreedy
                                                      : GcpaVariant::kBetterGreedy;
        params.assign_mode = config.assign_mode;
        params.reuse = config.reuse;
        params.direct_cover_max_len = config.direct_cover_max_len;
        params.seed = config.seed;
        const auto start = Clock::now();
        const RealtimeRouter precomputed =
            RealtimeRouter::Precompute(pre, inputs.layout, params);
        sr.precompute_ms = ElapsedNs(start, Clock::now()) / 1e6;
        // Each repetition starts from the precomputed state; the copy happens
        // outside the timed loop.
        std::optional<RealtimeRouter> router;
        std::optional<RealtimeRouter> first;
        TimeRoutingLoop(
            live, config.repetitions,
            [&](const Query& q) { return router->Route(q); },
            [&] {
              if (router && !first) first = std::move(router);
              router.emplace(precomputed);
            },
            covers, sr);
        const RealtimeRouter& finished = first ? *first : *router;
        if (!report.clustering) report.clustering = finished.clustering();
        if (!report.realtime_counters) report.realtime_counters = finished.counters();
        break;
      }
    }
    sr.spans.reserve(live.size());
    sr.valid.reserve(live.size());
    for (std::size_t i = 0; i < live.size(); ++i) {
      sr.spans.push_back(static_cast<std::uint32_t>(covers[i].span()));
      sr.valid.push_back(ValidateCover(covers[i], live[i].items, layout) ? 1 : 0);
    }
    sr.summary = Summarize(sr.spans, sr.valid);
    report.strategies.push_back(std::move(sr));
  }
  return report;
}

std::vector<PairwiseRow> PairwiseDeltas(const MetricsReport& report,
                                        Strategy candidate, Strategy reference) {
  const StrategyReport& cand = report.Find(candidate);
  const StrategyReport& ref = report.Find(reference);
  std::map<std::pair<std::uint32_t, std::int64_t>, std::uint64_t> counts;
  for (std::size_t i = 0; i < ref.spans.size(); ++i) {
    const std::int64_t delta =
        static_cast<std::int64_t>(cand.spans[i]) - static_cast<std::int64_t>(ref.spans[i]);
    ++counts[{ref.spans[i], delta}];
  }
  std::vector<PairwiseRow> rows;
  for (const auto& [key, count] : counts) rows.push_back({key.first, key.second, count});
  return rows;
}

double FractionWithin(const std::vector<PairwiseRow>& rows, std::int64_t max_delta) {
  std::uint64_t total = 0;
  std::uint64_t within = 0;
  for (const PairwiseRow& row : rows) {
    total += row.count;
    if (row.delta <= max_delta) within += row.count;
  }
  return total ? static_cast<double>(within) / total : 0.0;
}

std::string FormatDouble(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

void WriteBenchCsv(std::ostream& out, const MetricsReport& report,
                   const CsvOptions& options) {
  out << "#schema bench v1\n"
         "strategy,seed,n_queries,avg_span,p50_span,p95_span,span_std,"
         "route_ns_per_query,precompute_ms,valid_fraction\n";
  for (const StrategyReport& sr : report.strategies) {
    const SpanSummary& s = sr.summary;
    out << StrategyName(sr.strategy) << ',' << report.seed << ','
        << report.n_queries() << ',' << FormatDouble(s.avg) << ','
        << FormatDouble(s.p50) << ',' << FormatDouble(s.p95) << ','
        << FormatDouble(s.std_dev) << ','
        << (options.mask_timing ? "NA" : FormatDouble(sr.route_ns_per_query)) << ','
        << (options.mask_timing ? "NA" : FormatDouble(sr.precompute_ms)) << ','
        << FormatDouble(s.valid_fraction) << '\n';
  }
}

void WriteRecordsCsv(std::ostream& out, const MetricsReport& report) {
  out << "#schema records v1\nquery_id,query_len,strategy,span,valid\n";
  for (const StrategyReport& sr : report.strategies) {
    for (std::size_t i = 0; i < sr.spans.size(); ++i) {
      out << report.query_ids[i] << ',' << report.query_lengths[i] << ','
          << StrategyName(sr.strategy) << ',' << sr.spans[i] << ','
          << static_cast<int>(sr.valid[i]) << '\n';
    }
  }
}

void WritePairwiseCsv(std::ostream& out, Strategy candidate, Strategy reference,
                      const std::vector<PairwiseRow>& rows) {
  out << "#schema pairwise v1\ncandidate,reference,reference_span,delta,count\n";
  for (const PairwiseRow& row : rows) {
    out << StrategyName(candidate) << ',' << StrategyName(reference) << ','
        << row.reference_span << ',' << row.delta << ',' << row.count << '\n';
  }
}

void WriteProgressCsv(std::ostream& out, const Clustering& clustering) {
  out << "#schema progress v1\nqueries_pct,clusters_pct\n";
  for (const ProgressPoint& p : ClusterProgress(clustering)) {
    out << FormatDouble(p.queries_pct) << ',' << FormatDouble(p.clusters_pct) << '\n';
  }
}

void WriteQualityCsv(std::ostream& out, const QualityReport& quality) {
  out << "#schema quality v1\nbin_low,bin_high,count\n";
  for (std::size_t b = 0; b < QualityReport::kBins; ++b) {
    out << FormatDouble(static_cast<double>(b) / QualityReport::kBins) << ','
        << FormatDouble(static_cast<double>(b + 1) / QualityReport::kBins) << ','
        << quality.probability_histogram[b] << '\n';
  }
}

void WriteClusterQualityCsv(std::ostream& out, const QualityReport& quality) {
  out << "#schema cluster-quality v1\ncluster,size,average_probability\n";
  for (const auto& c : quality.clusters) {
    out << c.id << ',' << c.size << ',' << FormatDouble(c.average_probability) << '\n';
  }
}

}  // namespace incset
