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

#include "incset/clustering.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace incset {

void ClusteringParams::Validate() const {
  if (!(theta1 >= 0.0 && theta1 <= 1.0)) throw ConfigError("theta1 outside [0,1]");
  if (!(theta2 >= 0.0 && theta2 <= 1.0)) throw ConfigError("theta2 outside [0,1]");
}

double BinaryEntropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

std::uint32_t Cluster::CountOf(ItemId item) const {
  auto it = std::lower_bound(
      item_counts_.begin(), item_counts_.end(), item,
      [](const ItemCount& c, ItemId x) { return c.first < x; });
  return (it != item_counts_.end() && it->first == item) ? it->second : 0;
}

void Cluster::Add(QueryId query, std::span<const ItemId> items) {
  members_.push_back(query);
  std::vector<ItemCount> merged;
  merged.reserve(item_counts_.size() + items.size());
  auto c = item_counts_.begin();
  auto q = items.begin();
  while (c != item_counts_.end() || q != items.end()) {
    if (q == items.end() || (c != item_counts_.end() && c->first < *q)) {
      merged.push_back(*c++);
    } else if (c == item_counts_.end() || *q < c->first) {
      merged.emplace_back(*q++, 1);
    } else {
      merged.emplace_back(c->first, c->second + 1);
      ++c;
      ++q;
    }
  }
  item_counts_ = std::move(merged);
}

Cluster Cluster::FromParts(ClusterId id, std::vector<QueryId> members,
                           std::vector<ItemCount> item_counts) {
  for (std::size_t i = 0; i < item_counts.size(); ++i) {
    if (item_counts[i].second == 0 || item_counts[i].second > members.size()) {
      throw ValidationError("cluster " + std::to_string(id) +
                            ": item count outside [1, size]");
    }
    if (i > 0 && item_counts[i - 1].first >= item_counts[i].first) {
      throw ValidationError("cluster " + std::to_string(id) +
                            ": items not strictly ascending");
    }
  }
  Cluster k(id);
  k.members_ = std::move(members);
  k.item_counts_ = std::move(item_counts);
  return k;
}

double Cluster::EntropyWith(std::span<const ItemId> items) const {
  const double n1 = static_cast<double>(members_.size()) + 1.0;
  double s = 0.0;
  auto c = item_counts_.begin();
  auto q = items.begin();
  while (c != item_counts_.end() || q != items.end()) {
    if (q == items.end() || (c != item_counts_.end() && c->first < *q)) {
      s += BinaryEntropy(c->second / n1);
      ++c;
    } else if (c == item_counts_.end() || *q < c->first) {
      s += BinaryEntropy(1.0 / n1);
      ++q;
    } else {
      s += BinaryEntropy((c->second + 1) / n1);
      ++c;
      ++q;
    }
  }
  return s;
}

double ItemProbability(const Cluster& cluster, ItemId item) {
  if (cluster.empty()) throw PreconditionError("probability in an empty cluster");
  return static_cast<double>(cluster.CountOf(item)) / cluster.size();
}

double ClusterEntropy(const Cluster& cluster) {
  if (cluster.empty()) return 0.0;
  const double n = cluster.size();
  double s = 0.0;
  for (const auto& [item, count] : cluster.item_counts()) {
    s += BinaryEntropy(count / n);
  }
  return s;
}

double AverageProbability(const Cluster& cluster) {
  if (cluster.empty()) throw PreconditionError("average probability of an empty cluster");
  // Item x appears in count_x member queries, each contributing p_x.
  const double n = cluster.size();
  double weighted = 0.0, total = 0.0;
  for (const auto& [item, count] : cluster.item_counts()) {
    weighted += count * (count / n);
    total += count;
  }
  return total == 0.0 ? 0.0 : weighted / total;
}

Clustering Clustering::FromClusters(std::vector<Cluster> clusters,
                                   std::vector<std::uint32_t> progress) {
  Clustering out;
  for (ClusterId i = 0; i < clusters.size(); ++i) {
    const Cluster& k = clusters[i];
    if (k.id() != i) throw ValidationError("cluster ids must be dense and ordered");
    for (const auto& [item, count] : k.item_counts()) {
      out.item_to_clusters_[item].push_back(i);
    }
    out.total_ += k.size();
    out.weighted_entropy_ += k.size() * ClusterEntropy(k);
  }
  out.clusters_ = std::move(clusters);
  out.progress_ = std::move(progress);
  return out;
}

std::span<const ClusterId> Clustering::clusters_of(ItemId item) const {
  auto it = item_to_clusters_.find(item);
  if (it == item_to_clusters_.end()) return {};
  return it->second;
}

double Clustering::expected_entropy() const {
  return total_ == 0 ? 0.0 : weighted_entropy_ / static_cast<double>(total_);
}

double Clustering::ExpectedEntropyWith(ClusterId id,
                                       std::span<const ItemId> items) const {
  const Cluster& k = clusters_[id];
  const double n = k.size();
  const double w = weighted_entropy_ - n * ClusterEntropy(k) +
                   (n + 1.0) * k.EntropyWith(items);
  return w / (static_cast<double>(total_) + 1.0);
}

std::vector<ClusterId> Clustering::Candidates(std::span<const ItemId> items,
                                              CandidateScope scope) const {
  std::vector<ClusterId> out;
  if (scope == CandidateScope::kAllClusters) {
    out.resize(clusters_.size());
    for (ClusterId i = 0; i < out.size(); ++i) out[i] = i;
    return out;
  }
  for (ItemId item : items) {
    const auto ids = clusters_of(item);
    out.insert(out.end(), ids.begin(), ids.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void Clustering::IndexNewItems(ClusterId id, std::span<const ItemId> items) {
  const Cluster& k = clusters_[id];
  for (ItemId item : items) {
    if (k.CountOf(item) != 1) continue;
    auto& ids = item_to_clusters_[item];
    ids.insert(std::lower_bound(ids.begin(), ids.end(), id), id);
  }
}

ClusterId Clustering::NewCluster(QueryId query, std::span<const ItemId> items) {
  const auto id = static_cast<ClusterId>(clusters_.size());
  clusters_.emplace_back(id);
  clusters_.back().Add(query, items);
  IndexNewItems(id, items);
  weighted_entropy_ += ClusterEntropy(clusters_.back());  // |K| = 1
  ++total_;
  progress_.push_back(static_cast<std::uint32_t>(clusters_.size()));
  return id;
}

void Clustering::AddToCluster(ClusterId id, QueryId query,
                              std::span<const ItemId> items) {
  Cluster& k = clusters_.at(id);
  const double n = k.size();
  const double before = ClusterEntropy(k);
  k.Add(query, items);
  weighted_entropy_ += (n + 1.0) * ClusterEntropy(k) - n * before;
  IndexNewItems(id, items);
  ++total_;
  progress_.push_back(static_cast<std::uint32_t>(clusters_.size()));
}

double ExpectedEntropy(const Clustering& clustering) {
  if (clustering.total_clustered() == 0) return 0.0;
  double w = 0.0;
  for (const Cluster& k : clustering.clusters()) w += k.size() * ClusterEntropy(k);
  return w / static_cast<double>(clustering.total_clustered());
}

double ExpectedEntropyPerCluster(const Clustering& clustering) {
  if (clustering.cluster_count() == 0) return 0.0;
  double w = 0.0;
  for (const Cluster& k : clustering.clusters()) w += k.size() * ClusterEntropy(k);
  return w / static_cast<double>(clustering.cluster_count());
}

bool IsEligible(std::span<const ItemId> items, const Cluster& cluster,
                const ClusteringParams& params) {
  std::size_t common = 0;
  if (!cluster.empty()) {
    const double n = cluster.size();
    for (ItemId item : items) {
      if (cluster.CountOf(item) / n >= params.theta1) ++common;
    }
  } else if (params.theta1 <= 0.0) {
    common = items.size();
  }
  return static_cast<double>(common) >=
         params.theta2 * static_cast<double>(items.size());
}

std::optional<ClusterId> BestCluster(const Clustering& clustering,
                                     std::span<const ItemId> items,
                                     const ClusteringParams& params) {
  std::optional<ClusterId> best;
  double best_entropy = std::numeric_limits<double>::infinity();
  for (ClusterId id : clustering.Candidates(items, params.scope)) {
    const Cluster& k = clustering.cluster(id);
    if (!IsEligible(items, k, params)) continue;
    const double e = clustering.ExpectedEntropyWith(id, items);
    if (e < best_entropy) {
      best_entropy = e;
      best = id;
    }
  }
  if (best && std::isfinite(params.max_delta) &&
      best_entropy - clustering.expected_entropy() > params.max_delta) {
    return std::nullopt;
  }
  return best;
}

ClusterId PlaceQuery(Clustering& clustering, const Query& query,
                     const ClusteringParams& params) {
  if (auto best = BestCluster(clustering, query.items, params)) {
    clustering.AddToCluster(*best, query.id, query.items);
    return *best;
  }
  return clustering.NewCluster(query.id, query.items);
}

Clustering SimpleEntropyCluster(std::span<const Query> queries,
                                const ClusteringParams& params) {
  params.Validate();
  Clustering clustering;
  for (const Query& q : queries) PlaceQuery(clustering, q, params);
  return clustering;
}

double DeltaExpectedEntropySingle(const EntropyDeltaInputs& in, bool member) {
  const double p_new =
      member ? (in.n * in.p + 1.0) / (in.n + 1.0) : (in.n * in.p) / (in.n + 1.0);
  return (in.M * in.omega - in.n * BinaryEntropy(in.p) +
          (in.n + 1.0) * BinaryEntropy(p_new)) /
             (in.M + 1.0) -
         in.omega;
}

double DeltaExpectedEntropyMulti(const EntropyDeltaInputs& in) {
  const double n = in.n;
  const double absent = in.k * in.m;
  const double present = (1.0 - in.k) * in.m;
  return (in.M * in.omega - n * in.m * BinaryEntropy(in.p) +
          (n + 1.0) * absent * BinaryEntropy(in.p * n / (n + 1.0)) +
          (n + 1.0) * present * BinaryEntropy((in.p * n + 1.0) / (n + 1.0))) /
             (in.M + 1.0) -
         in.omega;
}

QualityReport BuildQualityReport(const Clustering& clustering) {
  QualityReport report;
  for (const Cluster& k : clustering.clusters()) {
    const double n = k.size();
    for (const auto& [item, count] : k.item_counts()) {
      const double p = count / n;
      auto bin = static_cast<std::size_t>(std::floor(p * QualityReport::kBins));
      bin = std::min(bin, QualityReport::kBins - 1);
      ++report.probability_histogram[bin];
    }
    report.clusters.push_back({k.id(), k.size(), AverageProbability(k)});
  }
  return report;
}

std::vector<ProgressPoint> ClusterProgress(const Clustering& clustering) {
  std::vector<ProgressPoint> out;
  const auto& trace = clustering.progress();
  if (trace.empty()) return out;
  const double queries = static_cast<double>(trace.size());
  const double clusters = static_cast<double>(trace.back());
  out.reserve(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out.push_back({100.0 * static_cast<double>(i + 1) / queries,
                   100.0 * trace[i] / clusters});
  }
  return out;
}

double ClustersFormedAt(const Clustering& clustering, double queries_pct) {
  const auto& trace = clustering.progress();
  if (trace.empty()) return 0.0;
  const auto processed = static_cast<std::size_t>(
      std::floor(queries_pct / 100.0 * static_cast<double>(trace.size())));
  if (processed == 0) return 0.0;
  const std::size_t i = std::min(processed, trace.size()) - 1;
  return 100.0 * trace[i] / static_cast<double>(trace.back());
}

}  // namespace incset
