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

// Entropy-based incremental query clustering.
//
// A cluster K of n queries assigns each item j the probability
// p_j = (number of member queries containing j) / n, and has entropy
//   S(K) = sum_j h(p_j),  h(p) = -p log2 p - (1-p) log2 (1-p),
// summed over the items the cluster has seen (absent items contribute 0).
// A clustering's expected entropy is sum_K |K| S(K) / M with M the number of
// clustered queries. Each arriving query joins the eligible cluster that
// minimizes the post-insertion expected entropy, or founds a new cluster
// when no cluster is eligible.

#ifndef INCSET_CLUSTERING_H_
#define INCSET_CLUSTERING_H_

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "incset/common.h"
#include "incset/workload.h"

namespace incset {

enum class CandidateScope {
  kSharedItems,  // only clusters sharing at least one item with the query
  kAllClusters,  // full scan, for validation
};

struct ClusteringParams {
  double theta1 = 0.8;  // item is common in a cluster when p >= theta1
  double theta2 = 0.5;  // query eligible when >= theta2 of its items are common
  CandidateScope scope = CandidateScope::kSharedItems;
  // A query whose best placement raises the expected entropy by more than
  // this founds its own cluster instead. Disabled by default.
  double max_delta = std::numeric_limits<double>::infinity();

  void Validate() const;
};

// Single-item binary entropy in bits, with 0 log 0 = 0.
double BinaryEntropy(double p);

class Cluster {
 public:
  using ItemCount = std::pair<ItemId, std::uint32_t>;

  Cluster() = default;
  explicit Cluster(ClusterId id) : id_(id) {}
  // Rebuilds a cluster from serialized state; throws ValidationError when a
  // count is outside [1, members] or items are not strictly ascending.
  static Cluster FromParts(ClusterId id, std::vector<QueryId> members,
                           std::vector<ItemCount> item_counts);

  ClusterId id() const { return id_; }
  std::uint32_t size() const {
    return static_cast<std::uint32_t>(members_.size());
  }
  bool empty() const { return members_.empty(); }
  const std::vector<QueryId>& members() const { return members_; }
  // Sorted by item; every stored count lies in [1, size()].
  const std::vector<ItemCount>& item_counts() const { return item_counts_; }
  std::uint32_t CountOf(ItemId item) const;

  void Add(QueryId query, std::span<const ItemId> items);

  // Entropy after a hypothetical insertion of `items`, without mutating.
  double EntropyWith(std::span<const ItemId> items) const;

  friend bool operator==(const Cluster&, const Cluster&) = default;

 private:
  ClusterId id_ = 0;
  std::vector<QueryId> members_;
  std::vector<ItemCount> item_counts_;
};

double ItemProbability(const Cluster& cluster, ItemId item);
double ClusterEntropy(const Cluster& cluster);
// Weighted average of member-item probabilities: sum_Q sum_{x in Q} p_x /
// sum_Q |Q|.
double AverageProbability(const Cluster& cluster);

class Clustering {
 public:
  // Rebuilds the item index and entropy cache from serialized clusters,
  // whose ids must be 0..n-1 in order.
  static Clustering FromClusters(std::vector<Cluster> clusters,
                                 std::vector<std::uint32_t> progress);

  std::size_t cluster_count() const { return clusters_.size(); }
  const std::vector<Cluster>& clusters() const { return clusters_; }
  const Cluster& cluster(ClusterId id) const { return clusters_[id]; }
  // Total number of clustered queries, M.
  std::uint64_t total_clustered() const { return total_; }
  // Clusters whose support contains `item`, ascending.
  std::span<const ClusterId> clusters_of(ItemId item) const;
  const std::unordered_map<ItemId, std::vector<ClusterId>>& item_to_clusters()
      const {
    return item_to_clusters_;
  }

  // Incrementally maintained sum_K |K| S(K).
  double weighted_entropy() const { return weighted_entropy_; }
  // Incrementally maintained expected entropy (weighted_entropy / M).
  double expected_entropy() const;
  // Expected entropy if `items` joined cluster `id`.
  double ExpectedEntropyWith(ClusterId id, std::span<const ItemId> items) const;

  // Clusters that may be eligible for `items` under `scope`, ascending.
  std::vector<ClusterId> Candidates(std::span<const ItemId> items,
                                    CandidateScope scope) const;

  ClusterId NewCluster(QueryId query, std::span<const ItemId> items);
  void AddToCluster(ClusterId id, QueryId query, std::span<const ItemId> items);

  // Cluster count after each query was placed, in arrival order.
  const std::vector<std::uint32_t>& progress() const { return progress_; }

 private:
  void IndexNewItems(ClusterId id, std::span<const ItemId> items);

  std::vector<Cluster> clusters_;
  std::uint64_t total_ = 0;
  double weighted_entropy_ = 0.0;
  std::unordered_map<ItemId, std::vector<ClusterId>> item_to_clusters_;
  std::vector<std::uint32_t> progress_;
};

// Recomputed from the clusters' counts (not the incremental cache). Zero for
// an empty clustering.
double ExpectedEntropy(const Clustering& clustering);
// Same weighted sum normalized by the number of clusters instead of M; kept
// as an alternate reporting metric only.
double ExpectedEntropyPerCluster(const Clustering& clustering);

bool IsEligible(std::span<const ItemId> items, const Cluster& cluster,
                const ClusteringParams& params);

// Eligible candidate minimizing the post-insertion expected entropy (ties to
// the lowest cluster id), or nullopt when none is eligible or the best
// placement exceeds params.max_delta.
std::optional<ClusterId> BestCluster(const Clustering& clustering,
                                     std::span<const ItemId> items,
                                     const ClusteringParams& params);

// Places `query` and returns the cluster it landed in.
ClusterId PlaceQuery(Clustering& clustering, const Query& query,
                     const ClusteringParams& params);

Clustering SimpleEntropyCluster(std::span<const Query> queries,
                                const ClusteringParams& params);

// Inputs for the closed-form change in expected entropy.
struct EntropyDeltaInputs {
  double n = 0;      // cluster size
  double p = 0;      // element probability in the cluster
  double M = 0;      // total clustered queries
  double omega = 0;  // current expected entropy
  double m = 1;      // number of elements sharing probability p
  double k = 0;      // fraction of those elements missing from the query
};

// Change due to one element of probability p when a query joins a cluster of
// size n; `member` says whether the query contains the element.
double DeltaExpectedEntropySingle(const EntropyDeltaInputs& in, bool member);

// Change when the cluster has m elements of probability p and the query
// contains all but k*m of them. km and (1-k)m are real weights.
double DeltaExpectedEntropyMulti(const EntropyDeltaInputs& in);

struct QualityReport {
  static constexpr std::size_t kBins = 10;
  // Per-(cluster, item) probabilities; bin b covers [b/10, (b+1)/10), the
  // last bin also includes 1.0.
  std::array<std::uint64_t, kBins> probability_histogram{};
  struct ClusterQuality {
    ClusterId id;
    std::uint32_t size;
    double average_probability;
  };
  std::vector<ClusterQuality> clusters;
};

QualityReport BuildQualityReport(const Clustering& clustering);

// Percent of final clusters formed against percent of queries processed, one
// point per processed query. Monotone nondecreasing in both coordinates.
struct ProgressPoint {
  double queries_pct;
  double clusters_pct;
};
std::vector<ProgressPoint> ClusterProgress(const Clustering& clustering);
// Percent of final clusters existing once `queries_pct` of queries arrived.
double ClustersFormedAt(const Clustering& clustering, double queries_pct);

}  // namespace incset

#endif  // INCSET_CLUSTERING_H_
