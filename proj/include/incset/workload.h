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

// Correlated synthetic workloads drawn from sub-critical Erdos-Renyi graphs,
// plus a plain-text query log format.

#ifndef INCSET_WORKLOAD_H_
#define INCSET_WORKLOAD_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "incset/common.h"

namespace incset {

struct Query {
  QueryId id = 0;
  ItemSet items;

  friend bool operator==(const Query&, const Query&) = default;
};

// Undirected simple graph over vertices 0..n-1 with sorted neighbor lists.
class RandomGraph {
 public:
  RandomGraph() = default;
  RandomGraph(std::uint32_t n, std::vector<std::vector<std::uint32_t>> adj);

  std::uint32_t vertex_count() const {
    return static_cast<std::uint32_t>(adjacency_.size());
  }
  std::uint64_t edge_count() const { return edge_count_; }
  std::span<const std::uint32_t> neighbors(std::uint32_t v) const {
    return adjacency_[v];
  }
  const std::vector<std::vector<std::uint32_t>>& adjacency() const {
    return adjacency_;
  }

  // Component label per vertex; labels are dense and ordered by the smallest
  // vertex of each component.
  std::vector<std::uint32_t> ComponentLabels() const;
  // Size of the component containing each vertex.
  std::vector<std::uint32_t> ComponentSizeOfVertex() const;
  std::uint32_t LargestComponentSize() const;

 private:
  std::vector<std::vector<std::uint32_t>> adjacency_;
  std::uint64_t edge_count_ = 0;
};

// G(n, p) with each of the n(n-1)/2 edges present independently. Uses
// geometric edge skipping, so sparse graphs cost O(n + edges).
RandomGraph GenerateErGraph(std::uint32_t n, double p, std::uint64_t seed);

enum class FrontierMode {
  // Neighbors of every chosen vertex join the sampling frontier.
  kExtend,
  // Only the start vertex's neighbors are ever sampled.
  kStartNeighborsOnly,
};

struct WorkloadConfig {
  std::uint32_t n = 10000;
  double p = 0.99 / 10000;
  std::uint32_t query_count = 5000;
  std::uint32_t min_len = 6;
  std::uint32_t max_len = 15;
  std::uint64_t seed = 1;
  FrontierMode frontier = FrontierMode::kExtend;
  // Start vertices tried before the query length is clamped to what the last
  // start vertex can reach.
  std::uint32_t max_restarts = 1000;

  void Validate() const;
};

struct Workload {
  std::vector<Query> queries;
  double pretrain_fraction = 0.0;

  std::size_t split_index() const;
  std::span<const Query> pretrain() const {
    return std::span<const Query>(queries).first(split_index());
  }
  std::span<const Query> realtime() const {
    return std::span<const Query>(queries).subspan(split_index());
  }
};

// Each query grows a connected vertex set from a random start vertex by
// sampling the frontier until it reaches a length drawn uniformly from
// [min_len, max_len].
Workload GenerateQueries(const RandomGraph& graph, const WorkloadConfig& config);

// Convenience: graph + queries from one config (graph seeded by config.seed).
Workload GenerateWorkload(const WorkloadConfig& config);

// Same length sequence as `like`, items uniform without replacement.
Workload UniformWorkload(std::span<const Query> like, std::uint32_t universe,
                         std::uint64_t seed);

// Mean of |Q_i & Q_j| over all unordered pairs i < j.
double MeanPairwiseIntersection(std::span<const Query> queries);

// One query per line, space-separated ascending item ids; '#' lines and blank
// lines are skipped. Ids are assigned sequentially in file order.
Workload ReadQueryLog(std::istream& in,
                      std::optional<std::uint32_t> universe = std::nullopt);
Workload LoadQueryLog(const std::string& path,
                      std::optional<std::uint32_t> universe = std::nullopt);
void WriteQueryLog(std::ostream& out, std::span<const Query> queries);
void SaveQueryLog(const std::string& path, std::span<const Query> queries);

}  // namespace incset

#endif  // INCSET_WORKLOAD_H_
