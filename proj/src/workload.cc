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

#include "incset/workload.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>

#include "text_util.h"

namespace incset {

RandomGraph::RandomGraph(std::uint32_t n,
                         std::vector<std::vector<std::uint32_t>> adj)
    : adjacency_(std::move(adj)) {
  adjacency_.resize(n);
  std::uint64_t degree_sum = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    auto& list = adjacency_[v];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (std::uint32_t u : list) {
      if (u == v) throw ValidationError("self-loop at vertex " + std::to_string(v));
      if (u >= n) throw ValidationError("neighbor outside graph");
    }
    degree_sum += list.size();
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    for (std::uint32_t u : adjacency_[v]) {
      if (!std::binary_search(adjacency_[u].begin(), adjacency_[u].end(), v)) {
        throw ValidationError("adjacency is not symmetric");
      }
    }
  }
  edge_count_ = degree_sum / 2;
}

std::vector<std::uint32_t> RandomGraph::ComponentLabels() const {
  constexpr std::uint32_t kUnset = UINT32_MAX;
  const std::uint32_t n = vertex_count();
  std::vector<std::uint32_t> label(n, kUnset);
  std::vector<std::uint32_t> stack;
  std::uint32_t next = 0;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (label[s] != kUnset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::uint32_t v = stack.back();
      stack.pop_back();
      for (std::uint32_t u : adjacency_[v]) {
        if (label[u] == kUnset) {
          label[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  return label;
}

std::vector<std::uint32_t> RandomGraph::ComponentSizeOfVertex() const {
  const auto label = ComponentLabels();
  std::vector<std::uint32_t> size_of_label(vertex_count(), 0);
  for (std::uint32_t l : label) ++size_of_label[l];
  std::vector<std::uint32_t> out(label.size());
  for (std::size_t v = 0; v < label.size(); ++v) out[v] = size_of_label[label[v]];
  return out;
}

std::uint32_t RandomGraph::LargestComponentSize() const {
  const auto sizes = ComponentSizeOfVertex();
  return sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
}

RandomGraph GenerateErGraph(std::uint32_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("edge probability outside [0,1]");
  std::vector<std::vector<std::uint32_t>> adj(n);
  if (n < 2 || p == 0.0) return RandomGraph(n, std::move(adj));
  if (p == 1.0) {
    for (std::uint32_t v = 0; v < n; ++v) {
      for (std::uint32_t u = 0; u < n; ++u) {
        if (u != v) adj[v].push_back(u);
      }
    }
    return RandomGraph(n, std::move(adj));
  }
  // Walk the lower triangle (v > w) in row order, jumping over runs of absent
  // edges whose lengths are geometric with parameter p.
  Rng rng(seed);
  const double log_q = std::log1p(-p);
  std::int64_t v = 1;
  std::int64_t w = -1;
  while (v < n) {
    const double r = rng.UniformDouble();
    w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
    while (w >= v && v < n) {
      w -= v;
      ++v;
    }
    if (v < n) {
      adj[v].push_back(static_cast<std::uint32_t>(w));
      adj[w].push_back(static_cast<std::uint32_t>(v));
    }
  }
  return RandomGraph(n, std::move(adj));
}

void WorkloadConfig::Validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0,1]");
  if (min_len < 1) throw ConfigError("min_len must be >= 1");
  if (min_len > max_len) throw ConfigError("min_len exceeds max_len");
  if (max_len > n) throw ConfigError("max_len exceeds vertex count");
}

std::size_t Workload::split_index() const {
  return static_cast<std::size_t>(
      std::floor(pretrain_fraction * static_cast<double>(queries.size())));
}

Workload GenerateQueries(const RandomGraph& graph,
                         const WorkloadConfig& config) {
  config.Validate();
  const std::uint32_t n = graph.vertex_count();
  if (n < config.max_len) {
    throw PreconditionError("graph has fewer vertices than max_len");
  }
  const bool extend = config.frontier == FrontierMode::kExtend;
  std::vector<std::uint32_t> reach_of;
  if (extend) reach_of = graph.ComponentSizeOfVertex();

  Rng rng(MixSeed(config.seed, 0x51));
  // Epoch stamps avoid clearing per-vertex marks between queries.
  std::vector<std::uint32_t> in_query(n, 0), in_frontier(n, 0);
  std::uint32_t epoch = 0;
  std::vector<std::uint32_t> frontier;

  Workload workload;
  workload.queries.reserve(config.query_count);
  for (QueryId id = 0; id < config.query_count; ++id) {
    std::uint32_t length =
        static_cast<std::uint32_t>(rng.UniformIn(config.min_len, config.max_len));
    std::uint32_t start = 0;
    for (std::uint32_t attempt = 0;; ++attempt) {
      start = static_cast<std::uint32_t>(rng.Uniform(n));
      const std::uint32_t reach =
          extend ? reach_of[start]
                 : static_cast<std::uint32_t>(graph.neighbors(start).size()) + 1;
      if (reach >= length) break;
      if (attempt + 1 >= config.max_restarts) {
        length = reach;
        break;
      }
    }

    ++epoch;
    frontier.clear();
    ItemSet items{start};
    in_query[start] = epoch;
    auto grow_frontier = [&](std::uint32_t v) {
      for (std::uint32_t u : graph.neighbors(v)) {
        if (in_frontier[u] != epoch) {
          in_frontier[u] = epoch;
          frontier.push_back(u);
        }
      }
    };
    grow_frontier(start);
    while (items.size() < length) {
      const std::uint32_t x = frontier[rng.Uniform(frontier.size())];
      if (in_query[x] == epoch) continue;
      in_query[x] = epoch;
      items.push_back(x);
      if (extend) grow_frontier(x);
    }
    Normalize(items);
    workload.queries.push_back(Query{id, std::move(items)});
  }
  return workload;
}

Workload GenerateWorkload(const WorkloadConfig& config) {
  config.Validate();
  const RandomGraph graph = GenerateErGraph(config.n, config.p, config.seed);
  return GenerateQueries(graph, config);
}

Workload UniformWorkload(std::span<const Query> like, std::uint32_t universe,
                         std::uint64_t seed) {
  Rng rng(seed);
  Workload out;
  out.queries.reserve(like.size());
  for (const Query& q : like) {
    if (q.items.size() > universe) throw ConfigError("query longer than universe");
    ItemSet items;
    while (items.size() < q.items.size()) {
      const auto x = static_cast<ItemId>(rng.Uniform(universe));
      if (std::find(items.begin(), items.end(), x) == items.end()) {
        items.push_back(x);
      }
    }
    Normalize(items);
    out.queries.push_back(Query{q.id, std::move(items)});
  }
  return out;
}

double MeanPairwiseIntersection(std::span<const Query> queries) {
  const double count = static_cast<double>(queries.size());
  if (queries.size() < 2) return 0.0;
  // sum over pairs of |Q_i & Q_j| == sum over items of C(freq, 2)
  std::unordered_map<ItemId, std::uint64_t> freq;
  for (const Query& q : queries) {
    for (ItemId item : q.items) ++freq[item];
  }
  double pairs = 0.0;
  for (const auto& [item, f] : freq) {
    pairs += static_cast<double>(f) * static_cast<double>(f - 1) / 2.0;
  }
  return pairs / (count * (count - 1.0) / 2.0);
}

Workload ReadQueryLog(std::istream& in, std::optional<std::uint32_t> universe) {
  Workload workload;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = internal::Trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto ids = internal::ParseIdList(view);
    if (!ids) throw ParseError("malformed item id", line_no);
    for (ItemId item : *ids) {
      if (universe && item >= *universe) {
        throw ValidationError("line " + std::to_string(line_no) + ": item " +
                              std::to_string(item) + " outside universe of size " +
                              std::to_string(*universe));
      }
    }
    ItemSet items = std::move(*ids);
    Normalize(items);
    const auto id = static_cast<QueryId>(workload.queries.size());
    workload.queries.push_back(Query{id, std::move(items)});
  }
  return workload;
}

Workload LoadQueryLog(const std::string& path,
                      std::optional<std::uint32_t> universe) {
  auto in = internal::OpenForRead(path);
  return ReadQueryLog(in, universe);
}

void WriteQueryLog(std::ostream& out, std::span<const Query> queries) {
  std::string buf;
  for (const Query& q : queries) {
    internal::AppendIdList(buf, q.items);
    buf.push_back('\n');
  }
  out << buf;
}

void SaveQueryLog(const std::string& path, std::span<const Query> queries) {
  auto out = internal::OpenForWrite(path);
  WriteQueryLog(out, queries);
}

}  // namespace incset
