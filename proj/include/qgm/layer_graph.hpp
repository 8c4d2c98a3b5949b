// Copyright 2026 The qgm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qgm/rng.hpp"

namespace qgm {

using Edge = std::pair<std::size_t, std::size_t>;

/// Simple undirected graph on vertices 0..n-1 (qubits). Edges are stored
/// normalized (a < b) in a sorted set, adjacency in sorted vectors.
class LayerGraph {
 public:
  LayerGraph() = default;
  explicit LayerGraph(std::size_t n) : adjacency_(n) {}

  LayerGraph(std::size_t n, const std::vector<Edge>& edges) : adjacency_(n) {
    for (const auto& [a, b] : edges) add_edge(a, b);
  }

  std::size_t num_vertices() const { return adjacency_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::set<Edge>& edges() const { return edges_; }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_.at(v); }
  std::size_t degree(std::size_t v) const { return adjacency_.at(v).size(); }

  bool has_edge(std::size_t a, std::size_t b) const {
    return edges_.contains({std::min(a, b), std::max(a, b)});
  }

  /// Returns false when the edge was already present.
  bool add_edge(std::size_t a, std::size_t b) {
    if (a == b) throw std::invalid_argument("self-loop on vertex " + std::to_string(a));
    if (a >= num_vertices() || b >= num_vertices()) {
      throw std::out_of_range("edge (" + std::to_string(a) + "," + std::to_string(b) +
                              ") outside a " + std::to_string(num_vertices()) +
                              "-vertex graph");
    }
    if (!edges_.insert({std::min(a, b), std::max(a, b)}).second) return false;
    insert_sorted(adjacency_[a], b);
    insert_sorted(adjacency_[b], a);
    return true;
  }

  /// Graph union on the same vertex set.
  void merge(const LayerGraph& other) {
    if (other.num_vertices() != num_vertices()) {
      throw std::invalid_argument("cannot merge graphs of different order");
    }
    for (const auto& [a, b] : other.edges()) add_edge(a, b);
  }

  std::vector<Edge> edge_list() const { return {edges_.begin(), edges_.end()}; }

  friend bool operator==(const LayerGraph& a, const LayerGraph& b) {
    return a.num_vertices() == b.num_vertices() && a.edges_ == b.edges_;
  }

 private:
  static void insert_sorted(std::vector<std::size_t>& v, std::size_t x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
  }

  std::vector<std::vector<std::size_t>> adjacency_;
  std::set<Edge> edges_;
};

/// G(n, p) drawn from an existing stream: pairs (i, j), i < j, visited in
/// lexicographic order, one uniform draw each.
inline LayerGraph sample_er_graph(std::size_t n, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("edge probability must lie in [0, 1], got " + std::to_string(p));
  }
  LayerGraph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (uniform01(rng) < p) g.add_edge(i, j);
    }
  }
  return g;
}

inline LayerGraph sample_er_graph(std::size_t n, double p, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return sample_er_graph(n, p, rng);
}

}  // namespace qgm
