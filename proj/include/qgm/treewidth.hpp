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
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgm/circuit.hpp"
#include "qgm/layer_graph.hpp"
#include "qgm/parallel.hpp"
#include "qgm/report.hpp"
#include "qgm/rng.hpp"

namespace qgm {

/// Induced subgraph on the light-cone qubits. Vertex i of `graph` is qubit
/// `qubits[i]`.
struct InteractionGraph {
  LayerGraph graph;
  std::vector<std::size_t> qubits;
};

/// Union over CZ layers of the gates with both qubits inside the backward
/// light cone of `support` at that layer (the cone after walking layers
/// l, l+1, … backwards).
inline InteractionGraph interaction_graph(const Circuit& circuit,
                                          const std::vector<std::size_t>& support) {
  const std::size_t n = circuit.num_qubits();
  std::vector<char> in(n, 0);
  for (std::size_t q : support) in.at(q) = 1;
  std::vector<Edge> kept;
  for (std::size_t l = circuit.layers().size(); l-- > 0;) {
    const Layer& layer = circuit.layers()[l];
    if (layer.kind == LayerKind::Rotation) continue;
    std::vector<char> next = in;
    for (const auto& g : layer.gates) {
      const std::size_t a = g.qubits[0], b = g.qubits[1];
      if (a != b && (in[a] || in[b])) next[a] = next[b] = 1;
    }
    in = std::move(next);
    for (const auto& g : layer.gates) {
      const std::size_t a = g.qubits[0], b = g.qubits[1];
      if (g.kind == GateKind::CZ && in[a] && in[b]) kept.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  InteractionGraph out;
  std::vector<std::size_t> label(n, 0);
  for (std::size_t q = 0; q < n; ++q) {
    if (in[q]) {
      label[q] = out.qubits.size();
      out.qubits.push_back(q);
    }
  }
  out.graph = LayerGraph(out.qubits.size());
  for (const auto& [a, b] : kept) out.graph.add_edge(label[a], label[b]);
  return out;
}

struct EliminationOrder {
  std::vector<std::size_t> order;
  std::size_t width = 0;
};

namespace detail {

class Bitset {
 public:
  explicit Bitset(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool test(std::size_t i) const { return words_[i / 64] >> (i % 64) & 1U; }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  /// |this \ other|
  std::size_t count_minus(const Bitset& other) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) c += std::popcount(words_[i] & ~other.words_[i]);
    return c;
  }
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      for (std::uint64_t w = words_[i]; w; w &= w - 1) f(i * 64 + std::countr_zero(w));
    }
  }

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace detail

/// Greedy min-fill elimination: repeatedly eliminate the vertex whose
/// neighbourhood needs the fewest fill edges to become a clique (ties to the
/// lowest index), connecting its neighbours. The largest neighbourhood seen
/// is an upper bound on treewidth.
inline EliminationOrder min_fill_width(const LayerGraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<detail::Bitset> adj(n, detail::Bitset(n));
  for (const auto& [a, b] : g.edges()) {
    adj[a].set(b);
    adj[b].set(a);
  }
  std::vector<char> alive(n, 1);
  EliminationOrder out;
  out.order.reserve(n);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n, best_fill = std::numeric_limits<std::size_t>::max();
    for (std::size_t v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      // |N(v) \ N(u)| includes u itself; every missing pair is seen from both ends.
      std::size_t missing = 0;
      adj[v].for_each([&](std::size_t u) { missing += adj[v].count_minus(adj[u]) - 1; });
      const std::size_t fill = missing / 2;
      if (fill < best_fill) {
        best_fill = fill;
        best = v;
        if (fill == 0) break;
      }
    }
    const std::size_t v = best;
    out.width = std::max(out.width, adj[v].count());
    out.order.push_back(v);
    std::vector<std::size_t> nb;
    adj[v].for_each([&](std::size_t u) { nb.push_back(u); });
    for (std::size_t i = 0; i < nb.size(); ++i) {
      adj[nb[i]].reset(v);
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        adj[nb[i]].set(nb[j]);
        adj[nb[j]].set(nb[i]);
      }
    }
    alive[v] = 0;
  }
  return out;
}

/// Largest k such that the graph has a non-empty k-core: repeatedly remove a
/// minimum-degree vertex and track the maximum of those minima.
inline std::size_t degeneracy(const LayerGraph& g) {
  const std::size_t n = g.num_vertices();
  if (n == 0) return 0;
  std::vector<std::size_t> deg(n);
  std::size_t max_deg = 0;
  for (std::size_t v = 0; v < n; ++v) max_deg = std::max(max_deg, deg[v] = g.degree(v));
  std::vector<std::vector<std::size_t>> buckets(max_deg + 1);
  for (std::size_t v = 0; v < n; ++v) buckets[deg[v]].push_back(v);
  std::vector<char> removed(n, 0);
  std::size_t result = 0, d = 0;
  for (std::size_t done = 0; done < n;) {
    d = d == 0 ? 0 : d - 1;
    while (buckets[d].empty()) ++d;
    const std::size_t v = buckets[d].back();
    buckets[d].pop_back();
    if (removed[v] || deg[v] != d) continue;  // stale entry
    removed[v] = 1;
    ++done;
    result = std::max(result, d);
    for (std::size_t u : g.neighbors(v)) {
      if (removed[u]) continue;
      --deg[u];
      buckets[deg[u]].push_back(u);
    }
  }
  return result;
}

/// Two rows per (n, trial): the single graph G_1 (layers = 1) and the union of
/// L = ⌈ln n⌉ independent layers (or `layers` when given). Columns n, trial,
/// layers, edges, degeneracy_lb, minfill_ub. Trial seed: mix(mix(master, n), trial).
inline std::vector<ReportRow> treewidth_trend(const std::vector<std::size_t>& sizes,
                                              const EdgeRule& rule, std::size_t trials,
                                              std::uint64_t seed,
                                              std::optional<std::size_t> layers = std::nullopt,
                                              std::size_t threads = 1) {
  struct Job {
    std::size_t n, trial;
  };
  std::vector<Job> jobs;
  for (std::size_t n : sizes)
    for (std::size_t t = 0; t < trials; ++t) jobs.push_back({n, t});
  std::vector<std::array<ReportRow, 2>> out(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    const auto [n, trial] = jobs[i];
    Rng rng = make_rng(mix_seed(mix_seed(seed, n), trial));
    const std::size_t total_layers = std::max<std::size_t>(1, layers.value_or(default_generative_layers(n)));
    const double p = rule(n);
    LayerGraph first = sample_er_graph(n, p, rng);
    LayerGraph all = first;
    for (std::size_t l = 1; l < total_layers; ++l) all.merge(sample_er_graph(n, p, rng));
    const auto row = [&](const LayerGraph& g, std::size_t l) {
      ReportRow r;
      r.set("n", n)
          .set("trial", trial)
          .set("layers", l)
          .set("edges", g.num_edges())
          .set("degeneracy_lb", degeneracy(g))
          .set("minfill_ub", min_fill_width(g).width);
      return r;
    };
    out[i] = {row(first, 1), row(all, total_layers)};
  });
  std::vector<ReportRow> rows;
  for (auto& pair : out) {
    rows.push_back(std::move(pair[0]));
    rows.push_back(std::move(pair[1]));
  }
  return rows;
}

}  // namespace qgm
