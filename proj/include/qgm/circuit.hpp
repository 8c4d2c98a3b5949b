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
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qgm/layer_graph.hpp"
#include "qgm/pauli.hpp"
#include "qgm/report.hpp"
#include "qgm/rng.hpp"

namespace qgm {

enum class GateKind : std::uint8_t { RotX, RotY, RotZ, RotXX, RotYY, RotZZ, CZ };
enum class GateRole : std::uint8_t { Generative, Trainable };

inline bool is_rotation(GateKind k) { return k != GateKind::CZ; }
inline bool is_two_qubit(GateKind k) {
  return k == GateKind::RotXX || k == GateKind::RotYY || k == GateKind::RotZZ ||
         k == GateKind::CZ;
}

/// Pauli letter of a rotation's generator (per qubit for the two-qubit kinds).
inline PauliLetter generator_letter(GateKind k) {
  switch (k) {
    case GateKind::RotX: case GateKind::RotXX: return PauliLetter::X;
    case GateKind::RotY: case GateKind::RotYY: return PauliLetter::Y;
    case GateKind::RotZ: case GateKind::RotZZ: return PauliLetter::Z;
    case GateKind::CZ: break;
  }
  throw UnsupportedGeneratorError("CZ is not a Pauli rotation");
}

/// Rotations are exp(-i·angle·G) with G the gate's Pauli generator. Trainable
/// gates read their angle from the circuit's θ through `param_id`.
struct Gate {
  GateKind kind = GateKind::RotX;
  std::array<std::size_t, 2> qubits{0, 0};
  double angle = 0.0;
  GateRole role = GateRole::Generative;
  std::optional<std::size_t> param_id;

  std::size_t arity() const { return is_two_qubit(kind) ? 2 : 1; }

  /// Generator as a Pauli string on n qubits.
  PauliString generator(std::size_t n) const {
    PauliString g(n);
    const PauliLetter letter = generator_letter(kind);
    g.set(qubits[0], letter);
    if (arity() == 2) g.set(qubits[1], letter);
    return g;
  }
};

enum class LayerKind : std::uint8_t { Rotation, CZ, Brick };

struct Layer {
  LayerKind kind = LayerKind::Rotation;
  std::vector<Gate> gates;
};

/// Two-qubit gates of one brick, in time order. Each u = RotZ·RotY·RotZ.
inline constexpr std::array<GateKind, 15> kBrickTemplate{
    GateKind::RotZ,  GateKind::RotY,  GateKind::RotZ,   // u on first qubit
    GateKind::RotZ,  GateKind::RotY,  GateKind::RotZ,   // u on second qubit
    GateKind::RotXX, GateKind::RotYY, GateKind::RotZZ,  // entangling core
    GateKind::RotZ,  GateKind::RotY,  GateKind::RotZ,   // u on first qubit
    GateKind::RotZ,  GateKind::RotY,  GateKind::RotZ};  // u on second qubit
inline constexpr std::size_t kBrickParams = kBrickTemplate.size();

/// Qubit slot (0 = first, 1 = second, 2 = both) of each template entry.
inline constexpr std::array<int, 15> kBrickSlots{0, 0, 0, 1, 1, 1, 2, 2, 2, 0, 0, 0, 1, 1, 1};

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::size_t n) : n_(n) {}

  std::size_t num_qubits() const { return n_; }
  const std::vector<Layer>& layers() const { return layers_; }
  const std::vector<double>& theta() const { return theta_; }
  std::vector<double>& theta() { return theta_; }

  void set_theta(std::vector<double> theta) {
    if (theta.size() != theta_.size()) {
      throw std::invalid_argument("θ has " + std::to_string(theta_.size()) +
                                  " entries, got " + std::to_string(theta.size()));
    }
    theta_ = std::move(theta);
  }

  /// Appends a layer after checking the layer invariants.
  void add_layer(Layer layer) {
    validate_layer(layer);
    layers_.push_back(std::move(layer));
  }

  /// Allocates a fresh trainable parameter and returns its id.
  std::size_t add_parameter(double value) {
    theta_.push_back(value);
    return theta_.size() - 1;
  }

  double angle(const Gate& g) const { return g.param_id ? theta_.at(*g.param_id) : g.angle; }

  std::size_t num_gates() const {
    std::size_t k = 0;
    for (const auto& l : layers_) k += l.gates.size();
    return k;
  }

  std::size_t num_rotations() const {
    std::size_t k = 0;
    for (const auto& l : layers_)
      for (const auto& g : l.gates) k += is_rotation(g.kind) ? 1 : 0;
    return k;
  }

  /// Flattened gate list in time order.
  std::vector<Gate> gates() const {
    std::vector<Gate> out;
    out.reserve(num_gates());
    for (const auto& l : layers_) out.insert(out.end(), l.gates.begin(), l.gates.end());
    return out;
  }

  /// Checks every layer invariant and that each parameter id is used exactly once.
  void validate() const {
    std::vector<int> uses(theta_.size(), 0);
    for (const auto& l : layers_) {
      validate_layer(l);
      for (const auto& g : l.gates) {
        if (!g.param_id) continue;
        if (*g.param_id >= theta_.size()) {
          throw std::invalid_argument("param_id " + std::to_string(*g.param_id) +
                                      " outside θ of size " + std::to_string(theta_.size()));
        }
        ++uses[*g.param_id];
      }
    }
    for (std::size_t i = 0; i < uses.size(); ++i) {
      if (uses[i] != 1) {
        throw std::invalid_argument("parameter " + std::to_string(i) + " used " +
                                    std::to_string(uses[i]) + " times");
      }
    }
  }

  /// Appends `other`'s layers, renumbering its parameters after ours.
  void append(const Circuit& other) {
    if (other.n_ != n_) throw DimensionError("cannot compose circuits of different width");
    const std::size_t offset = theta_.size();
    theta_.insert(theta_.end(), other.theta_.begin(), other.theta_.end());
    for (Layer l : other.layers_) {
      for (auto& g : l.gates) {
        if (g.param_id) g.param_id = *g.param_id + offset;
      }
      layers_.push_back(std::move(l));
    }
  }

 private:
  void validate_layer(const Layer& layer) const {
    for (const auto& g : layer.gates) {
      for (std::size_t k = 0; k < g.arity(); ++k) {
        if (g.qubits[k] >= n_) {
          throw std::out_of_range("gate on qubit " + std::to_string(g.qubits[k]) +
                                  " in a " + std::to_string(n_) + "-qubit circuit");
        }
      }
      if (g.arity() == 2 && g.qubits[0] == g.qubits[1]) {
        throw std::invalid_argument("two-qubit gate on a repeated qubit");
      }
    }
    switch (layer.kind) {
      case LayerKind::Rotation: {
        std::vector<int> seen(n_, 0);
        for (const auto& g : layer.gates) {
          if (g.arity() != 1 || !is_rotation(g.kind)) {
            throw std::invalid_argument("rotation layer holds a non single-qubit rotation");
          }
          ++seen[g.qubits[0]];
        }
        if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
          throw std::invalid_argument("rotation layer must rotate every qubit exactly once");
        }
        break;
      }
      case LayerKind::CZ: {
        std::set<Edge> edges;
        for (const auto& g : layer.gates) {
          if (g.kind != GateKind::CZ) throw std::invalid_argument("cz layer holds a non-CZ gate");
          const Edge e{std::min(g.qubits[0], g.qubits[1]), std::max(g.qubits[0], g.qubits[1])};
          if (!edges.insert(e).second) throw std::invalid_argument("duplicate CZ edge");
        }
        break;
      }
      case LayerKind::Brick: {
        std::set<Edge> pairs;
        std::vector<int> owner(n_, -1);
        for (const auto& g : layer.gates) {
          const Edge e = brick_pair(g);
          if (pairs.insert(e).second) {
            for (std::size_t q : {e.first, e.second}) {
              if (owner[q] != -1) throw std::invalid_argument("overlapping bricks in a brick layer");
              owner[q] = 1;
            }
          }
        }
        break;
      }
    }
  }

  // Single-qubit brick gates carry their brick partner in qubits[1].
  static Edge brick_pair(const Gate& g) {
    return {std::min(g.qubits[0], g.qubits[1]), std::max(g.qubits[0], g.qubits[1])};
  }

  std::size_t n_ = 0;
  std::vector<Layer> layers_;
  std::vector<double> theta_;
};

// ---------------------------------------------------------------------------
// Builders

struct GenerativeSpec {
  std::size_t n = 0;
  std::size_t layers = 0;
  double p = 0.0;
  double tau2 = 0.0;
  std::uint64_t seed = 0;
};

enum class Tau2Preset { Constant, Theorem };

/// Largest variance kept strictly below 1/4.
inline constexpr double kTau2Ceiling = 0.2499;

struct Tau2Resolution {
  double value = 0.0;
  bool clamped = false;
};

/// "constant": kTau2Ceiling. "theorem": ln(n) / (16·S·(L+2)), clamped to
/// kTau2Ceiling (flagged) when that formula reaches 1/4.
inline Tau2Resolution resolve_tau2(Tau2Preset preset, std::size_t n, std::size_t layers,
                                   std::size_t max_weight) {
  if (preset == Tau2Preset::Constant) return {kTau2Ceiling, false};
  if (n < 2 || max_weight == 0) {
    throw std::invalid_argument("theorem τ² needs n ≥ 2 and S ≥ 1");
  }
  const double t = std::log(static_cast<double>(n)) /
                   (16.0 * static_cast<double>(max_weight) * static_cast<double>(layers + 2));
  if (t >= 0.25) return {kTau2Ceiling, true};
  return {std::min(kTau2Ceiling, t), t > kTau2Ceiling};
}

inline Tau2Preset parse_tau2_preset(const std::string& s) {
  if (s == "constant") return Tau2Preset::Constant;
  if (s == "theorem") return Tau2Preset::Theorem;
  throw std::invalid_argument("unknown τ² preset \"" + s + "\" (expected constant|theorem)");
}

/// Edge probability ln(n)/n.
inline double default_edge_probability(std::size_t n) {
  return n < 2 ? 0.0 : std::log(static_cast<double>(n)) / static_cast<double>(n);
}

/// ⌈ln n⌉ layers.
inline std::size_t default_generative_layers(std::size_t n) {
  return n < 2 ? 0 : static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(n)) - 1e-12));
}

/// ⌈log₂ n⌉ brick layers.
inline std::size_t default_trainable_depth(std::size_t n) {
  std::size_t d = 0;
  while ((std::size_t{1} << d) < n) ++d;
  return d;
}

/// Edge-probability rule for G(n, p).
struct EdgeRule {
  enum class Kind { LogOverN, COverN, Constant } kind = Kind::LogOverN;
  double value = 0.0;

  double operator()(std::size_t n) const {
    switch (kind) {
      case Kind::LogOverN: return default_edge_probability(n);
      case Kind::COverN: return n == 0 ? 0.0 : std::min(1.0, value / static_cast<double>(n));
      case Kind::Constant: return value;
    }
    return 0.0;
  }

  /// "ln(n)/n", "c/n:<c>", or a plain probability such as "0.1".
  static EdgeRule parse(const std::string& s) {
    if (s == "ln(n)/n" || s == "log") return {Kind::LogOverN, 0.0};
    if (s.rfind("c/n:", 0) == 0) return {Kind::COverN, std::stod(s.substr(4))};
    std::size_t used = 0;
    const double p = std::stod(s, &used);
    if (used != s.size() || p < 0 || p > 1) throw std::invalid_argument("bad edge rule \"" + s + "\"");
    return {Kind::Constant, p};
  }

  std::string str() const {
    switch (kind) {
      case Kind::LogOverN: return "ln(n)/n";
      case Kind::COverN: return "c/n:" + format_cell(Cell{value});
      case Kind::Constant: return format_cell(Cell{value});
    }
    return "";
  }
};

namespace detail {

inline Layer rotation_layer(std::size_t n, GateKind kind, Rng& rng,
                            std::normal_distribution<double>* gauss) {
  Layer layer{LayerKind::Rotation, {}};
  layer.gates.reserve(n);
  for (std::size_t q = 0; q < n; ++q) {
    const double angle = gauss ? (*gauss)(rng) : 0.0;
    layer.gates.push_back(Gate{kind, {q, q}, angle, GateRole::Generative, std::nullopt});
  }
  return layer;
}

inline Layer cz_layer(const LayerGraph& g) {
  Layer layer{LayerKind::CZ, {}};
  for (const auto& [a, b] : g.edges()) {
    layer.gates.push_back(Gate{GateKind::CZ, {a, b}, 0.0, GateRole::Generative, std::nullopt});
  }
  return layer;
}

}  // namespace detail

/// L × [RX layer, CZ layer on G(n,p)], then an RX layer and an RY layer.
/// Every angle is i.i.d. N(0, τ²); τ² = 0 gives all-zero angles.
/// Draw order from the seeded stream: per layer n angles then the graph;
/// then the final RX and RY angles.
inline Circuit build_generative(const GenerativeSpec& spec) {
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) {
    throw std::invalid_argument("edge probability must lie in [0, 1]");
  }
  if (!(spec.tau2 >= 0.0) || !std::isfinite(spec.tau2)) {
    throw std::invalid_argument("τ² must be finite and non-negative");
  }
  Rng rng = make_rng(spec.seed);
  std::optional<std::normal_distribution<double>> gauss;
  if (spec.tau2 > 0) gauss.emplace(0.0, std::sqrt(spec.tau2));
  auto* g = gauss ? &*gauss : nullptr;

  Circuit c(spec.n);
  for (std::size_t l = 0; l < spec.layers; ++l) {
    c.add_layer(detail::rotation_layer(spec.n, GateKind::RotX, rng, g));
    c.add_layer(detail::cz_layer(sample_er_graph(spec.n, spec.p, rng)));
  }
  c.add_layer(detail::rotation_layer(spec.n, GateKind::RotX, rng, g));
  c.add_layer(detail::rotation_layer(spec.n, GateKind::RotY, rng, g));
  return c;
}

enum class ThetaInit { Uniform, Zeros };

/// Pairs of brick layer `layer`: even layers start at qubit 0, odd at qubit 1.
inline std::vector<Edge> brick_pairs(std::size_t n, std::size_t layer) {
  std::vector<Edge> pairs;
  for (std::size_t a = layer % 2; a + 1 < n; a += 2) pairs.emplace_back(a, a + 1);
  return pairs;
}

/// `depth` brick layers on a 1-D chain; each brick is the 15-parameter
/// template kBrickTemplate. θ ~ Uniform[-π, π) or all zeros.
inline Circuit build_trainable(std::size_t n, std::size_t depth, std::uint64_t seed,
                               ThetaInit init = ThetaInit::Uniform) {
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> uniform(-std::numbers::pi, std::numbers::pi);
  Circuit c(n);
  for (std::size_t l = 0; l < depth; ++l) {
    Layer layer{LayerKind::Brick, {}};
    for (const auto& [a, b] : brick_pairs(n, l)) {
      for (std::size_t k = 0; k < kBrickParams; ++k) {
        Gate g;
        g.kind = kBrickTemplate[k];
        g.role = GateRole::Trainable;
        switch (kBrickSlots[k]) {
          case 0: g.qubits = {a, b}; break;
          case 1: g.qubits = {b, a}; break;
          default: g.qubits = {a, b}; break;
        }
        g.param_id = c.add_parameter(init == ThetaInit::Uniform ? uniform(rng) : 0.0);
        layer.gates.push_back(g);
      }
    }
    c.add_layer(std::move(layer));
  }
  return c;
}

/// Generative circuit followed by a trainable circuit.
inline Circuit compose(const Circuit& first, const Circuit& second) {
  Circuit c = first;
  c.append(second);
  return c;
}

/// Generative layers (generative rotations and CZ layers) and trainable
/// layers of a composed circuit, each as its own circuit with parameters
/// renumbered in order of first use.
struct CircuitParts {
  Circuit generative;
  Circuit trainable;
};

inline CircuitParts split_roles(const Circuit& c) {
  CircuitParts parts{Circuit(c.num_qubits()), Circuit(c.num_qubits())};
  std::map<std::size_t, std::size_t> remap;
  for (Layer layer : c.layers()) {
    const bool trainable = layer.kind == LayerKind::Brick ||
                           (layer.kind == LayerKind::Rotation && !layer.gates.empty() &&
                            layer.gates.front().role == GateRole::Trainable);
    if (!trainable) {
      parts.generative.add_layer(std::move(layer));
      continue;
    }
    for (auto& g : layer.gates) {
      if (!g.param_id) continue;
      auto [it, fresh] = remap.try_emplace(*g.param_id, parts.trainable.theta().size());
      if (fresh) parts.trainable.add_parameter(c.theta().at(*g.param_id));
      g.param_id = it->second;
    }
    parts.trainable.add_layer(std::move(layer));
  }
  return parts;
}

/// Copy of `c` with every fixed-angle generative rotation redrawn from
/// N(0, τ²), in layer order then gate order.
inline Circuit resample_generative(const Circuit& c, double tau2, std::uint64_t seed) {
  if (!(tau2 >= 0.0) || !std::isfinite(tau2)) throw std::invalid_argument("τ² must be finite and >= 0");
  Rng rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(tau2));
  Circuit out(c.num_qubits());
  for (double t : c.theta()) out.add_parameter(t);
  for (Layer layer : c.layers()) {
    for (auto& g : layer.gates) {
      if (g.role == GateRole::Generative && is_rotation(g.kind) && !g.param_id) {
        g.angle = tau2 > 0 ? gauss(rng) : 0.0;
      }
    }
    out.add_layer(std::move(layer));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Light cones

/// Backward light cone of `support` through `depth` brick layers (the last
/// layer being depth-1).
inline std::vector<std::size_t> brick_lightcone(std::size_t n, std::size_t depth,
                                                const std::vector<std::size_t>& support) {
  std::vector<char> in(n, 0);
  for (std::size_t q : support) in.at(q) = 1;
  for (std::size_t l = depth; l-- > 0;) {
    for (const auto& [a, b] : brick_pairs(n, l)) {
      if (in[a] || in[b]) in[a] = in[b] = 1;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t q = 0; q < n; ++q)
    if (in[q]) out.push_back(q);
  return out;
}

struct LightCone {
  /// per_layer[l]: qubits in the cone at the input of layer l.
  std::vector<std::vector<std::size_t>> per_layer;
  std::vector<std::size_t> final_set;
};

/// Walks layers from last to first; every layer's two-qubit gates commute or
/// have disjoint supports, so each layer adds the neighbours of the current set
/// at once. Rotation layers leave the set unchanged.
inline LightCone backward_lightcone(const Circuit& circuit,
                                    const std::vector<std::size_t>& support) {
  const std::size_t n = circuit.num_qubits();
  std::vector<char> in(n, 0);
  for (std::size_t q : support) in.at(q) = 1;
  LightCone cone;
  cone.per_layer.resize(circuit.layers().size());
  const auto collect = [&] {
    std::vector<std::size_t> s;
    for (std::size_t q = 0; q < n; ++q)
      if (in[q]) s.push_back(q);
    return s;
  };
  for (std::size_t l = circuit.layers().size(); l-- > 0;) {
    const Layer& layer = circuit.layers()[l];
    if (layer.kind != LayerKind::Rotation) {
      std::vector<char> next = in;
      for (const auto& g : layer.gates) {
        const std::size_t a = g.qubits[0], b = g.qubits[1];
        if (a == b) continue;
        if (in[a] || in[b]) next[a] = next[b] = 1;
      }
      in = std::move(next);
    }
    cone.per_layer[l] = collect();
  }
  cone.final_set = collect();
  return cone;
}

// ---------------------------------------------------------------------------
// JSON

inline const char* axis_name(GateKind k) {
  switch (k) {
    case GateKind::RotX: return "X";
    case GateKind::RotY: return "Y";
    case GateKind::RotZ: return "Z";
    default: throw std::invalid_argument("not a single-qubit rotation");
  }
}

inline nlohmann::json to_json(const Circuit& c) {
  using nlohmann::json;
  json layers = json::array();
  for (const auto& layer : c.layers()) {
    switch (layer.kind) {
      case LayerKind::Rotation: {
        json angles = json::array();
        std::vector<double> by_qubit(c.num_qubits());
        for (const auto& g : layer.gates) by_qubit[g.qubits[0]] = c.angle(g);
        for (double a : by_qubit) angles.push_back(a);
        const Gate& g0 = layer.gates.front();
        layers.push_back({{"type", "rot"},
                          {"axis", axis_name(g0.kind)},
                          {"role", g0.role == GateRole::Generative ? "gen" : "train"},
                          {"angles", angles}});
        break;
      }
      case LayerKind::CZ: {
        json edges = json::array();
        for (const auto& g : layer.gates) edges.push_back({g.qubits[0], g.qubits[1]});
        layers.push_back({{"type", "cz"}, {"edges", edges}});
        break;
      }
      case LayerKind::Brick: {
        json pairs = json::array(), ids = json::array();
        for (std::size_t i = 0; i + kBrickParams <= layer.gates.size(); i += kBrickParams) {
          const Gate& core = layer.gates[i + 6];
          pairs.push_back({core.qubits[0], core.qubits[1]});
          json row = json::array();
          for (std::size_t k = 0; k < kBrickParams; ++k) row.push_back(*layer.gates[i + k].param_id);
          ids.push_back(row);
        }
        layers.push_back({{"type", "brick"}, {"pairs", pairs}, {"param_ids", ids}});
        break;
      }
    }
  }
  return json{{"n", c.num_qubits()}, {"theta", c.theta()}, {"layers", layers}};
}

inline Circuit circuit_from_json(const nlohmann::json& j) {
  Circuit c(j.at("n").get<std::size_t>());
  for (double t : j.at("theta")) c.add_parameter(t);
  for (const auto& lj : j.at("layers")) {
    const std::string type = lj.at("type").get<std::string>();
    Layer layer;
    if (type == "rot") {
      layer.kind = LayerKind::Rotation;
      const std::string axis = lj.at("axis").get<std::string>();
      const GateKind kind = axis == "X"   ? GateKind::RotX
                            : axis == "Y" ? GateKind::RotY
                            : axis == "Z" ? GateKind::RotZ
                                          : throw std::invalid_argument("bad axis " + axis);
      const GateRole role = lj.value("role", "gen") == "train" ? GateRole::Trainable
                                                                : GateRole::Generative;
      const auto& angles = lj.at("angles");
      for (std::size_t q = 0; q < angles.size(); ++q) {
        layer.gates.push_back(Gate{kind, {q, q}, angles[q].get<double>(), role, std::nullopt});
      }
    } else if (type == "cz") {
      layer.kind = LayerKind::CZ;
      for (const auto& e : lj.at("edges")) {
        layer.gates.push_back(Gate{GateKind::CZ, {e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()},
                                   0.0, GateRole::Generative, std::nullopt});
      }
    } else if (type == "brick") {
      layer.kind = LayerKind::Brick;
      const auto& pairs = lj.at("pairs");
      const auto& ids = lj.at("param_ids");
      if (pairs.size() != ids.size()) throw std::invalid_argument("brick pairs/param_ids mismatch");
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const std::size_t a = pairs[i].at(0), b = pairs[i].at(1);
        if (ids[i].size() != kBrickParams) throw std::invalid_argument("brick needs 15 param ids");
        for (std::size_t k = 0; k < kBrickParams; ++k) {
          Gate g;
          g.kind = kBrickTemplate[k];
          g.role = GateRole::Trainable;
          g.qubits = kBrickSlots[k] == 1 ? std::array<std::size_t, 2>{b, a}
                                         : std::array<std::size_t, 2>{a, b};
          g.param_id = ids[i][k].get<std::size_t>();
          layer.gates.push_back(g);
        }
      }
    } else {
      throw std::invalid_argument("unknown layer type \"" + type + "\"");
    }
    c.add_layer(std::move(layer));
  }
  c.validate();
  return c;
}

}  // namespace qgm
