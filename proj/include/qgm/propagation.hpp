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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgm/circuit.hpp"
#include "qgm/pauli.hpp"

namespace qgm {

/// One set of truncation criteria. Unset fields do not truncate.
struct TruncationRule {
  std::optional<int> sine_cutoff;         // drop sine_count > m
  std::optional<double> coeff_threshold;  // drop |c| < ε
  std::optional<std::size_t> weight_cutoff;  // drop weight > w
  std::optional<std::size_t> max_terms;   // keep the max_terms largest |c|

  bool any() const { return sine_cutoff || coeff_threshold || weight_cutoff || max_terms; }
};

/// Truncation configuration for propagate().
///
/// In exact mode nothing is dropped and `base.max_terms`, when set, is a
/// resource limit: exceeding it raises PropagationLimitError. Otherwise the
/// active rule is `base`, replaced by `schedule[k]` for gate steps ≥ k (the
/// largest such key wins). Gate steps count gates in propagation order, so
/// step 0 is the last gate of the circuit.
struct TruncationPolicy {
  bool exact = false;
  TruncationRule base;
  std::map<std::size_t, TruncationRule> schedule;

  static TruncationPolicy exact_mode(std::optional<std::size_t> term_limit = std::nullopt) {
    TruncationPolicy p;
    p.exact = true;
    p.base.max_terms = term_limit;
    return p;
  }

  static TruncationPolicy sine(int cutoff) {
    TruncationPolicy p;
    p.base.sine_cutoff = cutoff;
    return p;
  }

  void validate() const {
    if (exact) {
      if (base.sine_cutoff || base.coeff_threshold || base.weight_cutoff || !schedule.empty()) {
        throw std::invalid_argument("exact mode accepts only a max_terms resource limit");
      }
      return;
    }
    if (!base.any() && schedule.empty()) {
      throw std::invalid_argument("truncation policy sets no criterion and is not exact");
    }
    const auto check = [](const TruncationRule& r) {
      if (r.sine_cutoff && *r.sine_cutoff < 0) throw std::invalid_argument("negative sine cutoff");
      if (r.coeff_threshold && !(*r.coeff_threshold >= 0))
        throw std::invalid_argument("coefficient threshold must be non-negative");
      if (r.max_terms && *r.max_terms == 0) throw std::invalid_argument("max_terms must be positive");
    };
    check(base);
    for (const auto& [_, r] : schedule) check(r);
  }

  const TruncationRule& rule_at(std::size_t step) const {
    auto it = schedule.upper_bound(step);
    if (it == schedule.begin()) return base;
    return std::prev(it)->second;
  }

  /// Short identifier used in CSV output, e.g. "sine3", "exact", "coeff1e-05+w4".
  std::string id() const {
    if (exact) return "exact";
    std::ostringstream os;
    const auto put = [&](const TruncationRule& r) {
      std::string sep;
      if (r.sine_cutoff) { os << sep << "sine" << *r.sine_cutoff; sep = "+"; }
      if (r.coeff_threshold) { os << sep << "coeff" << *r.coeff_threshold; sep = "+"; }
      if (r.weight_cutoff) { os << sep << "w" << *r.weight_cutoff; sep = "+"; }
      if (r.max_terms) { os << sep << "max" << *r.max_terms; sep = "+"; }
      if (sep.empty()) os << "none";
    };
    put(base);
    for (const auto& [k, r] : schedule) {
      os << "@" << k << ":";
      put(r);
    }
    return os.str();
  }
};

struct PropagationReport {
  double expectation = 0.0;
  /// Term count after each layer, in propagation order.
  std::vector<std::size_t> terms_per_step;
  std::size_t peak_terms = 0;
  std::size_t final_terms = 0;
  /// Σ|c| over all truncated terms.
  double dropped_mass = 0.0;
  double wall_time = 0.0;
  std::size_t rotations_processed = 0;
};

class PropagationLimitError : public std::runtime_error {
 public:
  PropagationLimitError(const std::string& what, PropagationReport partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const PropagationReport& partial_report() const { return partial_; }

 private:
  PropagationReport partial_;
};

namespace detail {

/// Drops terms failing `rule`; returns the removed Σ|c|.
inline double truncate(PauliSum& sum, const TruncationRule& rule) {
  std::vector<double> dropped;
  auto& terms = sum.mutable_terms();
  for (auto it = terms.begin(); it != terms.end();) {
    const PauliTerm& t = it->second;
    const bool drop = (rule.sine_cutoff && t.sine_count > *rule.sine_cutoff) ||
                      (rule.coeff_threshold && std::abs(t.coefficient) < *rule.coeff_threshold) ||
                      (rule.weight_cutoff && t.string.weight() > *rule.weight_cutoff);
    if (drop) {
      dropped.push_back(std::abs(t.coefficient));
      terms.erase(it++);
    } else {
      ++it;
    }
  }
  if (rule.max_terms && terms.size() > *rule.max_terms) {
    std::vector<const PauliTerm*> order;
    order.reserve(terms.size());
    for (const auto& [_, t] : terms) order.push_back(&t);
    // Largest |c| first; ties broken by string order so the kept set is deterministic.
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(*rule.max_terms),
                     order.end(), [](const PauliTerm* a, const PauliTerm* b) {
                       const double x = std::abs(a->coefficient), y = std::abs(b->coefficient);
                       if (x != y) return x > y;
                       return a->string < b->string;
                     });
    std::vector<PauliString> victims;
    for (auto it = order.begin() + static_cast<std::ptrdiff_t>(*rule.max_terms); it != order.end(); ++it) {
      dropped.push_back(std::abs((*it)->coefficient));
      victims.push_back((*it)->string);
    }
    for (const auto& v : victims) terms.erase(v);
  }
  return ordered_sum(dropped);
}

}  // namespace detail

/// Heisenberg-picture evaluation of ⟨0…0|U† O U|0…0⟩: the observable is
/// conjugated through the circuit from the last gate to the first, with the
/// policy applied after every rotation.
inline PropagationReport propagate(const Circuit& circuit, const PauliSum& observable,
                                   const TruncationPolicy& policy,
                                   const std::vector<double>* theta = nullptr) {
  policy.validate();
  if (observable.num_qubits() != circuit.num_qubits()) {
    throw DimensionError("observable and circuit act on different qubit counts");
  }
  if (theta && theta->size() != circuit.theta().size()) {
    throw std::invalid_argument("θ override has the wrong length");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = circuit.num_qubits();
  PropagationReport report;
  PauliSum sum = observable;
  report.peak_terms = sum.size();
  std::vector<PauliTerm> spawn;
  std::size_t step = 0;

  const auto finish = [&] {
    report.final_terms = sum.size();
    report.expectation = expectation_zero_state(sum);
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const auto& layers = circuit.layers();
  for (std::size_t li = layers.size(); li-- > 0;) {
    const Layer& layer = layers[li];
    if (layer.kind == LayerKind::CZ) {
      // CZs in a layer commute: conjugate each string by the whole layer at once.
      PauliSum next(n);
      next.reserve(sum.size());
      for (const auto& [p, term] : sum.terms()) {
        PauliString q = p;
        int sign = 1;
        for (auto g = layer.gates.rbegin(); g != layer.gates.rend(); ++g) {
          auto [sg, r] = conjugate_cz(q, g->qubits[0], g->qubits[1]);
          sign *= sg;
          q = r;
        }
        next.add(q, sign * term.coefficient, term.sine_count);
      }
      sum = std::move(next);
      step += layer.gates.size();
    } else {
      for (auto g = layer.gates.rbegin(); g != layer.gates.rend(); ++g, ++step) {
        if (g->kind == GateKind::CZ) {
          sum = conjugate_cz(sum, g->qubits[0], g->qubits[1]);
          continue;
        }
        const double angle = g->param_id ? (theta ? (*theta)[*g->param_id]
                                                  : circuit.theta()[*g->param_id])
                                         : g->angle;
        detail::rotate_in_place(sum, g->generator(n), angle, spawn);
        ++report.rotations_processed;
        report.peak_terms = std::max(report.peak_terms, sum.size());
        if (policy.exact) {
          if (policy.base.max_terms && sum.size() > *policy.base.max_terms) {
            report.terms_per_step.push_back(sum.size());
            finish();
            throw PropagationLimitError("exact propagation exceeded " +
                                            std::to_string(*policy.base.max_terms) + " terms",
                                        report);
          }
        } else {
          report.dropped_mass += detail::truncate(sum, policy.rule_at(step));
        }
      }
    }
    report.terms_per_step.push_back(sum.size());
  }
  finish();
  return report;
}

/// Exact Heisenberg evolution U† O U as a Pauli sum (no truncation).
inline PauliSum heisenberg_evolve(const Circuit& circuit, const PauliSum& observable,
                                  const std::vector<double>* theta = nullptr) {
  if (observable.num_qubits() != circuit.num_qubits()) {
    throw DimensionError("observable and circuit act on different qubit counts");
  }
  PauliSum sum = observable;
  const auto& layers = circuit.layers();
  for (std::size_t li = layers.size(); li-- > 0;) {
    const auto& gates = layers[li].gates;
    for (auto g = gates.rbegin(); g != gates.rend(); ++g) {
      if (g->kind == GateKind::CZ) {
        sum = conjugate_cz(sum, g->qubits[0], g->qubits[1]);
      } else {
        const double angle = g->param_id ? (theta ? (*theta)[*g->param_id]
                                                  : circuit.theta()[*g->param_id])
                                         : g->angle;
        sum = conjugate_rotation(sum, g->generator(circuit.num_qubits()), angle);
      }
    }
  }
  return sum;
}

/// ⌈log₂ n⌉ sine factors; 0 for n ≤ 1.
inline int sine_cutoff_default(std::size_t n) {
  int k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

}  // namespace qgm
