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
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgm/density_matrix.hpp"
#include "qgm/linalg.hpp"
#include "qgm/parallel.hpp"
#include "qgm/pauli.hpp"
#include "qgm/propagation.hpp"
#include "qgm/report.hpp"
#include "qgm/rng.hpp"
#include "qgm/statevector.hpp"

namespace qgm {

/// One randomized single-qubit-Pauli measurement: a basis letter (X, Y or Z)
/// and a ±1 outcome per qubit.
struct ShadowSample {
  std::vector<PauliLetter> bases;
  std::vector<std::int8_t> outcomes;

  friend bool operator==(const ShadowSample&, const ShadowSample&) = default;
};

struct ShadowSet {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<ShadowSample> samples;

  std::size_t size() const { return samples.size(); }
};

/// Default number of median-of-means groups.
inline constexpr std::size_t kDefaultShadowGroups = 10;

/// Shot s uses seed mix(seed, s): a uniform basis per qubit, the basis
/// change (H for X, H·S† for Y), then one inverse-CDF sample.
inline ShadowSet collect_shadows(const StateVector& state, std::size_t shots, std::uint64_t seed,
                                 std::size_t threads = 1) {
  const std::size_t n = state.num_qubits();
  ShadowSet set{n, seed, std::vector<ShadowSample>(shots)};
  const double h = std::numbers::sqrt2 / 2;
  parallel_for(shots, threads, [&](std::size_t shot) {
    Rng rng = make_rng(mix_seed(seed, shot));
    std::uniform_int_distribution<int> pick(1, 3);
    ShadowSample sample;
    sample.bases.resize(n);
    sample.outcomes.resize(n);
    StateVector rotated = state;
    for (std::size_t q = 0; q < n; ++q) {
      const auto basis = static_cast<PauliLetter>(pick(rng));
      sample.bases[q] = basis;
      if (basis == PauliLetter::X) {
        detail::apply_1q(rotated, q, h, h, h, -h);
      } else if (basis == PauliLetter::Y) {
        detail::apply_1q(rotated, q, h, cplx{0, -h}, h, cplx{0, h});
      }
    }
    const std::size_t k = sample_index(rotated, rng);
    for (std::size_t q = 0; q < n; ++q) sample.outcomes[q] = (k >> q & 1U) ? -1 : 1;
    set.samples[shot] = std::move(sample);
  });
  return set;
}

inline ShadowSet collect_shadows(const Circuit& circuit, std::size_t shots, std::uint64_t seed,
                                 std::size_t threads = 1) {
  return collect_shadows(run(circuit), shots, seed, threads);
}

/// Single-shot estimate of ⟨P⟩: Π over supp(P) of 3·outcome when the basis
/// matches the letter, 0 otherwise.
inline double shadow_shot_value(const ShadowSample& s, const PauliString& p) {
  double v = 1;
  for (std::size_t q : p.support()) {
    if (s.bases[q] != p.get(q)) return 0.0;
    v *= 3.0 * s.outcomes[q];
  }
  return v;
}

inline double estimate_pauli_mean(const ShadowSet& shadows, const PauliString& p) {
  if (p.num_qubits() != shadows.n) throw DimensionError("Pauli string and shadows differ in size");
  if (shadows.samples.empty()) throw std::invalid_argument("empty shadow set");
  double s = 0;
  for (const auto& sample : shadows.samples) s += shadow_shot_value(sample, p);
  return s / static_cast<double>(shadows.size());
}

/// Median of `groups` group means. Shots are split into contiguous groups
/// whose sizes differ by at most one.
inline double estimate_pauli(const ShadowSet& shadows, const PauliString& p,
                             std::size_t groups = kDefaultShadowGroups) {
  if (p.num_qubits() != shadows.n) throw DimensionError("Pauli string and shadows differ in size");
  const std::size_t n_shots = shadows.size();
  if (groups == 0 || n_shots < groups) {
    throw std::invalid_argument("need at least one shot per median-of-means group");
  }
  std::vector<double> means(groups);
  std::size_t begin = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t len = n_shots / groups + (g < n_shots % groups ? 1 : 0);
    double s = 0;
    for (std::size_t i = begin; i < begin + len; ++i) s += shadow_shot_value(shadows.samples[i], p);
    means[g] = s / static_cast<double>(len);
    begin += len;
  }
  std::sort(means.begin(), means.end());
  return groups % 2 ? means[groups / 2] : 0.5 * (means[groups / 2 - 1] + means[groups / 2]);
}

/// Σ c_j · estimate_pauli(P_j).
inline double estimate_observable(const ShadowSet& shadows, const PauliSum& observable,
                                  std::size_t groups = kDefaultShadowGroups) {
  double e = 0;
  for (const auto& t : observable.sorted_terms()) {
    e += t.coefficient * (t.string.is_identity() ? 1.0 : estimate_pauli(shadows, t.string, groups));
  }
  return e;
}

/// Feature Tr[ρ U†OU] from shadows of ρ: O is propagated exactly through the
/// trainable circuit U, then each resulting string is estimated.
inline double estimate_feature(const ShadowSet& shadows, const Circuit& trainable,
                               const PauliSum& observable,
                               std::size_t groups = kDefaultShadowGroups) {
  return estimate_observable(shadows, heisenberg_evolve(trainable, observable), groups);
}

/// Mean of ⊗_{q∈Λ} (3|b_q⟩⟨b_q| − Id) over all shots. Hermitian with unit trace
/// by construction but not necessarily positive. subsystem[0] is bit 0.
inline DensityMatrix estimate_rdm(const ShadowSet& shadows, const std::vector<std::size_t>& subsystem) {
  const std::size_t m = subsystem.size();
  if (m > 12) throw std::invalid_argument("shadow RDM limited to 12 qubits");
  for (std::size_t q : subsystem)
    if (q >= shadows.n) throw std::out_of_range("subsystem qubit outside the register");
  if (shadows.samples.empty()) throw std::invalid_argument("empty shadow set");
  // Count distinct (basis, outcome) patterns on Λ; each is a product operator.
  std::map<std::vector<int>, std::size_t> patterns;
  std::vector<int> key(m);
  for (const auto& s : shadows.samples) {
    for (std::size_t b = 0; b < m; ++b) {
      const std::size_t q = subsystem[b];
      key[b] = static_cast<int>(s.bases[q]) * 2 + (s.outcomes[q] > 0 ? 0 : 1);
    }
    ++patterns[key];
  }
  const std::size_t d = std::size_t{1} << m;
  ComplexMatrix acc(d);
  std::vector<std::array<cplx, 4>> factors(m);
  for (const auto& [pat, count] : patterns) {
    for (std::size_t b = 0; b < m; ++b) {
      // 3|b⟩⟨b| − Id = (Id + 3sP)/2 with s the ±1 outcome.
      const auto letter = static_cast<PauliLetter>(pat[b] / 2);
      const double s = pat[b] % 2 ? -1.5 : 1.5;
      std::array<cplx, 4> f{0.5, 0.0, 0.0, 0.5};  // row-major 2×2
      switch (letter) {
        case PauliLetter::X: f[1] += s; f[2] += s; break;
        case PauliLetter::Y: f[1] += cplx{0, -s}; f[2] += cplx{0, s}; break;
        case PauliLetter::Z: f[0] += s; f[3] -= s; break;
        default: break;
      }
      factors[b] = f;
    }
    const double w = static_cast<double>(count);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        cplx v = w;
        for (std::size_t b = 0; b < m && v != cplx{}; ++b) {
          v *= factors[b][(i >> b & 1U) * 2 + (j >> b & 1U)];
        }
        acc(i, j) += v;
      }
  }
  acc *= cplx{1.0 / static_cast<double>(shadows.size()), 0.0};
  return DensityMatrix(std::move(acc), 1e-12);
}

/// CSV: one row per shot, columns basis_0…basis_{n−1}, out_0…out_{n−1}.
inline std::vector<ReportRow> shadows_to_rows(const ShadowSet& set) {
  std::vector<ReportRow> rows;
  rows.reserve(set.size());
  for (const auto& s : set.samples) {
    ReportRow row;
    for (std::size_t q = 0; q < set.n; ++q)
      row.set("basis_" + std::to_string(q), Cell{std::string(1, to_char(s.bases[q]))});
    for (std::size_t q = 0; q < set.n; ++q) row.set("out_" + std::to_string(q), int{s.outcomes[q]});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ShadowSet shadows_from_rows(const std::vector<ReportRow>& rows, std::uint64_t seed = 0) {
  ShadowSet set;
  set.seed = seed;
  if (rows.empty()) return set;
  set.n = rows.front().cells().size() / 2;
  for (const auto& row : rows) {
    ShadowSample s;
    for (std::size_t q = 0; q < set.n; ++q) {
      const auto& b = std::get<std::string>(row.at("basis_" + std::to_string(q)));
      s.bases.push_back(PauliString::from_letters(b).get(0));
      const auto o = static_cast<int>(row.number("out_" + std::to_string(q)));
      if (o != 1 && o != -1) throw std::invalid_argument("shadow outcome must be ±1");
      s.outcomes.push_back(static_cast<std::int8_t>(o));
    }
    set.samples.push_back(std::move(s));
  }
  return set;
}

}  // namespace qgm
