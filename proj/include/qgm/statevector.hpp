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
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qgm/circuit.hpp"
#include "qgm/density_matrix.hpp"
#include "qgm/linalg.hpp"
#include "qgm/pauli.hpp"
#include "qgm/rng.hpp"

namespace qgm {

/// Dense state on n qubits; qubit q is bit q of the amplitude index.
class StateVector {
 public:
  static constexpr std::size_t kMaxQubits = 24;

  StateVector() : StateVector(0) {}

  /// |0…0⟩.
  explicit StateVector(std::size_t n) : n_(n) {
    if (n > kMaxQubits) {
      throw std::invalid_argument("state vector limited to " + std::to_string(kMaxQubits) +
                                  " qubits, got " + std::to_string(n));
    }
    amps_.assign(std::size_t{1} << n, cplx{});
    amps_[0] = 1.0;
  }

  StateVector(std::size_t n, std::vector<cplx> amplitudes) : n_(n), amps_(std::move(amplitudes)) {
    if (amps_.size() != (std::size_t{1} << n)) {
      throw std::invalid_argument("amplitude count does not match 2^n");
    }
  }

  std::size_t num_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  std::vector<cplx>& amplitudes() { return amps_; }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  cplx& operator[](std::size_t i) { return amps_[i]; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const {
    double s = 0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

 private:
  std::size_t n_;
  std::vector<cplx> amps_;
};

namespace detail {

inline std::uint64_t low_mask(const std::array<std::uint64_t, PauliString::kWords>& w,
                              std::size_t n) {
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] != 0) throw std::out_of_range("Pauli string reaches beyond the state vector");
  }
  return n == 64 ? w[0] : (w[0] & ((std::uint64_t{1} << n) - 1));
}

/// 2×2 unitary on one qubit.
inline void apply_1q(StateVector& s, std::size_t q, cplx m00, cplx m01, cplx m10, cplx m11) {
  const std::size_t stride = std::size_t{1} << q;
  auto& a = s.amplitudes();
  for (std::size_t base = 0; base < a.size(); base += 2 * stride) {
    for (std::size_t k = base; k < base + stride; ++k) {
      const cplx a0 = a[k], a1 = a[k + stride];
      a[k] = m00 * a0 + m01 * a1;
      a[k + stride] = m10 * a0 + m11 * a1;
    }
  }
}

}  // namespace detail

/// ψ ← exp(-iγP)ψ = cos γ ψ − i sin γ Pψ for an arbitrary Pauli string P.
/// P|k⟩ = i^{#Y} (−1)^{|z∧k|} |k⊕x⟩.
inline void apply_pauli_rotation(StateVector& s, const PauliString& p, double angle) {
  const std::uint64_t x = detail::low_mask(p.x_words(), s.num_qubits());
  const std::uint64_t z = detail::low_mask(p.z_words(), s.num_qubits());
  const cplx iy = Phase{static_cast<std::uint8_t>(std::popcount(x & z) & 3)}.value();
  const double c = std::cos(angle), sn = std::sin(angle);
  const cplx mis{0.0, -sn};
  auto& a = s.amplitudes();
  const auto sign = [z](std::uint64_t k) { return (std::popcount(z & k) & 1) ? -1.0 : 1.0; };
  if (x == 0) {
    const cplx plus = std::polar(1.0, -angle), minus = std::polar(1.0, angle);
    for (std::size_t k = 0; k < a.size(); ++k) a[k] *= sign(k) > 0 ? plus : minus;
    return;
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    const std::size_t j = k ^ x;
    if (j < k) continue;
    const cplx ak = a[k], aj = a[j];
    // (Pψ)[j] = iy·sign(k)·ψ[k], (Pψ)[k] = iy·sign(j)·ψ[j]
    a[j] = c * aj + mis * iy * sign(k) * ak;
    a[k] = c * ak + mis * iy * sign(j) * aj;
  }
}

/// Applies one gate with an explicit angle (ignored for CZ).
inline void apply_gate(StateVector& s, const Gate& g, double angle) {
  const std::size_t q = g.qubits[0];
  if (q >= s.num_qubits() || (g.arity() == 2 && g.qubits[1] >= s.num_qubits())) {
    throw std::out_of_range("gate qubit outside the state vector");
  }
  const double c = std::cos(angle), sn = std::sin(angle);
  switch (g.kind) {
    case GateKind::RotX:
      detail::apply_1q(s, q, c, {0, -sn}, {0, -sn}, c);
      return;
    case GateKind::RotY:
      detail::apply_1q(s, q, c, -sn, sn, c);
      return;
    case GateKind::RotZ:
      detail::apply_1q(s, q, std::polar(1.0, -angle), 0, 0, std::polar(1.0, angle));
      return;
    case GateKind::CZ: {
      const std::size_t mask = (std::size_t{1} << g.qubits[0]) | (std::size_t{1} << g.qubits[1]);
      auto& a = s.amplitudes();
      for (std::size_t k = 0; k < a.size(); ++k)
        if ((k & mask) == mask) a[k] = -a[k];
      return;
    }
    case GateKind::RotXX:
    case GateKind::RotYY:
    case GateKind::RotZZ:
      apply_pauli_rotation(s, g.generator(s.num_qubits()), angle);
      return;
  }
}

inline void apply_gate(StateVector& s, const Gate& g) { apply_gate(s, g, g.angle); }

/// Applies every layer of `circuit` in order, reading trainable angles from
/// `theta` when given (else from the circuit).
inline void apply_circuit(StateVector& s, const Circuit& circuit,
                          const std::vector<double>* theta = nullptr) {
  if (theta && theta->size() != circuit.theta().size()) {
    throw std::invalid_argument("θ override has the wrong length");
  }
  for (const auto& layer : circuit.layers()) {
    for (const auto& g : layer.gates) {
      const double angle = g.param_id ? (theta ? (*theta)[*g.param_id] : circuit.theta()[*g.param_id])
                                      : g.angle;
      apply_gate(s, g, angle);
    }
  }
}

/// Runs `circuit` on |0…0⟩.
inline StateVector run(const Circuit& circuit, const std::vector<double>* theta = nullptr) {
  StateVector s(circuit.num_qubits());
  apply_circuit(s, circuit, theta);
  return s;
}

/// ⟨ψ|P|ψ⟩ = Σ_k conj(ψ[k⊕x]) i^{#Y} (−1)^{|z∧k|} ψ[k].
inline double expectation(const StateVector& s, const PauliString& p) {
  if (p.num_qubits() != s.num_qubits()) throw DimensionError("observable and state sizes differ");
  const std::uint64_t x = detail::low_mask(p.x_words(), s.num_qubits());
  const std::uint64_t z = detail::low_mask(p.z_words(), s.num_qubits());
  const auto& a = s.amplitudes();
  cplx acc = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const cplx v = std::conj(a[k ^ x]) * a[k];
    acc += (std::popcount(z & k) & 1) ? -v : v;
  }
  acc *= Phase{static_cast<std::uint8_t>(std::popcount(x & z) & 3)}.value();
  return acc.real();
}

inline double expectation(const StateVector& s, const PauliSum& sum) {
  double e = 0;
  for (const auto& t : sum.sorted_terms()) e += t.coefficient * expectation(s, t.string);
  return e;
}

/// Partial trace onto `subsystem`; subsystem[0] becomes bit 0 of the local index.
inline DensityMatrix reduced_density_matrix(const StateVector& s,
                                            const std::vector<std::size_t>& subsystem) {
  const std::size_t m = subsystem.size();
  if (m > 12) throw std::invalid_argument("reduced density matrix limited to 12 qubits");
  std::uint64_t sub_mask = 0;
  for (std::size_t q : subsystem) {
    if (q >= s.num_qubits()) throw std::out_of_range("subsystem qubit outside the register");
    if (sub_mask >> q & 1U) throw std::invalid_argument("repeated qubit in subsystem");
    sub_mask |= std::uint64_t{1} << q;
  }
  const std::size_t d = std::size_t{1} << m;
  const std::vector<std::uint64_t> rest = [&] {
    std::vector<std::uint64_t> r;
    const std::uint64_t full = (std::uint64_t{1} << s.num_qubits()) - 1;
    const std::uint64_t env = full & ~sub_mask;
    // enumerate all submasks of env
    std::uint64_t e = 0;
    do {
      r.push_back(e);
      e = (e - env) & env;
    } while (e != 0);
    return r;
  }();
  std::vector<std::uint64_t> local(d, 0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t b = 0; b < m; ++b)
      if (i >> b & 1U) local[i] |= std::uint64_t{1} << subsystem[b];

  ComplexMatrix rho(d);
  std::vector<cplx> v(d);
  const auto& a = s.amplitudes();
  for (std::uint64_t r : rest) {
    for (std::size_t i = 0; i < d; ++i) v[i] = a[r | local[i]];
    for (std::size_t i = 0; i < d; ++i) {
      if (v[i] == cplx{}) continue;
      for (std::size_t j = 0; j < d; ++j) rho(i, j) += v[i] * std::conj(v[j]);
    }
  }
  return DensityMatrix(std::move(rho));
}

/// f(θ) = ⟨0|U(θ)† O U(θ)|0⟩ evaluated on the statevector.
inline double circuit_expectation(const Circuit& circuit, const PauliSum& observable,
                                  const std::vector<double>* theta = nullptr) {
  return expectation(run(circuit, theta), observable);
}

/// ∂f/∂θ_ν = f(θ_ν + π/4) − f(θ_ν − π/4), exact for exp(-iθP) gates.
inline double parameter_shift_gradient(const Circuit& circuit, std::size_t param,
                                       const PauliSum& observable) {
  if (param >= circuit.theta().size()) {
    throw std::out_of_range("parameter index " + std::to_string(param) + " out of range");
  }
  std::vector<double> theta = circuit.theta();
  theta[param] += std::numbers::pi / 4;
  const double plus = circuit_expectation(circuit, observable, &theta);
  theta[param] -= std::numbers::pi / 2;
  const double minus = circuit_expectation(circuit, observable, &theta);
  return plus - minus;
}

/// Samples a basis index by inverse CDF over |ψ_k|².
inline std::size_t sample_index(const StateVector& s, Rng& rng) {
  const double u = uniform01(rng) * s.norm_squared();
  double acc = 0;
  const auto& a = s.amplitudes();
  for (std::size_t k = 0; k < a.size(); ++k) {
    acc += std::norm(a[k]);
    if (u < acc) return k;
  }
  // Rounding can leave u just above the final partial sum.
  for (std::size_t k = a.size(); k-- > 0;)
    if (std::norm(a[k]) > 0) return k;
  return 0;
}

/// Debug dump: [[re, im], ...].
inline nlohmann::json to_json(const StateVector& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& a : s.amplitudes()) arr.push_back({a.real(), a.imag()});
  return arr;
}

}  // namespace qgm
