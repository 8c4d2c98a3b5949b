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
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <absl/container/flat_hash_map.h>
#include <utility>
#include <vector>

#include "json.hpp"

namespace qgm {

/// Raised when two operands act on different qubit counts.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a rotation is requested about something that is not a
/// non-identity Pauli string.
class UnsupportedGeneratorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char to_char(PauliLetter p) { return "IXYZ"[static_cast<int>(p)]; }

/// Phase i^k, k in {0,1,2,3}.
struct Phase {
  std::uint8_t log_i = 0;

  std::complex<double> value() const {
    constexpr std::array<std::complex<double>, 4> table{
        std::complex<double>{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[log_i & 3];
  }
  friend bool operator==(Phase, Phase) = default;
};

/// A Pauli operator without phase, encoded as X and Z bit masks.
/// Letter per qubit: (x,z) = (0,0) I, (1,0) X, (1,1) Y, (0,1) Z.
/// Supports up to kMaxQubits qubits; qubit q lives in word q / 64, bit q % 64.
class PauliString {
 public:
  static constexpr std::size_t kWords = 2;
  static constexpr std::size_t kMaxQubits = 64 * kWords;

  PauliString() = default;

  /// Identity on n qubits.
  explicit PauliString(std::size_t n) : n_(static_cast<std::uint32_t>(n)) {
    if (n > kMaxQubits) {
      throw std::invalid_argument("PauliString supports at most " +
                                  std::to_string(kMaxQubits) + " qubits, got " +
                                  std::to_string(n));
    }
  }

  /// Parses a letter string, qubit 0 leftmost, e.g. "XZIIY".
  static PauliString from_letters(std::string_view letters) {
    PauliString p(letters.size());
    for (std::size_t q = 0; q < letters.size(); ++q) {
      switch (letters[q]) {
        case 'I': case '_': break;
        case 'X': p.set(q, PauliLetter::X); break;
        case 'Y': p.set(q, PauliLetter::Y); break;
        case 'Z': p.set(q, PauliLetter::Z); break;
        default:
          throw std::invalid_argument("invalid Pauli letter '" +
                                      std::string(1, letters[q]) + "' in \"" +
                                      std::string(letters) + "\"");
      }
    }
    return p;
  }

  /// Single-letter operator `letter` on `qubit`, identity elsewhere.
  static PauliString single(std::size_t n, std::size_t qubit, PauliLetter letter) {
    PauliString p(n);
    p.set(qubit, letter);
    return p;
  }

  std::size_t num_qubits() const { return n_; }

  PauliLetter get(std::size_t q) const {
    check_qubit(q);
    const unsigned x = (x_[q / 64] >> (q % 64)) & 1U;
    const unsigned z = (z_[q / 64] >> (q % 64)) & 1U;
    if (x && z) return PauliLetter::Y;
    if (x) return PauliLetter::X;
    if (z) return PauliLetter::Z;
    return PauliLetter::I;
  }

  void set(std::size_t q, PauliLetter letter) {
    check_qubit(q);
    const std::uint64_t bit = std::uint64_t{1} << (q % 64);
    const auto v = static_cast<unsigned>(letter);
    const bool x = v == 1 || v == 2;
    const bool z = v == 2 || v == 3;
    x_[q / 64] = x ? (x_[q / 64] | bit) : (x_[q / 64] & ~bit);
    z_[q / 64] = z ? (z_[q / 64] | bit) : (z_[q / 64] & ~bit);
  }

  bool x_bit(std::size_t q) const { return (x_[q / 64] >> (q % 64)) & 1U; }
  bool z_bit(std::size_t q) const { return (z_[q / 64] >> (q % 64)) & 1U; }
  void flip_z(std::size_t q) { z_[q / 64] ^= std::uint64_t{1} << (q % 64); }

  const std::array<std::uint64_t, kWords>& x_words() const { return x_; }
  const std::array<std::uint64_t, kWords>& z_words() const { return z_; }

  /// Number of non-identity letters.
  std::size_t weight() const {
    std::size_t w = 0;
    for (std::size_t i = 0; i < kWords; ++i) w += std::popcount(x_[i] | z_[i]);
    return w;
  }

  bool is_identity() const { return weight() == 0; }

  /// True iff every letter is I or Z.
  bool is_diagonal() const {
    for (std::size_t i = 0; i < kWords; ++i) {
      if (x_[i] != 0) return false;
    }
    return true;
  }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < n_; ++q) {
      if (x_bit(q) || z_bit(q)) out.push_back(q);
    }
    return out;
  }

  std::string str() const {
    std::string s(n_, 'I');
    for (std::size_t q = 0; q < n_; ++q) s[q] = to_char(get(q));
    return s;
  }

  std::size_t hash() const noexcept {
    std::uint64_t h = n_;
    for (std::size_t i = 0; i < kWords; ++i) {
      h = (h ^ x_[i]) * 0x9E3779B97F4A7C15ULL;
      h = (h ^ z_[i]) * 0xC2B2AE3D27D4EB4FULL;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;

  /// Deterministic total order, used for tie-breaking and stable output.
  friend bool operator<(const PauliString& a, const PauliString& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    for (std::size_t i = kWords; i-- > 0;) {
      if (a.x_[i] != b.x_[i]) return a.x_[i] < b.x_[i];
      if (a.z_[i] != b.z_[i]) return a.z_[i] < b.z_[i];
    }
    return false;
  }

 private:
  friend std::pair<Phase, PauliString> multiply(const PauliString&, const PauliString&);
  friend bool commutes(const PauliString&, const PauliString&);

  void check_qubit(std::size_t q) const {
    if (q >= n_) {
      throw std::out_of_range("qubit " + std::to_string(q) + " out of range for " +
                              std::to_string(n_) + "-qubit Pauli string");
    }
  }

  std::uint32_t n_ = 0;
  std::array<std::uint64_t, kWords> x_{};
  std::array<std::uint64_t, kWords> z_{};
};

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const noexcept { return p.hash(); }
};

namespace detail {
/// Sum of the values in ascending order, so the result does not depend on
/// hash-table iteration order.
inline double ordered_sum(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  double s = 0;
  for (double v : values) s += v;
  return s;
}

inline void require_same_size(const PauliString& a, const PauliString& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw DimensionError("Pauli strings act on " + std::to_string(a.num_qubits()) +
                         " and " + std::to_string(b.num_qubits()) + " qubits");
  }
}
}  // namespace detail

/// Anticommuting sites have an even count iff the strings commute.
inline bool commutes(const PauliString& p, const PauliString& q) {
  detail::require_same_size(p, q);
  unsigned parity = 0;
  for (std::size_t i = 0; i < PauliString::kWords; ++i) {
    parity ^= std::popcount((p.x_[i] & q.z_[i]) ^ (p.z_[i] & q.x_[i])) & 1U;
  }
  return parity == 0;
}

/// Returns (phase, R) with P·Q = phase·R.
///
/// Writing each letter as i^{xz} X^x Z^z, the product picks up i^{x1 z1 + x2 z2
/// - x3 z3} from re-normalizing Y factors and (-1)^{z1 x2} from commuting Z^z1
/// past X^x2. Counted bitwise over all qubits.
inline std::pair<Phase, PauliString> multiply(const PauliString& p, const PauliString& q) {
  detail::require_same_size(p, q);
  PauliString r(p.num_qubits());
  int log_i = 0;
  for (std::size_t i = 0; i < PauliString::kWords; ++i) {
    const std::uint64_t x1 = p.x_[i], z1 = p.z_[i], x2 = q.x_[i], z2 = q.z_[i];
    const std::uint64_t x3 = x1 ^ x2, z3 = z1 ^ z2;
    r.x_[i] = x3;
    r.z_[i] = z3;
    log_i += std::popcount(x1 & z1) + std::popcount(x2 & z2) - std::popcount(x3 & z3);
    log_i += 2 * std::popcount(z1 & x2);
  }
  return {Phase{static_cast<std::uint8_t>(((log_i % 4) + 4) % 4)}, r};
}

/// Replaces every non-identity letter by Z, keeping the support.
inline PauliString z_substitute(const PauliString& p) {
  PauliString out(p.num_qubits());
  for (std::size_t q = 0; q < p.num_qubits(); ++q) {
    if (p.get(q) != PauliLetter::I) out.set(q, PauliLetter::Z);
  }
  return out;
}

/// CZ_ab · P · CZ_ab. X_a picks up Z_b and vice versa; the sign flips exactly
/// when both sites carry X components and exactly one carries a Z component.
inline std::pair<int, PauliString> conjugate_cz(const PauliString& p, std::size_t a,
                                                std::size_t b) {
  if (a >= p.num_qubits() || b >= p.num_qubits() || a == b) {
    throw std::invalid_argument("CZ needs two distinct qubits inside the register, got (" +
                                std::to_string(a) + "," + std::to_string(b) + ")");
  }
  const bool xa = p.x_bit(a), xb = p.x_bit(b), za = p.z_bit(a), zb = p.z_bit(b);
  PauliString out = p;
  if (xb) out.flip_z(a);
  if (xa) out.flip_z(b);
  const int sign = (xa && xb && (za != zb)) ? -1 : 1;
  return {sign, out};
}

/// One term of a Pauli sum. `sine_count` counts the sine branches this term
/// descends from during propagation.
struct PauliTerm {
  double coefficient = 0.0;
  PauliString string;
  int sine_count = 0;
};

/// Real linear combination of Pauli strings with one entry per distinct string.
class PauliSum {
 public:
  static constexpr double kDropThreshold = 1e-15;
  using Map = absl::flat_hash_map<PauliString, PauliTerm, PauliStringHash>;

  PauliSum() = default;
  explicit PauliSum(std::size_t n) : n_(n) {}

  static PauliSum single(const PauliString& p, double coefficient = 1.0) {
    PauliSum s(p.num_qubits());
    s.add(p, coefficient, 0);
    return s;
  }

  std::size_t num_qubits() const { return n_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const Map& terms() const { return terms_; }
  Map& mutable_terms() { return terms_; }
  void reserve(std::size_t n) { terms_.reserve(n); }

  /// Adds a term, merging with an existing string. The merged sine count is
  /// the minimum of the two. Terms falling under kDropThreshold are erased.
  void add(const PauliString& p, double coefficient, int sine_count) {
    if (p.num_qubits() != n_) {
      throw DimensionError("term on " + std::to_string(p.num_qubits()) +
                           " qubits added to a " + std::to_string(n_) + "-qubit sum");
    }
    auto [it, inserted] = terms_.try_emplace(p, PauliTerm{coefficient, p, sine_count});
    if (!inserted) {
      it->second.coefficient += coefficient;
      it->second.sine_count = std::min(it->second.sine_count, sine_count);
    }
    if (std::abs(it->second.coefficient) < kDropThreshold) terms_.erase(it);
  }

  double coefficient(const PauliString& p) const {
    const auto it = terms_.find(p);
    return it == terms_.end() ? 0.0 : it->second.coefficient;
  }

  /// Σ|c|², the squared norm in the normalized Hilbert–Schmidt inner product.
  double squared_norm() const {
    std::vector<double> sq;
    sq.reserve(terms_.size());
    for (const auto& [_, t] : terms_) sq.push_back(t.coefficient * t.coefficient);
    return detail::ordered_sum(sq);
  }

  /// Terms sorted by string, for stable iteration and serialization.
  std::vector<PauliTerm> sorted_terms() const {
    std::vector<PauliTerm> out;
    out.reserve(terms_.size());
    for (const auto& [_, t] : terms_) out.push_back(t);
    std::sort(out.begin(), out.end(),
              [](const PauliTerm& a, const PauliTerm& b) { return a.string < b.string; });
    return out;
  }

 private:
  std::size_t n_ = 0;
  Map terms_;
};

namespace detail {

/// In-place rotation step: anticommuting terms are scaled by cos(2γ) and
/// spawn sin(2γ)·(iGP) with one more sine factor. Anticommuting strings pair
/// up as P ↔ GP; when both are present the pair is updated in place.
inline void rotate_in_place(PauliSum& sum, const PauliString& generator, double angle,
                            std::vector<PauliTerm>& spawn) {
  const double c = std::cos(2 * angle), s = std::sin(2 * angle);
  const auto branch = [&](const PauliString& p) {
    const auto [phase, gp] = multiply(generator, p);
    return std::pair{phase.log_i == 1 ? -s : s, gp};
  };
  spawn.clear();
  std::vector<PauliString> dead;
  auto& terms = sum.mutable_terms();
  for (auto& [p, term] : terms) {
    if (commutes(generator, p)) continue;
    const auto [sp, gp] = branch(p);
    const auto it = terms.find(gp);
    if (it == terms.end()) {
      spawn.push_back(PauliTerm{sp * term.coefficient, gp, term.sine_count + 1});
      term.coefficient *= c;
      if (std::abs(term.coefficient) < PauliSum::kDropThreshold) dead.push_back(p);
    } else if (p < gp) {
      PauliTerm& q = it->second;
      const double sq = branch(gp).first;
      const double cp = term.coefficient, cq = q.coefficient;
      const int np = term.sine_count, nq = q.sine_count;
      term.coefficient = c * cp + sq * cq;
      q.coefficient = c * cq + sp * cp;
      term.sine_count = std::min(np, nq + 1);
      q.sine_count = std::min(nq, np + 1);
      if (std::abs(term.coefficient) < PauliSum::kDropThreshold) dead.push_back(p);
      if (std::abs(q.coefficient) < PauliSum::kDropThreshold) dead.push_back(gp);
    }
  }
  for (const auto& p : dead) terms.erase(p);
  for (auto& t : spawn) {
    if (std::abs(t.coefficient) >= PauliSum::kDropThreshold) terms.emplace(t.string, std::move(t));
  }
}

}  // namespace detail

/// U† O U for U = exp(-iγG), G a non-identity Pauli string. Terms commuting
/// with G pass through; anticommuting P becomes cos(2γ)P + sin(2γ)(iGP), and
/// the sine branch carries sine_count + 1.
inline PauliSum conjugate_rotation(const PauliSum& sum, const PauliString& generator,
                                   double angle) {
  if (generator.num_qubits() != sum.num_qubits()) {
    throw DimensionError("generator and Pauli sum act on different qubit counts");
  }
  if (generator.is_identity()) {
    throw UnsupportedGeneratorError("rotation generator must be a non-identity Pauli string");
  }
  PauliSum out = sum;
  std::vector<PauliTerm> spawn;
  detail::rotate_in_place(out, generator, angle, spawn);
  return out;
}

/// Single-qubit convenience overload.
inline PauliSum conjugate_rotation(const PauliSum& sum, PauliLetter generator,
                                   std::size_t qubit, double angle) {
  if (generator == PauliLetter::I) {
    throw UnsupportedGeneratorError("rotation generator must be X, Y or Z");
  }
  return conjugate_rotation(sum, PauliString::single(sum.num_qubits(), qubit, generator),
                            angle);
}

/// CZ conjugation of a whole sum.
inline PauliSum conjugate_cz(const PauliSum& sum, std::size_t a, std::size_t b) {
  PauliSum out(sum.num_qubits());
  out.reserve(sum.size());
  for (const auto& [p, term] : sum.terms()) {
    const auto [sign, q] = conjugate_cz(p, a, b);
    out.add(q, sign * term.coefficient, term.sine_count);
  }
  return out;
}

/// ⟨0…0|O|0…0⟩: only strings in {I,Z}^n contribute, each with +1.
inline double expectation_zero_state(const PauliSum& sum) {
  std::vector<double> diag;
  for (const auto& [p, term] : sum.terms()) {
    if (p.is_diagonal()) diag.push_back(term.coefficient);
  }
  return detail::ordered_sum(diag);
}

/// Parses either a full letter string of length n ("ZIIZ") or sparse
/// letter-index tokens ("Z0Z3", "Z0 Z3", "X2*Y5"). "I" is the identity.
inline PauliString parse_pauli(std::size_t n, std::string_view text) {
  const bool dense = text.size() == n &&
                     text.find_first_not_of("IXYZ") == std::string_view::npos;
  if (dense) return PauliString::from_letters(text);
  PauliString p(n);
  if (text == "I") return p;
  std::size_t i = 0;
  while (i < text.size()) {
    const char ch = text[i];
    if (ch == ' ' || ch == '*') {
      ++i;
      continue;
    }
    PauliLetter letter;
    switch (ch) {
      case 'X': letter = PauliLetter::X; break;
      case 'Y': letter = PauliLetter::Y; break;
      case 'Z': letter = PauliLetter::Z; break;
      default:
        throw std::invalid_argument("cannot parse Pauli \"" + std::string(text) + "\"");
    }
    std::size_t j = ++i;
    while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
    if (j == i) throw std::invalid_argument("missing qubit index in \"" + std::string(text) + "\"");
    const std::size_t q = std::stoul(std::string(text.substr(i, j - i)));
    if (q >= n) {
      throw std::out_of_range("qubit " + std::to_string(q) + " outside " + std::to_string(n) +
                              "-qubit register in \"" + std::string(text) + "\"");
    }
    if (p.get(q) != PauliLetter::I) {
      throw std::invalid_argument("qubit repeated in \"" + std::string(text) + "\"");
    }
    p.set(q, letter);
    i = j;
  }
  return p;
}

/// Sparse label, e.g. "Z0Z1"; "I" for the identity.
inline std::string sparse_label(const PauliString& p) {
  std::string s;
  for (std::size_t q : p.support()) s += to_char(p.get(q)) + std::to_string(q);
  return s.empty() ? "I" : s;
}

// Serialization: [{"coeff": c, "pauli": "XZI", "sines": k}, ...] sorted by string.

inline nlohmann::json to_json(const PauliSum& sum) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : sum.sorted_terms()) {
    arr.push_back({{"coeff", t.coefficient}, {"pauli", t.string.str()}, {"sines", t.sine_count}});
  }
  return arr;
}

inline PauliSum pauli_sum_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument("Pauli sum JSON must be a non-empty array");
  }
  const auto first = PauliString::from_letters(j.at(0).at("pauli").get<std::string>());
  PauliSum sum(first.num_qubits());
  for (const auto& e : j) {
    const auto p = PauliString::from_letters(e.at("pauli").get<std::string>());
    sum.add(p, e.at("coeff").get<double>(), e.value("sines", 0));
  }
  return sum;
}

}  // namespace qgm
