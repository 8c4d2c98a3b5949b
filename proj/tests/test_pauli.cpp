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

#include "qgm/pauli.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dense_oracle.hpp"

using namespace qgm;
using qgm::testing::dense;

namespace {

PauliString P(const char* s) { return PauliString::from_letters(s); }

}  // namespace

TEST(PauliString, LettersRoundTripAndWeight) {
  const auto p = P("XZIIY");
  EXPECT_EQ(p.str(), "XZIIY");
  EXPECT_EQ(p.weight(), 3u);
  EXPECT_EQ(p.get(4), PauliLetter::Y);
  EXPECT_EQ(p.support(), (std::vector<std::size_t>{0, 1, 4}));
  EXPECT_THROW(P("XQ"), std::invalid_argument);
  EXPECT_THROW(PauliString(200), std::invalid_argument);
}

TEST(PauliString, ParsesSparseLabels) {
  EXPECT_EQ(parse_pauli(4, "Z0Z3").str(), "ZIIZ");
  EXPECT_EQ(parse_pauli(4, "X1 Y2").str(), "IXYI");
  EXPECT_EQ(parse_pauli(3, "ZIZ").str(), "ZIZ");
  EXPECT_EQ(parse_pauli(3, "I").str(), "III");
  EXPECT_EQ(sparse_label(P("IXIZ")), "X1Z3");
  EXPECT_THROW(parse_pauli(2, "Z5"), std::out_of_range);
  EXPECT_THROW(parse_pauli(2, "Z0Z0"), std::invalid_argument);
}

TEST(Multiply, SingleQubitIdentities) {
  const auto [ph, r] = multiply(P("X"), P("Z"));
  EXPECT_EQ(r.str(), "Y");
  EXPECT_EQ(ph.value(), (cplx{0, -1}));

  for (const char* s : {"I", "X", "Y", "Z", "XYZI"}) {
    const auto p = P(s);
    const auto [ph1, r1] = multiply(PauliString(p.num_qubits()), p);
    EXPECT_EQ(ph1.log_i, 0);
    EXPECT_EQ(r1, p);
    const auto [ph2, r2] = multiply(p, p);
    EXPECT_EQ(ph2.log_i, 0) << s;
    EXPECT_TRUE(r2.is_identity());
  }
}

TEST(Multiply, MatchesDenseProductOnAllTwoQubitPairs) {
  for (const auto& a : qgm::testing::all_strings(2)) {
    for (const auto& b : qgm::testing::all_strings(2)) {
      const auto [ph, r] = multiply(P(a.c_str()), P(b.c_str()));
      const ComplexMatrix expected = dense(a) * dense(b);
      const ComplexMatrix got = dense(r) * ph.value();
      EXPECT_LT(qgm::testing::max_abs_diff(expected, got), 1e-14) << a << "·" << b;
    }
  }
}

TEST(Multiply, MismatchedSizesRaiseDimensionError) {
  EXPECT_THROW(multiply(P("XX"), P("X")), DimensionError);
  EXPECT_THROW(commutes(P("XX"), P("X")), DimensionError);
}

TEST(Commutes, Examples) {
  EXPECT_FALSE(commutes(P("X"), P("Z")));
  EXPECT_TRUE(commutes(P("XX"), P("ZZ")));
  EXPECT_TRUE(commutes(P("XI"), P("IZ")));
}

TEST(Commutes, RandomSixQubitPairsMatchDenseCommutator) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const auto a = qgm::testing::random_letters(6, rng);
    const auto b = qgm::testing::random_letters(6, rng);
    const ComplexMatrix da = dense(a), db = dense(b);
    const bool dense_commutes = (da * db - db * da).frobenius_norm() < 1e-12;
    EXPECT_EQ(commutes(P(a.c_str()), P(b.c_str())), dense_commutes) << a << " " << b;
  }
}

TEST(ConjugateCz, StabilizerRules) {
  auto [s1, r1] = conjugate_cz(P("XI"), 0, 1);
  EXPECT_EQ(s1, 1);
  EXPECT_EQ(r1.str(), "XZ");
  auto [s2, r2] = conjugate_cz(P("ZI"), 0, 1);
  EXPECT_EQ(s2, 1);
  EXPECT_EQ(r2.str(), "ZI");
  auto [s3, r3] = conjugate_cz(P("XX"), 0, 1);
  EXPECT_EQ(s3, 1);
  EXPECT_EQ(r3.str(), "YY");
  EXPECT_THROW(conjugate_cz(P("XX"), 0, 0), std::invalid_argument);
}

TEST(ConjugateCz, MatchesDenseConjugationAndIsInvolution) {
  // CZ on qubits (0, 2) of three.
  ComplexMatrix cz = ComplexMatrix::identity(8);
  for (std::size_t k = 0; k < 8; ++k)
    if ((k & 1U) && (k & 4U)) cz(k, k) = -1;
  for (const auto& s : qgm::testing::all_strings(3)) {
    const auto p = P(s.c_str());
    const auto [sign, r] = conjugate_cz(p, 0, 2);
    const ComplexMatrix expected = cz * dense(s) * cz;
    EXPECT_LT(qgm::testing::max_abs_diff(expected, dense(r) * cplx(sign, 0)), 1e-14) << s;
    const auto [sign2, back] = conjugate_cz(r, 0, 2);
    EXPECT_EQ(back, p);
    EXPECT_EQ(sign * sign2, 1);
  }
}

TEST(ConjugateCz, DiagonalStringsAreFixedPoints) {
  for (const auto& s : qgm::testing::all_strings(3)) {
    if (s.find_first_of("XY") != std::string::npos) continue;
    const auto [sign, r] = conjugate_cz(P(s.c_str()), 1, 2);
    EXPECT_EQ(sign, 1);
    EXPECT_EQ(r.str(), s);
  }
}

TEST(ConjugateRotation, AnticommutingSplit) {
  const auto out = conjugate_rotation(PauliSum::single(P("Z")), PauliLetter::X, 0,
                                      std::numbers::pi / 8);
  ASSERT_EQ(out.size(), 2u);
  const auto& z = out.terms().at(P("Z"));
  const auto& y = out.terms().at(P("Y"));
  EXPECT_NEAR(z.coefficient, 0.7071067812, 1e-10);
  EXPECT_EQ(z.sine_count, 0);
  EXPECT_NEAR(y.coefficient, 0.7071067812, 1e-10);
  EXPECT_EQ(y.sine_count, 1);
}

TEST(ConjugateRotation, CommutingTermUnchanged) {
  for (double angle : {0.0, 0.3, 1.7}) {
    const auto out = conjugate_rotation(PauliSum::single(P("X")), PauliLetter::X, 0, angle);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_DOUBLE_EQ(out.coefficient(P("X")), 1.0);
  }
}

TEST(ConjugateRotation, RejectsIdentityGenerator) {
  EXPECT_THROW(conjugate_rotation(PauliSum::single(P("Z")), PauliLetter::I, 0, 0.1),
               UnsupportedGeneratorError);
  EXPECT_THROW(conjugate_rotation(PauliSum::single(P("ZZ")), PauliString(2), 0.1),
               UnsupportedGeneratorError);
}

TEST(ConjugateRotation, RandomSumMatchesDenseConjugation) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    PauliSum sum(4);
    for (int k = 0; k < 6; ++k) sum.add(P(qgm::testing::random_letters(4, rng).c_str()), g(rng), 0);
    const double angle = 0.3;
    const auto gen = PauliString::single(4, 2, PauliLetter::Y);
    const auto out = conjugate_rotation(sum, PauliLetter::Y, 2, angle);
    // U†OU with U = exp(-iγG).
    const ComplexMatrix u = qgm::testing::rotation(dense(gen), angle);
    const ComplexMatrix expected = u.adjoint() * dense(sum) * u;
    for (const auto& s : qgm::testing::all_strings(4)) {
      const cplx c = qgm::testing::pauli_coefficient(expected, s);
      EXPECT_NEAR(c.imag(), 0.0, 1e-12);
      EXPECT_NEAR(out.coefficient(P(s.c_str())), c.real(), 1e-12) << s;
    }
  }
}

TEST(ConjugateRotation, TwoQubitGeneratorMatchesDense) {
  std::mt19937_64 rng(8);
  const auto gen = P("IXXI");
  PauliSum sum(4);
  for (int k = 0; k < 5; ++k) sum.add(P(qgm::testing::random_letters(4, rng).c_str()), 0.5 + k, 0);
  const auto out = conjugate_rotation(sum, gen, -0.77);
  const ComplexMatrix u = qgm::testing::rotation(dense(gen), -0.77);
  const ComplexMatrix expected = u.adjoint() * dense(sum) * u;
  EXPECT_LT(qgm::testing::max_abs_diff(expected, dense(out)), 1e-12);
}

TEST(ConjugateRotation, PropertiesOverRandomGateSequences) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> qubit(0, 4), letter(1, 3), kind(0, 3);
  std::uniform_real_distribution<double> angle(-3, 3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 40; ++trial) {
    PauliSum sum(5);
    for (int k = 0; k < 3; ++k) sum.add(P(qgm::testing::random_letters(5, rng).c_str()), g(rng), 0);
    const double norm0 = sum.squared_norm();
    int rotations = 0;
    for (int step = 0; step < 12; ++step) {
      if (kind(rng) == 0) {
        const int a = qubit(rng);
        const int b = (a + 1 + qubit(rng) % 4) % 5;
        sum = conjugate_cz(sum, a, b);
      } else {
        const auto before = sum.size();
        const auto gen = PauliString::single(5, qubit(rng), static_cast<PauliLetter>(letter(rng)));
        std::size_t anticommuting = 0;
        for (const auto& [p, _] : sum.terms()) anticommuting += commutes(gen, p) ? 0 : 1;
        sum = conjugate_rotation(sum, gen, angle(rng));
        ++rotations;
        // Anticommuting P and iGP are distinct, so at most one new string each.
        EXPECT_LE(sum.size(), before + anticommuting);
      }
      EXPECT_NEAR(sum.squared_norm(), norm0, 1e-12);
      for (const auto& [_, t] : sum.terms()) {
        EXPECT_TRUE(std::isfinite(t.coefficient));
        EXPECT_LE(t.sine_count, rotations);
      }
    }
  }
}

TEST(ConjugateRotation, MergedSineCountIsMinimum) {
  PauliSum sum(1);
  sum.add(P("Z"), 1.0, 0);
  sum.add(P("Y"), 0.5, 4);
  // Rotating about X at π/8 sends Z → (Z + Y)/√2 and Y → (Y − Z)/√2.
  const auto out = conjugate_rotation(sum, PauliLetter::X, 0, std::numbers::pi / 8);
  EXPECT_EQ(out.terms().at(P("Y")).sine_count, 1);
  EXPECT_EQ(out.terms().at(P("Z")).sine_count, 0);
}

TEST(PauliSum, DropsNegligibleTerms) {
  PauliSum sum(2);
  sum.add(P("XX"), 1.0, 0);
  sum.add(P("XX"), -1.0 + 1e-16, 0);
  EXPECT_TRUE(sum.empty());
  EXPECT_THROW(sum.add(P("X"), 1.0, 0), DimensionError);
}

TEST(ExpectationZeroState, Examples) {
  EXPECT_DOUBLE_EQ(expectation_zero_state(PauliSum::single(P("Z"))), 1.0);
  EXPECT_DOUBLE_EQ(expectation_zero_state(PauliSum::single(P("X"))), 0.0);
  PauliSum s(2);
  s.add(P("ZZ"), 0.5, 0);
  s.add(P("XI"), 0.3, 0);
  EXPECT_DOUBLE_EQ(expectation_zero_state(s), 0.5);
}

TEST(ZSubstitute, Examples) {
  EXPECT_EQ(z_substitute(P("XYI")).str(), "ZZI");
  EXPECT_EQ(z_substitute(P("ZZ")).str(), "ZZ");
  EXPECT_EQ(z_substitute(P("III")).str(), "III");
}

TEST(PauliSum, JsonRoundTrip) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  PauliSum sum(7);
  for (int k = 0; k < 20; ++k) sum.add(P(qgm::testing::random_letters(7, rng).c_str()), g(rng), k % 4);
  const auto j = to_json(sum);
  EXPECT_EQ(j.at(0).size(), 3u);
  const auto back = pauli_sum_from_json(nlohmann::json::parse(j.dump()));
  ASSERT_EQ(back.size(), sum.size());
  for (const auto& [p, t] : sum.terms()) {
    EXPECT_EQ(back.terms().at(p).coefficient, t.coefficient);
    EXPECT_EQ(back.terms().at(p).sine_count, t.sine_count);
  }
}
