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

#include "qgm/propagation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qgm/propagation_benchmark.hpp"
#include "qgm/statevector.hpp"

using namespace qgm;

namespace {

Circuit model(std::size_t n, std::size_t layers, std::size_t depth, std::uint64_t seed,
              double tau2 = 0.2499) {
  auto c = build_generative({n, layers, 0.4, tau2, seed});
  if (depth > 0) c.append(build_trainable(n, depth, mix_seed(seed, 1)));
  return c;
}

PauliSum observable(std::size_t n, const std::string& text) {
  return PauliSum::single(parse_pauli(n, text));
}

double error_of(const Circuit& c, const PauliSum& o, const TruncationPolicy& p) {
  return std::abs(propagate(c, o, p).expectation - circuit_expectation(c, o));
}

}  // namespace

TEST(Propagate, IdentityCircuit) {
  PauliSum o(3);
  o.add(parse_pauli(3, "Z0Z2"), 0.7, 0);
  o.add(parse_pauli(3, "X1"), 0.3, 0);
  o.add(parse_pauli(3, "I"), -0.2, 0);
  const auto rep = propagate(Circuit(3), o, TruncationPolicy::exact_mode());
  EXPECT_DOUBLE_EQ(rep.expectation, expectation_zero_state(o));
  EXPECT_EQ(rep.dropped_mass, 0.0);
  EXPECT_EQ(rep.final_terms, 3u);
}

TEST(Propagate, SingleRotation) {
  for (double g : {0.0, 0.3, 1.1}) {
    Circuit c(1);
    c.add_layer(Layer{LayerKind::Rotation, {Gate{GateKind::RotX, {0, 0}, g}}});
    const auto rep = propagate(c, observable(1, "Z0"), TruncationPolicy::exact_mode());
    EXPECT_NEAR(rep.expectation, std::cos(2 * g), 1e-15);
    EXPECT_EQ(rep.rotations_processed, 1u);
    // Cutoff 0 drops the Y branch, which has zero expectation anyway.
    EXPECT_NEAR(propagate(c, observable(1, "Z0"), TruncationPolicy::sine(0)).expectation,
                std::cos(2 * g), 1e-15);
  }
}

TEST(Propagate, ExactModeMatchesStatevector) {
  const std::size_t n = 6;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = model(n, 2, 2, seed);
    for (const char* text : {"Z0", "X2Y3", "Z1Z4"}) {
      const auto o = observable(n, text);
      const auto rep = propagate(c, o, TruncationPolicy::exact_mode());
      EXPECT_NEAR(rep.expectation, circuit_expectation(c, o), 1e-9) << seed << " " << text;
      EXPECT_EQ(rep.dropped_mass, 0.0);
      EXPECT_EQ(rep.terms_per_step.size(), c.layers().size());
    }
  }
}

TEST(Propagate, ExactModeEquivalenceUpToTenQubits) {
  for (std::size_t n : {2u, 5u, 8u, 10u}) {
    const auto c = model(n, 2, 1, 100 + n);
    const auto o = observable(n, "Z" + std::to_string(n / 2));
    EXPECT_NEAR(propagate(c, o, TruncationPolicy::exact_mode()).expectation,
                circuit_expectation(c, o), 1e-9);
    EXPECT_NEAR(expectation_zero_state(heisenberg_evolve(c, o)), circuit_expectation(c, o), 1e-9);
  }
}

TEST(Propagate, ThetaOverride) {
  const auto c = model(5, 1, 2, 7);
  std::vector<double> t(c.theta().size(), 0.25);
  const auto o = observable(5, "Z2");
  EXPECT_NEAR(propagate(c, o, TruncationPolicy::exact_mode(), &t).expectation,
              circuit_expectation(c, o, &t), 1e-10);
  std::vector<double> bad(3);
  EXPECT_THROW(propagate(c, o, TruncationPolicy::exact_mode(), &bad), std::invalid_argument);
}

TEST(Propagate, ExactModeTermLimit) {
  const auto c = model(8, 2, 2, 3);
  try {
    propagate(c, observable(8, "Z4"), TruncationPolicy::exact_mode(4));
    FAIL() << "expected a resource-limit error";
  } catch (const PropagationLimitError& e) {
    EXPECT_GT(e.partial_report().peak_terms, 4u);
    EXPECT_FALSE(e.partial_report().terms_per_step.empty());
  }
}

TEST(Propagate, PolicyValidation) {
  TruncationPolicy none;
  EXPECT_THROW(none.validate(), std::invalid_argument);
  auto exact = TruncationPolicy::exact_mode();
  exact.base.sine_cutoff = 2;
  EXPECT_THROW(exact.validate(), std::invalid_argument);
  EXPECT_THROW(TruncationPolicy::sine(-1).validate(), std::invalid_argument);
  EXPECT_THROW(propagate(Circuit(2), observable(3, "Z0"), TruncationPolicy::sine(1)), DimensionError);
  EXPECT_EQ(TruncationPolicy::sine(3).id(), "sine3");
  EXPECT_EQ(TruncationPolicy::exact_mode().id(), "exact");
}

TEST(SineCutoffDefault, Examples) {
  EXPECT_EQ(sine_cutoff_default(8), 3);
  EXPECT_EQ(sine_cutoff_default(9), 4);
  EXPECT_EQ(sine_cutoff_default(1), 0);
  EXPECT_EQ(sine_cutoff_default(2), 1);
}

TEST(Truncation, DroppedMassBoundsError) {
  const std::size_t n = 7;
  std::vector<TruncationPolicy> policies{TruncationPolicy::sine(0), TruncationPolicy::sine(2)};
  TruncationPolicy coeff, weight, cap;
  coeff.base.coeff_threshold = 0.05;
  weight.base.weight_cutoff = 2;
  cap.base.max_terms = 10;
  policies.insert(policies.end(), {coeff, weight, cap});
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto c = model(n, 2, 2, seed);
    const auto o = observable(n, "Z3");
    const double exact = circuit_expectation(c, o);
    for (const auto& p : policies) {
      const auto rep = propagate(c, o, p);
      EXPECT_LE(std::abs(exact - rep.expectation), rep.dropped_mass + 1e-12) << p.id();
      if (p.base.max_terms) {
        EXPECT_LE(rep.final_terms, 10u);
      }
    }
  }
}

TEST(Truncation, TermCountBoundedByRotations) {
  // After r rotations at most 2^r strings can exist.
  const std::size_t n = 5;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Circuit c(n);
    Rng rng(seed);
    std::size_t rot = 0;
    for (int l = 0; l < 6; ++l) {
      // One nonzero angle per layer; zero angles spawn nothing.
      std::vector<Gate> gates;
      const auto kind = std::array{GateKind::RotX, GateKind::RotY, GateKind::RotZ}[rng() % 3];
      const std::size_t target = rng() % n;
      for (std::size_t q = 0; q < n; ++q)
        gates.push_back(Gate{kind, {q, q}, q == target ? 0.1 + 0.1 * l : 0.0});
      c.add_layer(Layer{LayerKind::Rotation, gates});
      ++rot;
      const std::size_t a = rng() % n, b = (a + 1 + rng() % (n - 1)) % n;
      c.add_layer(Layer{LayerKind::CZ, {Gate{GateKind::CZ, {a, b}}}});
      const auto rep = propagate(c, observable(n, "X0Y1"), TruncationPolicy::exact_mode());
      EXPECT_LE(rep.peak_terms, std::size_t{1} << rot);
      EXPECT_EQ(rep.rotations_processed, rot * n);
    }
  }
}

TEST(Truncation, TauZeroCircuitExactAtCutoffZero) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto c = model(6, 3, 0, seed, 0.0);
    const auto o = observable(6, "Z0Z1");
    EXPECT_NEAR(propagate(c, o, TruncationPolicy::sine(0)).expectation, circuit_expectation(c, o), 1e-12);
  }
}

// Loosening a single policy field must not raise the mean error; checked as a
// one-sided paired test at 95% confidence over 100 seeds.
TEST(Truncation, LooseningNeverHurtsOnAverage) {
  const std::size_t n = 6;
  TruncationPolicy c_tight, c_loose, w_tight, w_loose, m_tight, m_loose;
  c_tight.base.coeff_threshold = 0.05;
  c_loose.base.coeff_threshold = 0.005;
  w_tight.base.weight_cutoff = 1;
  w_loose.base.weight_cutoff = 3;
  m_tight.base.max_terms = 4;
  m_loose.base.max_terms = 32;
  const std::vector<std::pair<TruncationPolicy, TruncationPolicy>> pairs{
      {TruncationPolicy::sine(0), TruncationPolicy::sine(2)},
      {c_tight, c_loose}, {w_tight, w_loose}, {m_tight, m_loose}};
  for (const auto& [tight, loose] : pairs) {
    double sum = 0, sum2 = 0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
      const auto c = model(n, 2, 1, 1000 + s);
      const auto o = observable(n, "Z2");
      const double d = error_of(c, o, loose) - error_of(c, o, tight);
      sum += d;
      sum2 += d * d;
    }
    const double mean = sum / seeds;
    const double se = std::sqrt(std::max(0.0, sum2 / seeds - mean * mean) / (seeds - 1));
    EXPECT_LE(mean, 1.645 * se + 1e-12) << tight.id() << " vs " << loose.id();
  }
}

TEST(Schedule, OverrideAppliesFromKeyOnward) {
  TruncationPolicy p = TruncationPolicy::sine(0);
  p.schedule[5].sine_cutoff = 9;
  EXPECT_EQ(*p.rule_at(0).sine_cutoff, 0);
  EXPECT_EQ(*p.rule_at(4).sine_cutoff, 0);
  EXPECT_EQ(*p.rule_at(5).sine_cutoff, 9);
  EXPECT_EQ(*p.rule_at(500).sine_cutoff, 9);
  EXPECT_EQ(p.id(), "sine0@5:sine9");

  const auto c = model(6, 2, 1, 4);
  const auto o = observable(6, "Z1");
  TruncationPolicy from_start = TruncationPolicy::sine(0);
  from_start.schedule[0].sine_cutoff = 4;
  EXPECT_DOUBLE_EQ(propagate(c, o, from_start).expectation,
                   propagate(c, o, TruncationPolicy::sine(4)).expectation);
  TruncationPolicy never = TruncationPolicy::sine(1);
  never.schedule[1000000].sine_cutoff = 4;
  EXPECT_DOUBLE_EQ(propagate(c, o, never).expectation,
                   propagate(c, o, TruncationPolicy::sine(1)).expectation);
}

TEST(Benchmark, ExactRowsAgreeWithStatevector) {
  BenchmarkTemplate tpl;
  tpl.trainable_depth = 2;
  tpl.timing = false;
  const auto rows = benchmark_propagation({4, 6, 8}, tpl,
                                          [](std::size_t) { return TruncationPolicy::exact_mode(); },
                                          3, 42);
  ASSERT_EQ(rows.size(), 9u);
  for (const auto& r : rows) {
    EXPECT_LT(r.number("error_vs_exact"), 1e-9);
    EXPECT_TRUE(std::holds_alternative<std::monostate>(r.at("wall_time_s")));
    EXPECT_EQ(std::get<std::string>(r.at("policy_id")), "exact");
  }
  EXPECT_EQ(to_csv(rows), to_csv(benchmark_propagation(
                              {4, 6, 8}, tpl, [](std::size_t) { return TruncationPolicy::exact_mode(); }, 3, 42, 3)));
  const auto summary = summarize_benchmark(rows);
  ASSERT_EQ(summary.size(), 3u);
  EXPECT_EQ(summary[0].number("trials"), 3);
}

TEST(Benchmark, ErrorColumnNullAboveExactLimit) {
  BenchmarkTemplate tpl;
  tpl.exact_max_n = 5;
  const auto rows = benchmark_propagation({4, 6}, tpl, [](std::size_t n) {
    return TruncationPolicy::sine(sine_cutoff_default(n));
  }, 1, 1);
  EXPECT_FALSE(std::holds_alternative<std::monostate>(rows[0].at("error_vs_exact")));
  EXPECT_TRUE(std::holds_alternative<std::monostate>(rows[1].at("error_vs_exact")));
  EXPECT_GE(rows[1].number("wall_time_s"), 0.0);
}
