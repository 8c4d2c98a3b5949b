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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qgm/circuit.hpp"
#include "qgm/parallel.hpp"
#include "qgm/propagation.hpp"
#include "qgm/report.hpp"
#include "qgm/rng.hpp"
#include "qgm/statevector.hpp"

namespace qgm {

/// Circuit family used by benchmark_propagation. Unset fields follow the
/// model defaults: L = ⌈ln n⌉, p = ln(n)/n.
struct BenchmarkTemplate {
  std::optional<std::size_t> layers;
  EdgeRule p;
  Tau2Preset tau2_preset = Tau2Preset::Constant;
  std::optional<double> tau2;  // overrides the preset
  std::size_t trainable_depth = 0;
  std::string observable = "Z0";
  std::size_t exact_max_n = 12;
  bool timing = true;
};

struct BenchmarkInstance {
  GenerativeSpec spec;
  std::uint64_t trainable_seed = 0;
  Circuit circuit;
  PauliSum observable;
};

/// Seeds: generative = mix(mix(master, n), trial), trainable = mix(generative, 1).
inline BenchmarkInstance make_benchmark_instance(const BenchmarkTemplate& tpl, std::size_t n,
                                                 std::size_t trial, std::uint64_t master) {
  BenchmarkInstance inst;
  inst.spec.n = n;
  inst.spec.layers = tpl.layers.value_or(default_generative_layers(n));
  inst.spec.p = tpl.p(n);
  inst.spec.tau2 = tpl.tau2 ? *tpl.tau2 : resolve_tau2(tpl.tau2_preset, n, inst.spec.layers, 1).value;
  inst.spec.seed = mix_seed(mix_seed(master, n), trial);
  inst.trainable_seed = mix_seed(inst.spec.seed, 1);
  inst.circuit = build_generative(inst.spec);
  if (tpl.trainable_depth > 0) {
    inst.circuit.append(build_trainable(n, tpl.trainable_depth, inst.trainable_seed));
  }
  inst.observable = PauliSum::single(parse_pauli(n, tpl.observable));
  return inst;
}

using PolicyForSize = std::function<TruncationPolicy(std::size_t n)>;

/// Parses a policy description: "exact", "exact:<max_terms>", or a '+'-joined
/// list of "sine" (⌈log₂ n⌉), "sine:<k>", "coeff:<ε>", "weight:<w>", "max:<m>".
inline PolicyForSize parse_policy(const std::string& text) {
  const auto number = [&](const std::string& v) {
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(v, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != v.size() || !(x >= 0)) throw std::invalid_argument("bad number \"" + v + "\" in policy \"" + text + "\"");
    return x;
  };
  const auto whole = [&](const std::string& v) {
    const double x = number(v);
    if (x != std::floor(x)) throw std::invalid_argument("policy \"" + text + "\" needs an integer, got " + v);
    return static_cast<std::size_t>(x);
  };
  if (text == "exact") return [](std::size_t) { return TruncationPolicy::exact_mode(); };
  if (text.rfind("exact:", 0) == 0) {
    const std::size_t limit = whole(text.substr(6));
    return [limit](std::size_t) { return TruncationPolicy::exact_mode(limit); };
  }
  TruncationRule rule;
  bool auto_sine = false;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const std::size_t end = std::min(text.find('+', begin), text.size());
    const std::string item = text.substr(begin, end - begin);
    const std::size_t colon = item.find(':');
    const std::string key = item.substr(0, colon);
    const std::string value = colon == std::string::npos ? "" : item.substr(colon + 1);
    if (key == "sine" && value.empty()) {
      auto_sine = true;
    } else if (value.empty()) {
      throw std::invalid_argument("policy item \"" + item + "\" needs a value");
    } else if (key == "sine") {
      rule.sine_cutoff = static_cast<int>(whole(value));
    } else if (key == "coeff") {
      rule.coeff_threshold = number(value);
    } else if (key == "weight") {
      rule.weight_cutoff = whole(value);
    } else if (key == "max") {
      rule.max_terms = whole(value);
    } else {
      throw std::invalid_argument("unknown policy item \"" + item + "\"");
    }
    begin = end + 1;
  }
  return [rule, auto_sine](std::size_t n) {
    TruncationPolicy p;
    p.base = rule;
    if (auto_sine) p.base.sine_cutoff = sine_cutoff_default(n);
    p.validate();
    return p;
  };
}

/// One row per (n, trial) with columns n, trial, policy_id, expectation,
/// error_vs_exact (null above exact_max_n), peak_terms, final_terms,
/// dropped_mass, wall_time_s (null when timing is off).
inline std::vector<ReportRow> benchmark_propagation(const std::vector<std::size_t>& sizes,
                                                    const BenchmarkTemplate& tpl,
                                                    const PolicyForSize& policy,
                                                    std::size_t trials, std::uint64_t seed,
                                                    std::size_t threads = 1) {
  struct Job {
    std::size_t n, trial;
  };
  std::vector<Job> jobs;
  for (std::size_t n : sizes)
    for (std::size_t t = 0; t < trials; ++t) jobs.push_back({n, t});
  std::vector<ReportRow> rows(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    const auto [n, trial] = jobs[i];
    const BenchmarkInstance inst = make_benchmark_instance(tpl, n, trial, seed);
    const TruncationPolicy pol = policy(n);
    const PropagationReport rep = propagate(inst.circuit, inst.observable, pol);
    Cell error = std::monostate{};
    if (n <= tpl.exact_max_n) {
      error = std::abs(rep.expectation - circuit_expectation(inst.circuit, inst.observable));
    }
    ReportRow row;
    row.set("n", n)
        .set("trial", trial)
        .set("policy_id", Cell{pol.id()})
        .set("expectation", Cell{rep.expectation})
        .set("error_vs_exact", error)
        .set("peak_terms", rep.peak_terms)
        .set("final_terms", rep.final_terms)
        .set("dropped_mass", Cell{rep.dropped_mass})
        .set("wall_time_s", tpl.timing ? Cell{rep.wall_time} : Cell{std::monostate{}});
    rows[i] = std::move(row);
  });
  return rows;
}

/// Per-n aggregates of benchmark rows: trials, mean_wall_time_s,
/// mean_peak_terms, max_peak_terms, max_error (null if no exact column).
inline std::vector<ReportRow> summarize_benchmark(const std::vector<ReportRow>& rows) {
  struct Acc {
    std::size_t trials = 0;
    double wall = 0, peak = 0, max_peak = 0, max_err = -1;
    bool timed = false;
  };
  std::map<std::int64_t, Acc> acc;
  for (const auto& r : rows) {
    Acc& a = acc[static_cast<std::int64_t>(r.number("n"))];
    ++a.trials;
    const double peak = r.number("peak_terms");
    a.peak += peak;
    a.max_peak = std::max(a.max_peak, peak);
    if (!std::holds_alternative<std::monostate>(r.at("wall_time_s"))) {
      a.wall += r.number("wall_time_s");
      a.timed = true;
    }
    if (!std::holds_alternative<std::monostate>(r.at("error_vs_exact"))) {
      a.max_err = std::max(a.max_err, r.number("error_vs_exact"));
    }
  }
  std::vector<ReportRow> out;
  for (const auto& [n, a] : acc) {
    const double t = static_cast<double>(a.trials);
    ReportRow row;
    row.set("n", Cell{n})
        .set("trials", a.trials)
        .set("mean_wall_time_s", a.timed ? Cell{a.wall / t} : Cell{std::monostate{}})
        .set("mean_peak_terms", Cell{a.peak / t})
        .set("max_peak_terms", Cell{a.max_peak})
        .set("max_error", a.max_err >= 0 ? Cell{a.max_err} : Cell{std::monostate{}});
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace qgm
