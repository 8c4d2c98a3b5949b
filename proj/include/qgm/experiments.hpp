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
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "qgm/circuit.hpp"
#include "qgm/errors.hpp"
#include "qgm/metrics.hpp"
#include "qgm/parallel.hpp"
#include "qgm/propagation_benchmark.hpp"
#include "qgm/report.hpp"
#include "qgm/rng.hpp"
#include "qgm/statevector.hpp"
#include "qgm/treewidth.hpp"

#ifndef QGM_VERSION
#define QGM_VERSION "0.1.0"
#endif

namespace qgm {

inline constexpr const char* kVersion = QGM_VERSION;

inline const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids{"subvolume", "gradvar", "lightcone", "pauliprop-bench",
                                            "treewidth"};
  return ids;
}

inline constexpr const char* kSeedRule =
    "trial seed = mix(mix(master, n), trial); mix(a, i) = splitmix64(splitmix64(a) ^ "
    "(i + 1) * 0xD1B54A32D192ED03)";

/// Trial seed for size n: mix(mix(master, n), trial).
inline std::uint64_t trial_seed(std::uint64_t master, std::size_t n, std::size_t trial) {
  return mix_seed(mix_seed(master, n), trial);
}

struct ExperimentConfig {
  std::string experiment;
  std::vector<std::size_t> n;
  std::optional<std::size_t> layers;  // default ⌈ln n⌉
  EdgeRule p;
  Tau2Preset tau2_preset = Tau2Preset::Constant;
  std::optional<double> tau2;
  std::vector<std::size_t> subsystem;     // Λ
  std::vector<std::string> observables;   // experiment-specific default when empty
  std::optional<std::size_t> trainable_depth;
  std::optional<std::size_t> control_depth;  // gradvar control, default n
  std::optional<std::size_t> parameter;      // gradvar ν
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string policy = "sine";
  std::size_t exact_max_n = 12;
  bool timing = true;
  std::string out = ".";
  nlohmann::ordered_json calibration;  // free-form notes echoed into the manifest
  nlohmann::ordered_json source;  // the config exactly as read
};

inline const std::vector<std::string>& required_config_keys() {
  static const std::vector<std::string> keys{"experiment", "n", "samples", "seed"};
  return keys;
}

inline const std::vector<std::string>& optional_config_keys() {
  static const std::vector<std::string> keys{
      "layers", "p", "tau2_preset", "tau2", "subsystem", "observables", "trainable_depth",
      "control_depth", "parameter", "policy", "exact_max_n", "timing", "out", "calibration"};
  return keys;
}

inline nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["experiment"] = c.experiment;
  j["n"] = c.n;
  if (c.layers) j["layers"] = *c.layers;
  j["p"] = c.p.str();
  j["tau2_preset"] = c.tau2_preset == Tau2Preset::Theorem ? "theorem" : "constant";
  if (c.tau2) j["tau2"] = *c.tau2;
  j["subsystem"] = c.subsystem;
  j["observables"] = c.observables;
  if (c.trainable_depth) j["trainable_depth"] = *c.trainable_depth;
  if (c.control_depth) j["control_depth"] = *c.control_depth;
  if (c.parameter) j["parameter"] = *c.parameter;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["policy"] = c.policy;
  j["exact_max_n"] = c.exact_max_n;
  j["timing"] = c.timing;
  j["out"] = c.out;
  if (!c.calibration.is_null()) j["calibration"] = c.calibration;
  return j;
}

namespace detail {

[[noreturn]] inline void config_error(const std::string& what) {
  throw QgmError(ErrorCode::kInvalidConfig, "config: " + what);
}

inline std::vector<std::size_t> qubits_of(const ExperimentConfig& c, std::size_t n) {
  std::set<std::size_t> qs(c.subsystem.begin(), c.subsystem.end());
  for (const auto& o : c.observables)
    for (std::size_t q : parse_pauli(n, o).support()) qs.insert(q);
  return {qs.begin(), qs.end()};
}

}  // namespace detail

/// Checks the config invariants: known id, non-empty sizes, positive sample
/// count, and every referenced qubit below min(n).
inline void validate(const ExperimentConfig& c) {
  const auto& ids = experiment_ids();
  if (std::find(ids.begin(), ids.end(), c.experiment) == ids.end()) {
    std::string list;
    for (const auto& id : ids) list += (list.empty() ? "" : ", ") + id;
    throw QgmError(ErrorCode::kUnknownExperiment,
                   "unknown experiment \"" + c.experiment + "\" (expected one of " + list + ")");
  }
  if (c.n.empty()) detail::config_error("\"n\" must list at least one size");
  if (c.samples == 0) detail::config_error("\"samples\" must be positive");
  const std::size_t n_min = *std::min_element(c.n.begin(), c.n.end());
  if (n_min == 0) detail::config_error("sizes must be positive");
  const std::size_t n_max = *std::max_element(c.n.begin(), c.n.end());
  const bool statevector = c.experiment == "subvolume" || c.experiment == "gradvar";
  if (statevector && n_max > StateVector::kMaxQubits) {
    detail::config_error("statevector experiments allow n <= " + std::to_string(StateVector::kMaxQubits));
  }
  if (c.experiment == "pauliprop-bench" && n_max > PauliString::kMaxQubits) {
    detail::config_error("propagation allows n <= " + std::to_string(PauliString::kMaxQubits));
  }
  if (c.tau2 && !(*c.tau2 >= 0.0 && *c.tau2 < 0.25)) detail::config_error("\"tau2\" must lie in [0, 1/4)");
  if (c.subsystem.size() > 12) detail::config_error("\"subsystem\" is limited to 12 qubits");
  std::set<std::size_t> seen;
  for (std::size_t q : c.subsystem) {
    if (!seen.insert(q).second) detail::config_error("\"subsystem\" repeats qubit " + std::to_string(q));
  }
  try {
    for (std::size_t q : detail::qubits_of(c, std::min<std::size_t>(n_min, PauliString::kMaxQubits))) {
      if (q >= n_min) {
        detail::config_error("qubit " + std::to_string(q) + " is not below min(n) = " + std::to_string(n_min));
      }
    }
  } catch (const DimensionError& e) {
    detail::config_error(std::string(e.what()) + " (qubits must be below min(n) = " + std::to_string(n_min) + ")");
  } catch (const std::out_of_range& e) {
    detail::config_error(std::string(e.what()) + " (qubits must be below min(n) = " + std::to_string(n_min) + ")");
  }
  if (c.experiment == "subvolume" && !c.observables.empty() && parse_pauli(n_min, c.observables[0]).is_identity()) {
    detail::config_error("the subvolume observable must not be the identity");
  }
  if (c.experiment == "pauliprop-bench") {
    try {
      parse_policy(c.policy)(n_min);
    } catch (const std::invalid_argument& e) {
      detail::config_error(e.what());
    }
  }
}

/// Parses and validates a config. All missing required keys and all unknown
/// keys are reported together.
inline ExperimentConfig config_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) detail::config_error("expected a JSON object");
  std::vector<std::string> missing, unknown;
  for (const auto& k : required_config_keys())
    if (!j.contains(k)) missing.push_back(k);
  for (const auto& [k, _] : j.items()) {
    const auto& r = required_config_keys();
    const auto& o = optional_config_keys();
    if (std::find(r.begin(), r.end(), k) == r.end() && std::find(o.begin(), o.end(), k) == o.end())
      unknown.push_back(k);
  }
  const auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s;
  };
  if (!missing.empty() || !unknown.empty()) {
    std::string msg;
    if (!missing.empty()) msg += "missing keys: " + join(missing);
    if (!unknown.empty()) msg += std::string(msg.empty() ? "" : "; ") + "unknown keys: " + join(unknown);
    detail::config_error(msg);
  }
  ExperimentConfig c;
  c.source = j;
  try {
    c.experiment = j.at("experiment").get<std::string>();
    if (j.at("n").is_array()) {
      c.n = j.at("n").get<std::vector<std::size_t>>();
    } else {
      c.n = {j.at("n").get<std::size_t>()};
    }
    c.samples = j.at("samples").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("layers")) c.layers = j["layers"].get<std::size_t>();
    if (j.contains("p")) {
      c.p = j["p"].is_number() ? EdgeRule{EdgeRule::Kind::Constant, j["p"].get<double>()}
                               : EdgeRule::parse(j["p"].get<std::string>());
      if (!(c.p.value >= 0 && (c.p.kind != EdgeRule::Kind::Constant || c.p.value <= 1))) {
        detail::config_error("\"p\" must be a probability or an edge rule");
      }
    }
    if (j.contains("tau2_preset")) c.tau2_preset = parse_tau2_preset(j["tau2_preset"].get<std::string>());
    if (j.contains("tau2")) c.tau2 = j["tau2"].get<double>();
    if (j.contains("subsystem")) c.subsystem = j["subsystem"].get<std::vector<std::size_t>>();
    if (j.contains("observables")) {
      c.observables = j["observables"].is_array() ? j["observables"].get<std::vector<std::string>>()
                                                  : std::vector<std::string>{j["observables"].get<std::string>()};
    }
    if (j.contains("trainable_depth")) c.trainable_depth = j["trainable_depth"].get<std::size_t>();
    if (j.contains("control_depth")) c.control_depth = j["control_depth"].get<std::size_t>();
    if (j.contains("parameter")) c.parameter = j["parameter"].get<std::size_t>();
    if (j.contains("policy")) c.policy = j["policy"].get<std::string>();
    if (j.contains("exact_max_n")) c.exact_max_n = j["exact_max_n"].get<std::size_t>();
    if (j.contains("timing")) c.timing = j["timing"].get<bool>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("calibration")) c.calibration = j["calibration"];
  } catch (const nlohmann::json::exception& e) {
    detail::config_error(std::string("bad value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    detail::config_error(e.what());
  }
  validate(c);
  return c;
}

/// (4τ²)^S · (1 − 4τ²)^{S(L+2)}; 0 at τ² = 0.
inline double theorem_bound(std::size_t s, std::size_t layers, double tau2) {
  if (!(tau2 >= 0.0 && tau2 < 0.25)) throw std::invalid_argument("theorem_bound needs 0 <= τ² < 1/4");
  const double a = 4.0 * tau2;
  return std::pow(a, static_cast<double>(s)) *
         std::pow(1.0 - a, static_cast<double>(s) * static_cast<double>(layers + 2));
}

struct SampleStats {
  double mean = 0, se = 0, variance = 0;
};

/// Mean, unbiased variance and standard error of the mean.
inline SampleStats sample_stats(const std::vector<double>& x) {
  SampleStats s;
  if (x.empty()) return s;
  const double n = static_cast<double>(x.size());
  for (double v : x) s.mean += v;
  s.mean /= n;
  if (x.size() > 1) {
    for (double v : x) s.variance += (v - s.mean) * (v - s.mean);
    s.variance /= n - 1;
    s.se = std::sqrt(s.variance / n);
  }
  return s;
}

/// Linear-interpolated quantile of unsorted data.
inline double quantile(std::vector<double> x, double q) {
  if (x.empty()) return std::nan("");
  std::sort(x.begin(), x.end());
  const double pos = q * static_cast<double>(x.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (pos - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

/// Least-squares slope of y against x.
inline std::optional<double> fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2 || x.size() != y.size()) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0) return std::nullopt;
  return sxy / sxx;
}

/// Per-n model parameters after defaults and τ² presets are applied.
struct ResolvedSize {
  std::size_t n = 0, layers = 0, weight = 1;
  double p = 0, tau2 = 0;
  bool clamped = false;
};

inline ResolvedSize resolve_size(const ExperimentConfig& c, std::size_t n, std::size_t weight) {
  ResolvedSize r;
  r.n = n;
  r.weight = weight;
  r.layers = c.layers.value_or(default_generative_layers(n));
  r.p = c.p(n);
  if (c.tau2) {
    r.tau2 = *c.tau2;
  } else {
    const auto t = resolve_tau2(c.tau2_preset, std::max<std::size_t>(n, 2), r.layers, std::max<std::size_t>(weight, 1));
    r.tau2 = t.value;
    r.clamped = t.clamped;
  }
  return r;
}

inline GenerativeSpec generative_spec(const ResolvedSize& r, std::uint64_t seed) {
  return {r.n, r.layers, r.p, r.tau2, seed};
}

struct ExperimentResult {
  std::vector<ReportRow> rows;
  std::vector<ResolvedSize> resolved;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

/// Monte-Carlo check of the subvolume bound. Per n: E[Tr(σρ)²] and
/// E[I_Λ(ρ)²] over generative seeds, the closed-form bound, the one-sided
/// flag mean + 2·SE ≥ bound, the mean weak-subvolume gap and two quantiles.
inline ExperimentResult subvolume_experiment(const ExperimentConfig& c, std::size_t threads = 1) {
  ExperimentResult out;
  for (std::size_t n : c.n) {
    const PauliString sigma = parse_pauli(n, c.observables.empty() ? "Z0" : c.observables.front());
    std::vector<std::size_t> lambda = c.subsystem.empty() ? sigma.support() : c.subsystem;
    for (std::size_t q : sigma.support()) {
      if (std::find(lambda.begin(), lambda.end(), q) == lambda.end()) {
        detail::config_error("\"subsystem\" must contain the support of the observable");
      }
    }
    const ResolvedSize r = resolve_size(c, n, sigma.weight());
    out.resolved.push_back(r);
    std::vector<double> tr_sq(c.samples), i_sq(c.samples), gap(c.samples);
    parallel_for(c.samples, threads, [&](std::size_t t) {
      const StateVector state = run(build_generative(generative_spec(r, trial_seed(c.seed, n, t))));
      const double tr = expectation(state, sigma);
      const DensityMatrix rho = reduced_density_matrix(state, lambda);
      const double dist = distinguishability(rho);
      tr_sq[t] = tr * tr;
      i_sq[t] = dist * dist;
      gap[t] = weak_subvolume_gap(rho);
    });
    const auto st = sample_stats(tr_sq), si = sample_stats(i_sq), sg = sample_stats(gap);
    const double bound = theorem_bound(r.weight, r.layers, r.tau2);
    ReportRow row;
    row.set("n", n)
        .set("L", r.layers)
        .set("tau2", Cell{r.tau2})
        .set("S", r.weight)
        .set("trials", c.samples)
        .set("mean_tr_sq", Cell{st.mean})
        .set("se_tr_sq", Cell{st.se})
        .set("mean_I2", Cell{si.mean})
        .set("se_I2", Cell{si.se})
        .set("bound", Cell{bound})
        .set("pass", st.mean + 2 * st.se >= bound)
        .set("mean_gap", Cell{sg.mean})
        .set("q05_tr_sq", Cell{quantile(tr_sq, 0.05)})
        .set("median_tr_sq", Cell{quantile(tr_sq, 0.5)});
    out.rows.push_back(std::move(row));
  }
  return out;
}

/// Default ν for the gradient study: the first RotZ of the middle brick in
/// brick layer 0, observed with Z on that brick's first qubit.
struct GradientTarget {
  std::size_t parameter = 0;
  std::size_t qubit = 0;
};

inline GradientTarget default_gradient_target(std::size_t n) {
  const auto pairs = brick_pairs(n, 0);
  if (pairs.empty()) return {};
  const std::size_t k = pairs.size() / 2;
  return {k * kBrickParams, pairs[k].first};
}

/// Samples ∂_ν⟨O⟩ by parameter shift over (γ, θ) draws. Trial t uses the
/// generative seed mix(mix(master, n), t) and trainable seed mix(that, 1).
inline std::vector<double> sample_gradients(const ResolvedSize& r, std::size_t depth,
                                            const PauliSum& obs, std::optional<std::size_t> parameter,
                                            std::size_t trials, std::uint64_t master,
                                            std::size_t threads = 1) {
  std::vector<double> grads(trials, 0.0);
  if (depth == 0) return grads;  // no trainable parameters: the cost is flat
  const std::size_t nu = parameter.value_or(default_gradient_target(r.n).parameter);
  parallel_for(trials, threads, [&](std::size_t t) {
    const std::uint64_t seed = trial_seed(master, r.n, t);
    const Circuit c = compose(build_generative(generative_spec(r, seed)),
                              build_trainable(r.n, depth, mix_seed(seed, 1)));
    grads[t] = parameter_shift_gradient(c, nu, obs);
  });
  return grads;
}

/// Gradient variance of the log-depth ansatz against a linear-depth control.
/// Two rows per n (ansatz "log" then "linear"); slope_fit is the
/// least-squares slope of log₂ Var against n for that ansatz.
inline ExperimentResult gradient_variance_experiment(const ExperimentConfig& c, std::size_t threads = 1) {
  ExperimentResult out;
  struct Series {
    std::vector<double> x, y;
    bool ok = true;
  } series[2];
  for (std::size_t n : c.n) {
    const ResolvedSize r = resolve_size(c, n, 1);
    out.resolved.push_back(r);
    const GradientTarget target = default_gradient_target(n);
    const PauliSum obs = PauliSum::single(
        c.observables.empty() ? PauliString::single(n, target.qubit, PauliLetter::Z)
                              : parse_pauli(n, c.observables.front()));
    const std::size_t depths[2] = {c.trainable_depth.value_or(default_trainable_depth(n)),
                                   c.control_depth.value_or(n)};
    for (int a = 0; a < 2; ++a) {
      if (depths[a] > 0 && n < 2) detail::config_error("brick layers need n >= 2");
      if (depths[a] > 0 && c.parameter &&
          *c.parameter >= build_trainable(n, depths[a], 0).theta().size()) {
        detail::config_error("\"parameter\" exceeds the parameter count");
      }
      const auto g = sample_gradients(r, depths[a], obs, c.parameter, c.samples, c.seed, threads);
      std::vector<double> sq(g.size());
      const SampleStats s = sample_stats(g);
      for (std::size_t i = 0; i < g.size(); ++i) sq[i] = (g[i] - s.mean) * (g[i] - s.mean);
      // SE of the sample variance via the spread of squared deviations.
      const double se = sample_stats(sq).se;
      ReportRow row;
      row.set("n", n)
          .set("depth", depths[a])
          .set("trials", c.samples)
          .set("variance", Cell{s.variance})
          .set("se", Cell{se})
          .set("slope_fit", Cell{std::monostate{}})
          .set("ansatz", a == 0 ? "log" : "linear");
      out.rows.push_back(std::move(row));
      if (s.variance > 0) {
        series[a].x.push_back(static_cast<double>(n));
        series[a].y.push_back(std::log2(s.variance));
      } else {
        series[a].ok = false;
      }
    }
  }
  for (int a = 0; a < 2; ++a) {
    const auto slope = series[a].ok ? fit_slope(series[a].x, series[a].y) : std::nullopt;
    for (std::size_t i = a; i < out.rows.size(); i += 2) {
      out.rows[i].set("slope_fit", slope ? Cell{*slope} : Cell{std::monostate{}});
    }
  }
  out.extra["gradient_target"] = "first RotZ of the middle brick in brick layer 0; Z on its first qubit";
  return out;
}

/// Covered fraction of the backward light cone of one qubit through the
/// generative CZ layers.
inline ExperimentResult lightcone_spread_experiment(const ExperimentConfig& c, std::size_t threads = 1) {
  ExperimentResult out;
  const std::size_t start = c.subsystem.empty() ? 0 : c.subsystem.front();
  for (std::size_t n : c.n) {
    const ResolvedSize r = resolve_size(c, n, 1);
    out.resolved.push_back(r);
    std::vector<double> frac(c.samples);
    parallel_for(c.samples, threads, [&](std::size_t t) {
      const Circuit circ = build_generative(generative_spec(r, trial_seed(c.seed, n, t)));
      frac[t] = static_cast<double>(backward_lightcone(circ, {start}).final_set.size()) /
                static_cast<double>(n);
    });
    ReportRow row;
    row.set("n", n)
        .set("L", r.layers)
        .set("p", Cell{r.p})
        .set("trials", c.samples)
        .set("mean_frac", Cell{sample_stats(frac).mean})
        .set("min_frac", Cell{*std::min_element(frac.begin(), frac.end())});
    out.rows.push_back(std::move(row));
  }
  return out;
}

inline ExperimentResult propagation_benchmark_experiment(const ExperimentConfig& c, std::size_t threads = 1) {
  ExperimentResult out;
  BenchmarkTemplate tpl;
  tpl.layers = c.layers;
  tpl.p = c.p;
  tpl.tau2_preset = c.tau2_preset;
  tpl.tau2 = c.tau2;
  tpl.trainable_depth = c.trainable_depth.value_or(0);
  tpl.observable = c.observables.empty() ? "Z0" : c.observables.front();
  tpl.exact_max_n = c.exact_max_n;
  tpl.timing = c.timing;
  for (std::size_t n : c.n) out.resolved.push_back(resolve_size(c, n, 1));
  try {
    out.rows = benchmark_propagation(c.n, tpl, parse_policy(c.policy), c.samples, c.seed, threads);
  } catch (const PropagationLimitError& e) {
    throw QgmError(ErrorCode::kResourceLimit, e.what());
  }
  return out;
}

inline ExperimentResult treewidth_experiment(const ExperimentConfig& c, std::size_t threads = 1) {
  ExperimentResult out;
  for (std::size_t n : c.n) out.resolved.push_back(resolve_size(c, n, 1));
  out.rows = treewidth_trend(c.n, c.p, c.samples, c.seed, c.layers, threads);
  return out;
}

inline ExperimentResult compute_experiment(const ExperimentConfig& c, std::size_t threads = 1) {
  validate(c);
  if (c.experiment == "subvolume") return subvolume_experiment(c, threads);
  if (c.experiment == "gradvar") return gradient_variance_experiment(c, threads);
  if (c.experiment == "lightcone") return lightcone_spread_experiment(c, threads);
  if (c.experiment == "pauliprop-bench") return propagation_benchmark_experiment(c, threads);
  return treewidth_experiment(c, threads);
}

/// Manifest: the config as given, the version string, the master seed, the
/// resolved per-n parameters and the seed derivation. Thread counts and
/// clocks are deliberately absent so reruns are byte-identical.
inline nlohmann::ordered_json make_manifest(const ExperimentConfig& c, const ExperimentResult& r,
                                            const std::string& csv_name) {
  nlohmann::ordered_json m;
  m["experiment"] = c.experiment;
  m["version"] = kVersion;
  m["master_seed"] = c.seed;
  m["config"] = c.source.is_null() ? to_json(c) : c.source;
  nlohmann::ordered_json sizes = nlohmann::ordered_json::array();
  for (const auto& s : r.resolved) {
    sizes.push_back({{"n", s.n},
                     {"layers", s.layers},
                     {"p", s.p},
                     {"tau2", s.tau2},
                     {"tau2_clamped", s.clamped},
                     {"size_seed", mix_seed(c.seed, s.n)}});
  }
  m["resolved"] = sizes;
  m["seed_rule"] = kSeedRule;
  m["csv"] = csv_name;
  m["rows"] = r.rows.size();
  if (!c.calibration.is_null()) m["calibration"] = c.calibration;
  for (const auto& [k, v] : r.extra.items()) m[k] = v;
  return m;
}

struct ExperimentFiles {
  std::filesystem::path csv, manifest;
  ExperimentResult result;
};

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw QgmError(ErrorCode::kOutputUnwritable, "cannot write " + path.string());
  f << text;
  f.close();
  if (!f) throw QgmError(ErrorCode::kOutputUnwritable, "cannot write " + path.string());
}

inline void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw QgmError(ErrorCode::kOutputUnwritable, "cannot create output directory " + dir.string());
  }
}

/// Runs the experiment and writes <out_dir>/<id>.csv and
/// <out_dir>/<id>.manifest.json.
inline ExperimentFiles run_experiment(const ExperimentConfig& c, std::optional<std::string> out_dir = std::nullopt,
                                      std::size_t threads = 1) {
  validate(c);
  const std::filesystem::path dir = out_dir.value_or(c.out);
  ensure_directory(dir);
  ExperimentFiles files;
  files.csv = dir / (c.experiment + ".csv");
  files.manifest = dir / (c.experiment + ".manifest.json");
  files.result = compute_experiment(c, threads);
  write_text_file(files.csv, to_csv(files.result.rows));
  write_text_file(files.manifest,
                  make_manifest(c, files.result, files.csv.filename().string()).dump(2) + "\n");
  return files;
}

}  // namespace qgm
