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
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "plot.hpp"
#include "qgm/circuit.hpp"
#include "qgm/errors.hpp"
#include "qgm/experiments.hpp"
#include "qgm/parallel.hpp"
#include "qgm/propagation.hpp"
#include "qgm/propagation_benchmark.hpp"
#include "qgm/report.hpp"
#include "qgm/shadows.hpp"
#include "qgm/statevector.hpp"
#include "qgm/treewidth.hpp"

namespace qgm::cli {

struct Globals {
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::size_t threads = default_threads();
  bool quiet = false;
};

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw QgmError(ErrorCode::kInputError, "cannot read " + path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

/// Writes `text` to `path`, or to `out` when path is "-".
inline void emit(const std::string& path, const std::string& text, std::ostream& out, const Globals& g) {
  if (path == "-") {
    out << text;
    return;
  }
  write_text_file(path, text);
  if (!g.quiet) out << "wrote " << path << "\n";
}

template <typename T>
T parse_or_usage(const std::string& what, const std::function<T()>& f) {
  try {
    return f();
  } catch (const QgmError&) {
    throw;
  } catch (const std::exception& e) {
    throw QgmError(ErrorCode::kUsage, what + ": " + e.what());
  }
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ' || !cur.empty()) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

/// Circuit JSON with its optional embedded "manifest" object.
struct LoadedCircuit {
  Circuit circuit;
  nlohmann::json manifest;
};

inline LoadedCircuit load_circuit(const std::string& path) {
  const std::string text = read_file(path);
  try {
    const auto j = nlohmann::json::parse(text);
    return {circuit_from_json(j), j.value("manifest", nlohmann::json())};
  } catch (const std::exception& e) {
    throw QgmError(ErrorCode::kInputError, "bad circuit file " + path + ": " + e.what());
  }
}

inline std::vector<PauliString> parse_observables(std::size_t n, const std::string& list) {
  return parse_or_usage<std::vector<PauliString>>("--observables", [&] {
    std::vector<PauliString> out;
    for (const auto& item : split_list(list)) out.push_back(parse_pauli(n, item));
    if (out.empty()) throw std::invalid_argument("no observables given");
    return out;
  });
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::size_t n = 0;
  std::optional<std::size_t> layers;
  std::string p = "ln(n)/n";
  std::string tau2_preset = "constant";
  std::optional<double> tau2;
  std::size_t weight = 1;
  std::size_t depth = 0;
  std::string init = "uniform";
  std::string out;
};

inline int cmd_gen(const GenArgs& a, const Globals& g, std::ostream& out) {
  const EdgeRule rule = parse_or_usage<EdgeRule>("--p", [&] { return EdgeRule::parse(a.p); });
  const Tau2Preset preset = parse_or_usage<Tau2Preset>("--tau2-preset", [&] { return parse_tau2_preset(a.tau2_preset); });
  if (a.init != "uniform" && a.init != "zeros") throw QgmError(ErrorCode::kUsage, "--init must be uniform or zeros");
  if (a.tau2 && !(*a.tau2 >= 0 && *a.tau2 < 0.25)) throw QgmError(ErrorCode::kUsage, "--tau2 must lie in [0, 1/4)");
  if (a.n == 0 || a.n > PauliString::kMaxQubits) throw QgmError(ErrorCode::kUsage, "--n must lie in [1, 128]");
  if (a.depth > 0 && a.n < 2) throw QgmError(ErrorCode::kUsage, "--depth needs n >= 2");

  GenerativeSpec spec;
  spec.n = a.n;
  spec.layers = a.layers.value_or(default_generative_layers(a.n));
  spec.p = rule(a.n);
  Tau2Resolution res{};
  if (a.tau2) {
    res.value = *a.tau2;
  } else {
    res = parse_or_usage<Tau2Resolution>("--tau2-preset", [&] { return resolve_tau2(preset, a.n, spec.layers, a.weight); });
  }
  spec.tau2 = res.value;
  spec.seed = g.seed;
  Circuit c = build_generative(spec);
  const std::uint64_t trainable_seed = mix_seed(g.seed, 1);
  if (a.depth > 0) {
    c.append(build_trainable(a.n, a.depth, trainable_seed, a.init == "zeros" ? ThetaInit::Zeros : ThetaInit::Uniform));
  }
  nlohmann::json j = to_json(c);
  nlohmann::json m;
  m["version"] = kVersion;
  m["n"] = spec.n;
  m["layers"] = spec.layers;
  m["p_rule"] = rule.str();
  m["p"] = spec.p;
  m["tau2_preset"] = a.tau2 ? "explicit" : a.tau2_preset;
  m["tau2"] = spec.tau2;
  m["tau2_clamped"] = res.clamped;
  m["weight"] = a.weight;
  m["seed"] = g.seed;
  m["trainable_depth"] = a.depth;
  m["trainable_seed"] = trainable_seed;
  m["init"] = a.init;
  j["manifest"] = m;
  emit(a.out, j.dump(2) + "\n", out, g);
  return 0;
}

// ---------------------------------------------------------------------------

struct FeaturesArgs {
  std::string circuit, observables, out, backend = "auto";
  std::size_t samples = 0;
  std::optional<double> tau2;
};

/// Row i resamples every generative angle from N(0, τ²) with seed
/// mix(seed, i); CZ layers and θ stay as stored in the circuit file.
inline int cmd_features(const FeaturesArgs& a, const Globals& g, std::ostream& out) {
  if (a.backend != "auto" && a.backend != "statevector" && a.backend != "propagation") {
    throw QgmError(ErrorCode::kUsage, "--backend must be auto, statevector or propagation");
  }
  if (a.samples == 0) throw QgmError(ErrorCode::kUsage, "--samples must be positive");
  const LoadedCircuit lc = load_circuit(a.circuit);
  const std::size_t n = lc.circuit.num_qubits();
  const auto obs = parse_observables(n, a.observables);
  double tau2 = 0;
  if (a.tau2) {
    tau2 = *a.tau2;
  } else if (lc.manifest.contains("tau2")) {
    tau2 = lc.manifest["tau2"].get<double>();
  } else {
    throw QgmError(ErrorCode::kUsage, "circuit file has no manifest; pass --tau2");
  }
  if (!(tau2 >= 0 && tau2 < 0.25)) throw QgmError(ErrorCode::kUsage, "τ² must lie in [0, 1/4)");
  const bool use_sv = a.backend == "statevector" || (a.backend == "auto" && n <= 20);
  if (use_sv && n > StateVector::kMaxQubits) throw QgmError(ErrorCode::kUsage, "statevector backend limited to 24 qubits");

  std::vector<std::vector<double>> values(a.samples, std::vector<double>(obs.size()));
  parallel_for(a.samples, g.threads, [&](std::size_t i) {
    const Circuit c = resample_generative(lc.circuit, tau2, mix_seed(g.seed, i));
    if (use_sv) {
      const StateVector s = run(c);
      for (std::size_t k = 0; k < obs.size(); ++k) values[i][k] = expectation(s, obs[k]);
    } else {
      for (std::size_t k = 0; k < obs.size(); ++k)
        values[i][k] = propagate(c, PauliSum::single(obs[k]), TruncationPolicy::exact_mode()).expectation;
    }
  });
  std::vector<ReportRow> rows;
  for (std::size_t i = 0; i < a.samples; ++i) {
    ReportRow row;
    row.set("sample", i);
    for (std::size_t k = 0; k < obs.size(); ++k) row.set(sparse_label(obs[k]), Cell{values[i][k]});
    rows.push_back(std::move(row));
  }
  emit(a.out, to_csv(rows), out, g);
  return 0;
}

// ---------------------------------------------------------------------------

struct ExperimentArgs {
  std::string config, out_dir;
};

inline int cmd_experiment(const ExperimentArgs& a, const Globals& g, std::ostream& out) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(read_file(a.config));
  } catch (const nlohmann::json::exception& e) {
    throw QgmError(ErrorCode::kInputError, "bad config " + a.config + ": " + e.what());
  }
  ExperimentConfig c = config_from_json(j);
  if (g.seed_given) c.seed = g.seed;
  validate(c);
  const std::filesystem::path dir = a.out_dir.empty() ? c.out : a.out_dir;
  ensure_directory(dir);
  ExperimentResult r = compute_experiment(c, g.threads);
  const auto csv = dir / (c.experiment + ".csv");
  const auto manifest = dir / (c.experiment + ".manifest.json");
  auto m = make_manifest(c, r, csv.filename().string());
  if (g.seed_given) m["overrides"] = {{"seed", g.seed}};
  write_text_file(csv, to_csv(r.rows));
  write_text_file(manifest, m.dump(2) + "\n");
  if (!g.quiet) out << "wrote " << csv.string() << "\nwrote " << manifest.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct PlotArgs {
  std::string csv, x, y, out, title;
};

inline int cmd_plot(const PlotArgs& a, const Globals& g, std::ostream& out) {
  std::vector<ReportRow> rows;
  try {
    rows = from_csv(read_file(a.csv));
  } catch (const QgmError&) {
    throw;
  } catch (const std::exception& e) {
    throw QgmError(ErrorCode::kInputError, "bad CSV " + a.csv + ": " + e.what());
  }
  const auto ys = split_list(a.y);
  if (ys.empty()) throw QgmError(ErrorCode::kUsage, "--y names no column");
  const auto series = collect_series(rows, a.x, ys);
  emit(a.out, render_svg(series, a.x, a.title.empty() ? a.y + " vs " + a.x : a.title), out, g);
  return 0;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::vector<std::size_t> n;
  std::string policy = "sine";
  std::size_t trials = 5;
  std::optional<std::size_t> layers;
  std::string p = "ln(n)/n";
  std::string tau2_preset = "constant";
  std::optional<double> tau2;
  std::size_t depth = 0;
  std::string observable = "Z0";
  std::size_t exact_max_n = 12;
  bool no_timing = false;
  std::string out, summary;
};

inline int cmd_bench(const BenchArgs& a, const Globals& g, std::ostream& out) {
  BenchmarkTemplate tpl;
  tpl.layers = a.layers;
  tpl.p = parse_or_usage<EdgeRule>("--p", [&] { return EdgeRule::parse(a.p); });
  tpl.tau2_preset = parse_or_usage<Tau2Preset>("--tau2-preset", [&] { return parse_tau2_preset(a.tau2_preset); });
  tpl.tau2 = a.tau2;
  tpl.trainable_depth = a.depth;
  tpl.observable = a.observable;
  tpl.exact_max_n = a.exact_max_n;
  tpl.timing = !a.no_timing;
  if (a.n.empty() || a.trials == 0) throw QgmError(ErrorCode::kUsage, "--n and --trials must be non-empty");
  const PolicyForSize policy = parse_or_usage<PolicyForSize>("--policy", [&] {
    auto pol = parse_policy(a.policy);
    for (std::size_t n : a.n) pol(n);
    return pol;
  });
  for (std::size_t n : a.n) {
    if (n < 1 || n > PauliString::kMaxQubits) throw QgmError(ErrorCode::kUsage, "--n values must lie in [1, 128]");
    parse_or_usage<PauliString>("--observable", [&] { return parse_pauli(n, a.observable); });
  }
  std::vector<ReportRow> rows;
  try {
    rows = benchmark_propagation(a.n, tpl, policy, a.trials, g.seed, g.threads);
  } catch (const PropagationLimitError& e) {
    throw QgmError(ErrorCode::kResourceLimit, e.what());
  }
  emit(a.out, to_csv(rows), out, g);
  if (!a.summary.empty()) emit(a.summary, to_csv(summarize_benchmark(rows)), out, g);
  return 0;
}

// ---------------------------------------------------------------------------

struct GraphArgs {
  std::vector<std::size_t> n;
  std::string p = "ln(n)/n";
  std::size_t trials = 20;
  std::optional<std::size_t> layers;
  std::string circuit, support = "0", out;
};

inline int cmd_graph_stats(const GraphArgs& a, const Globals& g, std::ostream& out) {
  std::vector<ReportRow> rows;
  if (!a.circuit.empty()) {
    const LoadedCircuit lc = load_circuit(a.circuit);
    const auto support = parse_or_usage<std::vector<std::size_t>>("--support", [&] {
      std::vector<std::size_t> s;
      for (const auto& item : split_list(a.support)) {
        std::size_t used = 0;
        const unsigned long long q = std::stoull(item, &used);
        if (used != item.size() || q >= lc.circuit.num_qubits()) throw std::invalid_argument("bad qubit " + item);
        s.push_back(static_cast<std::size_t>(q));
      }
      return s;
    });
    const auto ig = interaction_graph(lc.circuit, support);
    ReportRow row;
    row.set("n", lc.circuit.num_qubits())
        .set("cone_qubits", ig.qubits.size())
        .set("edges", ig.graph.num_edges())
        .set("degeneracy_lb", degeneracy(ig.graph))
        .set("minfill_ub", min_fill_width(ig.graph).width);
    rows.push_back(std::move(row));
  } else {
    if (a.n.empty() || a.trials == 0) throw QgmError(ErrorCode::kUsage, "give --circuit, or --n with --trials > 0");
    const EdgeRule rule = parse_or_usage<EdgeRule>("--p", [&] { return EdgeRule::parse(a.p); });
    rows = treewidth_trend(a.n, rule, a.trials, g.seed, a.layers, g.threads);
  }
  emit(a.out, to_csv(rows), out, g);
  return 0;
}

// ---------------------------------------------------------------------------

struct ShadowArgs {
  std::string circuit, out, observables, estimates;
  std::size_t shots = 0;
  std::size_t groups = kDefaultShadowGroups;
};

/// Shadows are taken on the generative part of the circuit; estimates push
/// each observable through the trainable part first.
inline int cmd_shadows(const ShadowArgs& a, const Globals& g, std::ostream& out) {
  if (a.shots == 0) throw QgmError(ErrorCode::kUsage, "--shots must be positive");
  if (a.groups == 0) throw QgmError(ErrorCode::kUsage, "--groups must be positive");
  if (!a.estimates.empty() && a.observables.empty()) throw QgmError(ErrorCode::kUsage, "--estimates needs --observables");
  const LoadedCircuit lc = load_circuit(a.circuit);
  const std::size_t n = lc.circuit.num_qubits();
  if (n > StateVector::kMaxQubits) throw QgmError(ErrorCode::kUsage, "shadows need n <= 24");
  std::vector<PauliString> obs;
  if (!a.observables.empty()) obs = parse_observables(n, a.observables);
  const CircuitParts parts = split_roles(lc.circuit);
  const ShadowSet set = collect_shadows(parts.generative, a.shots, g.seed, g.threads);
  emit(a.out, to_csv(shadows_to_rows(set)), out, g);
  if (!obs.empty()) {
    std::vector<ReportRow> rows;
    for (const auto& p : obs) {
      ReportRow row;
      row.set("observable", Cell{sparse_label(p)})
          .set("estimate", Cell{estimate_feature(set, parts.trainable, PauliSum::single(p), a.groups)})
          .set("shots", a.shots)
          .set("groups", a.groups);
      rows.push_back(std::move(row));
    }
    emit(a.estimates.empty() ? "-" : a.estimates, to_csv(rows), out, g);
  }
  return 0;
}

// ---------------------------------------------------------------------------

/// Runs one CLI invocation in-process. `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"qgm: generative-model circuits, simulation attacks and experiments"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "master seed")->each([&](const std::string&) { g.seed_given = true; });
  app.add_option("--threads", g.threads, "worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", g.quiet, "suppress progress messages");

  GenArgs gen;
  auto* sgen = app.add_subcommand("gen", "build a generative (+ trainable) circuit as JSON");
  sgen->add_option("--n", gen.n, "qubits")->required();
  sgen->add_option("--layers", gen.layers, "CZ layers L (default ceil(ln n))");
  sgen->add_option("--p", gen.p, "edge rule: ln(n)/n, c/n:<c> or a probability");
  sgen->add_option("--tau2-preset", gen.tau2_preset, "constant | theorem");
  sgen->add_option("--tau2", gen.tau2, "explicit angle variance");
  sgen->add_option("--weight", gen.weight, "S used by the theorem preset")->check(CLI::PositiveNumber);
  sgen->add_option("--depth", gen.depth, "trainable brick layers");
  sgen->add_option("--init", gen.init, "uniform | zeros");
  sgen->add_option("--out", gen.out, "output JSON path or -")->required();

  FeaturesArgs feat;
  auto* sfeat = app.add_subcommand("features", "sample feature vectors from a circuit file");
  sfeat->add_option("--circuit", feat.circuit)->required();
  sfeat->add_option("--observables", feat.observables, "comma list, e.g. Z0,Z1Z2")->required();
  sfeat->add_option("--samples", feat.samples)->required();
  sfeat->add_option("--backend", feat.backend, "auto | statevector | propagation");
  sfeat->add_option("--tau2", feat.tau2, "angle variance when the file has no manifest");
  sfeat->add_option("--out", feat.out)->required();

  ExperimentArgs exp;
  auto* sexp = app.add_subcommand("experiment", "run an experiment config");
  sexp->add_option("--config", exp.config)->required();
  sexp->add_option("--out-dir", exp.out_dir);

  PlotArgs plot;
  auto* splot = app.add_subcommand("plot", "CSV columns to an SVG line chart");
  splot->add_option("--csv", plot.csv)->required();
  splot->add_option("--x", plot.x)->required();
  splot->add_option("--y", plot.y, "one or more columns, comma separated")->required();
  splot->add_option("--title", plot.title);
  splot->add_option("--out", plot.out)->required();

  BenchArgs bench;
  auto* sbench = app.add_subcommand("pauliprop-bench", "truncated Pauli propagation benchmark");
  sbench->add_option("--n", bench.n)->required()->delimiter(',');
  sbench->add_option("--policy", bench.policy, "exact[:max] or sine[:k]+coeff:e+weight:w+max:m");
  sbench->add_option("--trials", bench.trials);
  sbench->add_option("--layers", bench.layers);
  sbench->add_option("--p", bench.p);
  sbench->add_option("--tau2-preset", bench.tau2_preset);
  sbench->add_option("--tau2", bench.tau2);
  sbench->add_option("--depth", bench.depth, "trainable brick layers");
  sbench->add_option("--observable", bench.observable);
  sbench->add_option("--exact-max-n", bench.exact_max_n);
  sbench->add_flag("--no-timing", bench.no_timing, "write wall_time_s as null");
  sbench->add_option("--out", bench.out)->required();
  sbench->add_option("--summary", bench.summary, "per-n summary CSV");

  GraphArgs graph;
  auto* sgraph = app.add_subcommand("graph-stats", "treewidth bounds of interaction graphs");
  sgraph->add_option("--n", graph.n)->delimiter(',');
  sgraph->add_option("--p", graph.p);
  sgraph->add_option("--trials", graph.trials);
  sgraph->add_option("--layers", graph.layers);
  sgraph->add_option("--circuit", graph.circuit, "analyse this circuit instead of random graphs");
  sgraph->add_option("--support", graph.support, "light-cone support qubits, comma separated");
  sgraph->add_option("--out", graph.out)->required();

  ShadowArgs shadow;
  auto* sshadow = app.add_subcommand("shadows", "classical shadows of a circuit's generative state");
  sshadow->add_option("--circuit", shadow.circuit)->required();
  sshadow->add_option("--shots", shadow.shots)->required();
  sshadow->add_option("--groups", shadow.groups, "median-of-means groups");
  sshadow->add_option("--observables", shadow.observables, "estimate these through the trainable part");
  sshadow->add_option("--estimates", shadow.estimates, "CSV path for the estimates (default stdout)");
  sshadow->add_option("--out", shadow.out, "shadow CSV")->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ErrorCode::kUsage);
  }

  try {
    if (*sgen) return cmd_gen(gen, g, out);
    if (*sfeat) return cmd_features(feat, g, out);
    if (*sexp) return cmd_experiment(exp, g, out);
    if (*splot) return cmd_plot(plot, g, out);
    if (*sbench) return cmd_bench(bench, g, out);
    if (*sgraph) return cmd_graph_stats(graph, g, out);
    if (*sshadow) return cmd_shadows(shadow, g, out);
  } catch (const QgmError& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorCode::kUsage);
  }
  return static_cast<int>(ErrorCode::kUsage);
}

}  // namespace qgm::cli
