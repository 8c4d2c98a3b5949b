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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "dense_oracle.hpp"
#include "qgm/experiments.hpp"
#include "qgm/metrics.hpp"
#include "qgm/propagation.hpp"
#include "qgm/shadows.hpp"
#include "qgm/statevector.hpp"
#include "qgm/treewidth.hpp"

using namespace qgm;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kMaster = 20260417;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

fs::path g_out;

Circuit full_model(std::size_t n, std::uint64_t seed) {
  GenerativeSpec spec{n, default_generative_layers(n), default_edge_probability(n), kTau2Ceiling, seed};
  return compose(build_generative(spec), build_trainable(n, default_trainable_depth(n), mix_seed(seed, 1)));
}

// 1 ---------------------------------------------------------------------------
Outcome oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0;
  std::size_t circuits = 0;
  for (std::size_t n : {4u, 6u, 8u, 10u}) {
    for (std::size_t t = 0; t < 13; ++t) {
      const Circuit c = full_model(n, trial_seed(kMaster, n, t));
      const std::string obs = t % 2 ? std::string("X0Y1") : "Z" + std::to_string(n / 2);
      const auto o = PauliSum::single(parse_pauli(n, obs));
      const double sv = circuit_expectation(c, o);
      const double pp = propagate(c, o, TruncationPolicy::exact_mode()).expectation;
      worst = std::max(worst, std::abs(sv - pp));
      ++circuits;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst < 1e-9 && circuits >= 50 && secs < 120,
          std::to_string(circuits) + " circuits, max |Δ| = " + fmt("%.2e", worst) + ", " + fmt("%.1f", secs) + " s"};
}

// 2 ---------------------------------------------------------------------------
Outcome subvolume_theorem() {
  const auto start = std::chrono::steady_clock::now();
  const auto c = config_from_json({{"experiment", "subvolume"}, {"n", {4, 6, 8}}, {"layers", 2},
                                   {"tau2_preset", "theorem"}, {"observables", {"Z0"}}, {"samples", 2000},
                                   {"seed", kMaster}});
  const auto files = run_experiment(c, (g_out / "subvolume").string(), default_threads());
  Outcome o;
  for (const auto& row : files.result.rows) {
    const bool flag = std::get<std::string>(row.at("pass")) == "true";
    const bool chain = row.number("mean_I2") >= row.number("mean_tr_sq");
    o.pass = o.pass && flag && chain;
    o.detail += "n=" + fmt("%.0f", row.number("n")) + ": E[Tr²]=" + fmt("%.4f", row.number("mean_tr_sq")) + "±" +
                fmt("%.4f", row.number("se_tr_sq")) + " vs bound " + fmt("%.4f", row.number("bound")) +
                (chain ? "" : " (chain violated)") + "; ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.pass = o.pass && secs < 600;
  o.detail += fmt("%.1f s", secs);
  return o;
}

// 3 ---------------------------------------------------------------------------
Outcome bound_values() {
  const double a = theorem_bound(1, 2, 0.1), b = theorem_bound(2, 0, 0.05);
  return {std::abs(a - 0.05184) <= 1e-12 && std::abs(b - 0.016384) <= 1e-12,
          fmt("%.12f", a) + ", " + fmt("%.12f", b)};
}

// 4 ---------------------------------------------------------------------------
Outcome gradient_machinery() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0;
  std::size_t params = 0;
  for (std::size_t t = 0; t < 10; ++t) {
    const Circuit c = full_model(6, trial_seed(kMaster + 4, 6, t));
    PauliSum obs(6);
    obs.add(parse_pauli(6, "Z2"), 1.0, 0);
    obs.add(parse_pauli(6, "X3Z4"), 0.5, 0);
    for (std::size_t nu = 0; nu < c.theta().size(); ++nu, ++params) {
      auto th = c.theta();
      th[nu] += 1e-4;
      const double fp = circuit_expectation(c, obs, &th);
      th[nu] -= 2e-4;
      const double fm = circuit_expectation(c, obs, &th);
      worst = std::max(worst, std::abs(parameter_shift_gradient(c, nu, obs) - (fp - fm) / 2e-4));
    }
  }
  // Threshold frozen after calibration runs at seeds 1 and 2 (constant and
  // theorem presets), which gave slope gaps of 0.43 and 0.47.
  constexpr double kMinGap = 0.2;
  nlohmann::ordered_json calib{
      {"frozen_min_slope_gap", kMinGap},
      {"calibration_runs",
       {{{"seed", 1}, {"tau2_preset", "constant"}, {"n", {4, 6, 8, 10, 12}}, {"samples", 500},
         {"slope_log", -0.469}, {"slope_linear", -0.896}},
        {{"seed", 2}, {"tau2_preset", "theorem"}, {"n", {4, 6, 8, 10, 12}}, {"samples", 500},
         {"slope_log", -0.202}, {"slope_linear", -0.675}}}}};
  const auto c = config_from_json({{"experiment", "gradvar"}, {"n", {4, 5, 6, 7, 8, 9, 10, 11, 12}},
                                   {"samples", 500}, {"seed", kMaster}, {"calibration", calib}});
  const auto files = run_experiment(c, (g_out / "gradvar").string(), default_threads());
  const double s_log = files.result.rows[0].number("slope_fit");
  const double s_lin = files.result.rows[1].number("slope_fit");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-6 && s_log > s_lin && s_log - s_lin >= kMinGap,
          std::to_string(params) + " gradients, max |PS−FD| = " + fmt("%.2e", worst) + "; slope log-depth " +
              fmt("%.3f", s_log) + " vs linear " + fmt("%.3f", s_lin) + " (gap ≥ " + fmt("%.1f", kMinGap) + "), " +
              fmt("%.1f s", secs)};
}

// 5 ---------------------------------------------------------------------------
Outcome propagation_shape() {
  const auto start = std::chrono::steady_clock::now();
  const auto policy = [](std::size_t n) { return TruncationPolicy::sine(sine_cutoff_default(n)); };
  std::vector<double> peaks;
  std::string detail = "mean peak terms";
  for (std::size_t n : {8u, 12u, 16u, 20u}) {
    BenchmarkTemplate tpl;
    tpl.trainable_depth = default_trainable_depth(n);
    tpl.timing = false;
    const auto rows = benchmark_propagation({n}, tpl, policy, 10, kMaster, default_threads());
    double s = 0;
    for (const auto& r : rows) s += r.number("peak_terms");
    peaks.push_back(s / static_cast<double>(rows.size()));
    detail += " " + std::to_string(n) + ":" + fmt("%.0f", peaks.back());
  }
  bool increasing = true, accelerating = true;
  std::vector<double> ratio;
  for (std::size_t i = 1; i < peaks.size(); ++i) {
    increasing = increasing && peaks[i] > peaks[i - 1];
    ratio.push_back(peaks[i] / peaks[i - 1]);
  }
  detail += "; growth ratios";
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    detail += " " + fmt("%.2f", ratio[i]);
    if (i > 0) accelerating = accelerating && ratio[i] > ratio[i - 1];
  }
  // Row-level bound |exact − truncated| ≤ dropped_mass for n ≤ 10.
  BenchmarkTemplate small;
  small.timing = false;
  small.exact_max_n = 10;
  std::size_t rows_checked = 0, violations = 0;
  for (std::size_t n : {4u, 6u, 8u, 10u}) {
    small.trainable_depth = default_trainable_depth(n);
    for (const auto& r : benchmark_propagation({n}, small, policy, 10, kMaster + 5, default_threads())) {
      ++rows_checked;
      if (r.number("error_vs_exact") > r.number("dropped_mass") + 1e-12) ++violations;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  detail += std::string("; increasing ") + (increasing ? "yes" : "no") + ", ratios increasing " +
            (accelerating ? "yes" : "no") + "; error ≤ dropped_mass on " +
            std::to_string(rows_checked - violations) + "/" + std::to_string(rows_checked) + " rows, " +
            fmt("%.1f s", secs);
  return {increasing && accelerating && violations == 0, detail};
}

// 6 ---------------------------------------------------------------------------
Outcome entanglement_metrics() {
  bool ok = true;
  const auto near = [&](double a, double b) { ok = ok && std::abs(a - b) <= 1e-10; };
  const auto pure = [](std::vector<cplx> v) {
    ComplexMatrix m(v.size());
    for (std::size_t r = 0; r < v.size(); ++r)
      for (std::size_t c = 0; c < v.size(); ++c) m(r, c) = v[r] * std::conj(v[c]);
    return DensityMatrix(m);
  };
  const double h = std::numbers::sqrt2 / 2;
  near(distinguishability(DensityMatrix::maximally_mixed(3)), 0);
  near(distinguishability(pure({h, h})), 1);
  near(distinguishability(DensityMatrix(ComplexMatrix::diagonal({0.75, 0.25}))), 0.5);
  near(von_neumann_entropy(pure({0.6, 0.8})), 0);
  near(von_neumann_entropy(DensityMatrix::maximally_mixed(3)), 3);
  near(von_neumann_entropy(DensityMatrix(ComplexMatrix::diagonal({0.75, 0.25}))), 0.8112781245);
  near(weak_subvolume_gap(DensityMatrix::maximally_mixed(2)), 0);
  near(weak_subvolume_gap(pure({0, 0, 0, 1})), 2);
  near(hs_distance(ComplexMatrix::identity(4)), 0);
  near(hs_distance(ComplexMatrix::diagonal({1, -1})), std::numbers::sqrt2);
  near(hs_distance(pure({1, 0}).matrix()), h);
  const bool trivial = ok;

  std::mt19937_64 rng(kMaster);
  std::normal_distribution<double> g;
  std::size_t failures = 0;
  const std::vector<std::size_t> dims{2, 4, 8, 16, 32, 64};
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = dims[t % dims.size()];
    std::size_t m = 0;
    while ((std::size_t{1} << m) < d) ++m;
    const ComplexMatrix delta = traceless_part(qgm::testing::random_hermitian(d, rng));
    const double n1 = trace_norm(delta), n2 = delta.frobenius_norm();
    bool pass = n2 <= n1 * (1 + 1e-12) && n1 <= std::sqrt(double(d)) * n2 * (1 + 1e-12);

    ComplexMatrix a(d);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) a(r, c) = {g(rng), g(rng)};
    ComplexMatrix rm = a * a.adjoint();
    rm = rm * cplx(1.0 / rm.trace().real(), 0);
    for (std::size_t r = 0; r < d; ++r) rm(r, r) = rm(r, r).real();
    const DensityMatrix rho(rm, 1e-9);
    const double dist = distinguishability(rho);
    std::string letters(m, 'I');
    for (auto& ch : letters) ch = "IXYZ"[rng() % 4];
    if (letters == std::string(m, 'I')) letters[0] = 'Z';
    pass = pass && std::abs((qgm::testing::dense(letters) * rho.matrix()).trace().real()) <= dist + 1e-10;
    if (d <= 16) {
      const ComplexMatrix o = qgm::testing::random_hermitian(d, rng);
      double spec = 0;
      for (double l : hermitian_eigenvalues(o)) spec = std::max(spec, std::abs(l));
      pass = pass && std::abs((o * rho.matrix()).trace().real() - o.trace().real() / double(d)) <= dist * spec + 1e-10;
    }
    ComplexMatrix pert = traceless_part(qgm::testing::random_hermitian(d, rng));
    pert = pert * cplx((0.002 + 0.018 * (t % 10) / 9.0) / pert.frobenius_norm(), 0);
    const DensityMatrix close(ComplexMatrix::identity(d) * cplx(1.0 / d, 0) + pert, 1e-9);
    const double gap = weak_subvolume_gap(close), hs = hs_distance(close.matrix());
    pass = pass && std::abs(gap - double(d) / (2 * std::numbers::ln2) * hs * hs) <= 0.1 * gap;
    if (!pass) ++failures;
  }
  return {trivial && failures == 0, std::string("trivial values ") + (trivial ? "exact" : "WRONG") +
                                        "; property failures " + std::to_string(failures) + "/1000"};
}

// 7 ---------------------------------------------------------------------------
Outcome shadows() {
  const auto start = std::chrono::steady_clock::now();
  const StateVector state = run(build_generative({4, 2, 0.5, kTau2Ceiling, kMaster}));
  const auto z0 = parse_pauli(4, "Z0"), z01 = parse_pauli(4, "Z0Z1");
  const double t0 = expectation(state, z0), t01 = expectation(state, z01);
  int hit0 = 0, hit01 = 0;
  for (std::size_t rep = 0; rep < 100; ++rep) {
    const auto set = collect_shadows(state, 40000, mix_seed(kMaster, rep), default_threads());
    hit0 += std::abs(estimate_pauli(set, z0, 10) - t0) <= 0.1;
    hit01 += std::abs(estimate_pauli(set, z01, 10) - t01) <= 0.1;
  }
  std::string detail = "within 0.1: Z0 " + std::to_string(hit0) + "/100, Z0Z1 " + std::to_string(hit01) + "/100";
  bool var_ok = true;
  const std::size_t shots = 200;
  for (const char* text : {"X0", "X0Y1", "X0Y1Z2"}) {
    const auto p = parse_pauli(4, text);
    std::vector<double> est;
    for (std::size_t s = 0; s < 300; ++s)
      est.push_back(estimate_pauli_mean(collect_shadows(state, shots, mix_seed(kMaster + 7, s)), p));
    const double var = sample_stats(est).variance;
    const double cap = 1.5 * std::pow(3.0, double(p.weight())) / double(shots);
    var_ok = var_ok && var <= cap;
    detail += std::string("; Var[") + text + "]·N/3^k = " + fmt("%.2f", var / cap * 1.5);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {hit0 >= 95 && hit01 >= 95 && var_ok, detail + ", " + fmt("%.1f s", secs)};
}

// 8 ---------------------------------------------------------------------------
Outcome graph_analysis() {
  Rng rng(kMaster);
  std::size_t tested = 0, bracket_fail = 0, family_fail = 0;
  const auto check = [&](const LayerGraph& g) {
    ++tested;
    if (degeneracy(g) > min_fill_width(g).width) ++bracket_fail;
  };
  for (std::size_t n = 3; n <= 30; ++n) {
    LayerGraph path(n), cycle(n), clique(n), tree(n);
    for (std::size_t i = 0; i + 1 < n; ++i) path.add_edge(i, i + 1);
    cycle = path;
    cycle.add_edge(n - 1, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) clique.add_edge(i, j);
    for (std::size_t v = 1; v < n; ++v) tree.add_edge(v, rng() % v);
    for (const auto* g : {&path, &cycle, &clique, &tree}) check(*g);
    if (min_fill_width(path).width != 1 || min_fill_width(tree).width != 1 || degeneracy(tree) != 1) ++family_fail;
    if (min_fill_width(cycle).width != 2 || degeneracy(cycle) != 2) ++family_fail;
    if (min_fill_width(clique).width != n - 1 || degeneracy(clique) != n - 1) ++family_fail;
  }
  for (int t = 0; t < 300; ++t) check(sample_er_graph(5 + rng() % 100, uniform01(rng) * 0.2, rng));

  const auto rows = treewidth_trend({50, 100, 200}, EdgeRule{}, 20, kMaster, std::nullopt, default_threads());
  std::map<std::size_t, double> single, all;
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    for (const auto* r : {&rows[i], &rows[i + 1]}) {
      ++tested;
      if (r->number("degeneracy_lb") > r->number("minfill_ub")) ++bracket_fail;
    }
    single[std::size_t(rows[i].number("n"))] += rows[i].number("minfill_ub") / 20;
    all[std::size_t(rows[i].number("n"))] += rows[i + 1].number("minfill_ub") / 20;
  }
  const bool trend = single[50] < single[100] && single[100] < single[200];

  const auto lc = compute_experiment(
      config_from_json({{"experiment", "lightcone"}, {"n", {50, 100}}, {"samples", 100}, {"seed", kMaster}}));
  const double f50 = lc.rows[0].number("mean_frac"), f100 = lc.rows[1].number("mean_frac");
  const bool cone = lc.rows[1].number("L") == 5 && f100 >= f50;
  return {bracket_fail == 0 && family_fail == 0 && trend && cone,
          "lower ≤ upper on " + std::to_string(tested - bracket_fail) + "/" + std::to_string(tested) +
              " graphs; family mismatches " + std::to_string(family_fail) + "; mean min-fill G(n,ln n/n) " +
              fmt("%.1f", single[50]) + " < " + fmt("%.1f", single[100]) + " < " + fmt("%.1f", single[200]) +
              " (union of L layers " + fmt("%.1f", all[50]) + ", " + fmt("%.1f", all[100]) + ", " +
              fmt("%.1f", all[200]) + "); light-cone fraction n=100,L=5: " + fmt("%.4f", f100) +
              " (n=50: " + fmt("%.4f", f50) + ")"};
}

// 9 ---------------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

/// Runs every subcommand into `dir` with the given thread count.
int run_all_commands(const fs::path& dir, const std::string& threads) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto p = [&](const std::string& name) { return (dir / name).string(); };
  std::ostringstream sink;
  int failures = 0;
  const auto run = [&](std::vector<std::string> args) {
    args.insert(args.begin(), {"--quiet", "--threads", threads, "--seed", "99"});
    if (cli::run_cli(args, sink, sink) != 0) ++failures;
  };
  run({"gen", "--n", "7", "--depth", "2", "--out", p("circuit.json")});
  run({"gen", "--n", "6", "--tau2-preset", "theorem", "--out", p("gen_only.json")});
  run({"features", "--circuit", p("circuit.json"), "--observables", "Z0,Z3,X1Y2", "--samples", "40", "--out",
       p("features_sv.csv")});
  run({"features", "--circuit", p("circuit.json"), "--observables", "Z0,Z3", "--samples", "10", "--backend",
       "propagation", "--out", p("features_pp.csv")});
  const std::vector<nlohmann::ordered_json> configs{
      {{"experiment", "subvolume"}, {"n", {4, 6}}, {"samples", 100}, {"seed", 5}, {"tau2_preset", "theorem"}},
      {{"experiment", "gradvar"}, {"n", {4, 6}}, {"samples", 40}, {"seed", 5}},
      {{"experiment", "lightcone"}, {"n", {20, 40}}, {"samples", 30}, {"seed", 5}},
      {{"experiment", "pauliprop-bench"}, {"n", {6, 8}}, {"samples", 3}, {"seed", 5}, {"timing", false}},
      {{"experiment", "treewidth"}, {"n", {30, 60}}, {"samples", 4}, {"seed", 5}}};
  for (const auto& c : configs) {
    const std::string name = c["experiment"].get<std::string>() + ".config.json";
    std::ofstream(p(name)) << c.dump(2);
    run({"experiment", "--config", p(name), "--out-dir", p("experiments")});
  }
  run({"pauliprop-bench", "--n", "6,8,10", "--trials", "3", "--depth", "1", "--no-timing", "--out", p("bench.csv"),
       "--summary", p("bench_summary.csv")});
  run({"pauliprop-bench", "--n", "6,8", "--trials", "2", "--out", p("bench_timed.csv.timed")});
  run({"plot", "--csv", p("bench.csv"), "--x", "n", "--y", "peak_terms,final_terms", "--out", p("bench.svg")});
  run({"graph-stats", "--n", "30,60", "--trials", "3", "--out", p("graph.csv")});
  run({"graph-stats", "--circuit", p("circuit.json"), "--support", "0,3", "--out", p("graph_circuit.csv")});
  run({"shadows", "--circuit", p("circuit.json"), "--shots", "3000", "--out", p("shadows.csv"), "--observables",
       "Z0,Z1Z2", "--estimates", p("estimates.csv")});
  return failures;
}

/// Wall-clock columns differ between runs by nature; compare with them blanked.
std::string mask_timing(const std::string& csv) {
  auto rows = from_csv(csv);
  for (auto& r : rows) r.set("wall_time_s", Cell{std::monostate{}});
  return to_csv(rows);
}

Outcome determinism() {
  const fs::path a = g_out / "det_t1", b = g_out / "det_t3", c = g_out / "det_t1_again";
  const int failures = run_all_commands(a, "1") + run_all_commands(b, "3") + run_all_commands(c, "1");
  std::size_t files = 0, identical = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a);
    ++files;
    std::string x = slurp(entry.path()), y = slurp(b / rel), z = slurp(c / rel);
    if (rel.extension() == ".timed") {
      x = mask_timing(x);
      y = mask_timing(y);
      z = mask_timing(z);
    }
    if (!x.empty() && x == y && x == z) ++identical;
  }
  return {failures == 0 && files >= 20 && identical == files,
          std::to_string(identical) + "/" + std::to_string(files) +
              " output files byte-identical across 3 runs (threads 1, 3, 1); command failures " +
              std::to_string(failures) + "; timed benchmark compared with wall_time_s masked"};
}

}  // namespace

int main(int argc, char** argv) {
  g_out = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "qgm_acceptance";
  fs::create_directories(g_out);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle equivalence (exact propagation vs statevector)", oracle_equivalence},
      {"subvolume bound Monte Carlo", subvolume_theorem},
      {"theorem_bound closed-form values", bound_values},
      {"gradient machinery and variance contrast", gradient_machinery},
      {"truncated propagation growth shape", propagation_shape},
      {"entanglement metrics", entanglement_metrics},
      {"classical shadows", shadows},
      {"graph analysis", graph_analysis},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << i + 1 << ". " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " acceptance criteria passed" << std::endl;
  return failed;
}
