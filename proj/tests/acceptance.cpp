// Acceptance suite: one PASS/FAIL (or WARN) line per criterion; exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "core/experiments.hpp"
#include "core/graph.hpp"
#include "core/linalg.hpp"
#include "core/solver.hpp"
#include "core/sym_matrix.hpp"
#include "support/oracles.hpp"

using namespace corrgen;

namespace {

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail, bool soft = false) {
  const char* tag = pass ? "PASS" : soft ? "WARN" : "FAIL";
  if (!pass && !soft) ++failures;
  std::cout << tag << ' ' << name << ": " << detail << std::endl;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Graph path3() {
  Graph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  return g;
}

ProblemSpec make_spec(const Graph& g, const SymMatrix& seed, double b) {
  ProblemSpec spec{g, seed};
  spec.b = b;
  return spec;
}

void constraint_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  cfg.p = 51;
  cfg.runs = 50;
  cfg.density = 0.5;
  cfg.methods = {Method::DiagonalDominance, Method::ChordalCholesky,
                 Method::PartialOrthogonalization, Method::Convex};
  const auto records = exp_constraint_suite(cfg);
  std::size_t bad = 0, convex_negative = 0;
  std::string first_bad;
  for (const auto& r : records) {
    // Baselines are checked at 1e-10 and convex output at 1e-7 with
    // min eigenvalue >= -1e-12; both are at least as strict as required.
    if (!produced_matrix(r) || !r.valid || (r.method == "convex" && r.status != "Converged")) {
      if (first_bad.empty())
        first_bad = " first: " + r.method + "/" + r.graph_model + " seed " +
                    std::to_string(r.seed) + " " + r.status;
      ++bad;
    }
    if (r.method == "convex" && r.min_eigenvalue < 0.0) ++convex_negative;
  }
  const double elapsed = seconds_since(t0);
  report("constraint_suite", bad == 0 && convex_negative == 0 && elapsed < 1800.0,
         std::to_string(records.size()) + " matrices (4 methods x 5 models x 50 seeds, p=51, d=0.5), " +
             std::to_string(bad) + " invalid, " + std::to_string(convex_negative) +
             " convex with negative eigenvalue, " + fmt(elapsed) + " s" + first_bad);
}

void oracle_equivalence() {
  const SymMatrix seed(3, {1.0, 0.9, 0.6, 0.9, 1.0, 0.9, 0.6, 0.9, 1.0});
  const auto path = solve(make_spec(path3(), seed, -1.0));
  const auto path_grid = oracle::grid_search_projection(path3(), seed, -1.0);
  const double h = 1.0 / std::sqrt(2.0);
  const double closed_form = 0.36 + 2.0 * (0.9 - h) * (0.9 - h);
  const bool path_ok = path.status == SolveStatus::Converged && path_grid &&
                       std::abs(path.objective - path_grid->objective) <= 1e-3 &&
                       std::abs(path.objective - closed_form) <= 1e-6;
  report("oracle_path_graph_p3", path_ok,
         "objective " + fmt(path.objective) + ", closed form " + fmt(closed_form) + ", grid " +
             (path_grid ? fmt(path_grid->objective) : std::string("none")));

  const auto cases = oracle::random_oracle_cases(20, 2024);
  double worst = 0.0;
  std::size_t mismatched = 0;
  for (const auto& c : cases) {
    const auto r = solve(make_spec(c.graph, c.seed, c.b));
    if (r.status != SolveStatus::Converged) {
      ++mismatched;
      continue;
    }
    const double diff = std::abs(r.objective - c.expected.objective);
    worst = std::max(worst, diff);
    if (diff > 1e-3) ++mismatched;
  }
  report("oracle_random_instances", cases.size() == 20 && mismatched == 0,
         std::to_string(cases.size()) + " instances (p <= 4, <= 3 free entries), " +
             std::to_string(mismatched) + " mismatches, max |objective diff| " + fmt(worst));
}

void comparison_trend() {
  ExperimentConfig cfg;
  cfg.p = 51;
  cfg.runs = 50;
  cfg.density = 0.5;
  cfg.methods = {Method::DiagonalDominance, Method::Convex};
  const auto records = exp_method_comparison(cfg);
  std::vector<double> diagdom, convex;
  std::size_t unusable = 0;
  for (const auto& r : records) {
    if (!produced_matrix(r) || !r.valid) ++unusable;
    auto& dst = r.method == "diagdom" ? diagdom : convex;
    for (double v : r.values) dst.push_back(std::abs(v));
  }
  const double md = median(diagdom), mc = median(convex);
  report("comparison_median_trend", unusable == 0 && md < mc,
         "median |entry| diagdom " + fmt(md) + " < convex " + fmt(mc) + " over 50 ER seeds");
}

void feasibility_properties() {
  // Ten runs per cell instead of fifty keeps this near ten minutes on one core.
  ExperimentConfig cfg;
  cfg.p = 51;
  cfg.runs = 10;
  const auto cells = exp_feasibility_sweep(cfg);
  bool minus_one = true, monotone = true;
  std::size_t zero_cells = 0, invalid = 0;
  std::string zero_example;
  std::map<double, double> last;
  for (const auto& c : cells) {
    invalid += c.invalid;
    if (c.b <= -1.0 && c.proportion() != 1.0) minus_one = false;
    if (auto it = last.find(c.density); it != last.end() && c.proportion() > it->second)
      monotone = false;
    last[c.density] = c.proportion();
    if (c.proportion() == 0.0) {
      if (zero_cells++ == 0 || (c.density <= 0.2 && zero_example.empty()))
        zero_example = "d=" + fmt(c.density) + " b=" + fmt(c.b);
    }
  }
  report("feasibility_b_minus_one", minus_one && invalid == 0,
         "every b=-1 cell has proportion 1.0; " + std::to_string(invalid) +
             " converged outputs failed validation");
  report("feasibility_monotone_in_b", monotone, "proportion nonincreasing in b at each density");

  // On the path 1-2-3 the PSD region is x^2 + y^2 <= 1, so the edge mean is
  // at most 1/sqrt(2); a bound above that has no solution.
  const SymMatrix seed(3, {1.0, 0.9, 0.6, 0.9, 1.0, 0.9, 0.6, 0.9, 1.0});
  const double b_witness = 0.8;
  const auto witness = solve(make_spec(path3(), seed, b_witness));
  const bool witness_ok = witness.status == SolveStatus::InfeasibleSuspected &&
                          !oracle::grid_search_projection(path3(), seed, b_witness) &&
                          1.0 / std::sqrt(2.0) < b_witness;
  report("feasibility_zero_cell", zero_cells > 0 && witness_ok,
         std::to_string(zero_cells) + " cells at 0.0 (e.g. " + zero_example +
             "); path witness: mean <= 1/sqrt(2) < " + fmt(b_witness) + ", solver " +
             std::string(to_string(witness.status)));
}

void graph_type_property() {
  ExperimentConfig cfg;
  cfg.p = 51;
  cfg.runs = 50;
  cfg.density = 0.5;
  cfg.b = 0.2;
  const auto records = exp_graph_type_sweep(cfg);
  std::map<std::string, std::vector<double>> means;
  std::size_t below = 0, unconverged = 0;
  for (const auto& r : records) {
    if (r.status != "Converged") {
      ++unconverged;
      continue;
    }
    if (r.achieved_mean < cfg.b - 1e-6) ++below;
    means[r.graph_model].push_back(r.achieved_mean);
  }
  bool window = means.size() == cfg.graph_models.size();
  std::string detail;
  for (const auto& [model, v] : means) {
    double s = 0.0;
    for (double x : v) s += x;
    const double m = s / static_cast<double>(v.size());
    window = window && m >= 0.15 && m <= 0.30;
    detail += model + "=" + fmt(m) + " ";
  }
  report("graphtypes_mean_bound", below == 0,
         std::to_string(below) + " converged runs below b - 1e-6 (" +
             std::to_string(unconverged) + " not converged)");
  report("graphtypes_mean_window", window, "sample means in [0.15, 0.30]: " + detail);
}

void timing_trend() {
  ExperimentConfig cfg;
  cfg.p = 51;
  cfg.runs = 50;
  cfg.density_grid = {0.1, 0.9};
  cfg.threads = 1;
  const auto records = exp_timing(cfg);
  std::map<std::string, std::map<double, std::vector<double>>> times;
  for (const auto& r : records) times[r.graph_model][r.density].push_back(r.wall_time_s);
  for (const auto& [model, by_d] : times) {
    const double sparse = median(by_d.at(0.1)), dense = median(by_d.at(0.9));
    report("timing_trend_" + model, dense <= sparse,
           "median " + fmt(dense) + " s at d=0.9 vs " + fmt(sparse) + " s at d=0.1", true);
  }
}

void guarantee_footnote() {
  const Graph g = erdos_renyi(51, 0.5, 7);
  ProblemSpec spec = make_spec(g, uniform_seed_matrix(51, 7), 0.2);
  spec.epsilon = 0.1;
  const auto r = solve_with_guarantee(spec);
  const double lmin = r.status == SolveStatus::Converged ? min_eigenvalue(r.matrix) : -1.0;
  const double mean = edge_mean(r.matrix, g);
  // The bound holds to rounding: b (1 + eps) / (1 + eps) need not equal b.
  report("guarantee_epsilon_0_1",
         r.status == SolveStatus::Converged && mean >= 0.2 - 1e-12 && lmin >= 0.0,
         "b=0.2 eps=0.1: mean - b = " + fmt(mean - 0.2) + ", eigh min eigenvalue " + fmt(lmin));
}

void determinism() {
  ExperimentConfig cfg = ExperimentConfig::quick();
  cfg.p = 12;
  cfg.runs = 3;
  cfg.density_grid = {0.2, 0.6};
  cfg.b_grid = {-1.0, 0.3, 0.8};
  cfg.methods = {Method::DiagonalDominance, Method::ChordalCholesky,
                 Method::PartialOrthogonalization, Method::Convex};
  // Gram matrix of normalised random rows, used as the real-data input.
  const auto draws = uniform_seed_matrix(8, 5);
  std::vector<double> rows(8 * 3);
  for (std::size_t i = 0; i < 8; ++i) {
    double n = 0.0;
    for (std::size_t k = 0; k < 3; ++k) n += draws(i, (i + k + 1) % 8) * draws(i, (i + k + 1) % 8);
    for (std::size_t k = 0; k < 3; ++k) rows[i * 3 + k] = draws(i, (i + k + 1) % 8) / std::sqrt(n);
  }
  std::vector<double> gram(64);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 3; ++k) s += rows[i * 3 + k] * rows[j * 3 + k];
      gram[i * 8 + j] = i == j ? 1.0 : s;
    }
  const SymMatrix empirical(8, gram);

  std::string detail;
  bool same = true;
  for (const char* name : {"comparison", "feasibility", "graphtypes", "timing", "realdata"}) {
    ExperimentConfig a = cfg, b = cfg;
    a.threads = 1;
    b.threads = 3;
    const auto x = run_experiment(name, a, empirical);
    const auto y = run_experiment(name, b, empirical);
    const bool eq = strip_columns(x.csv, {"wall_time_s"}) == strip_columns(y.csv, {"wall_time_s"});
    same = same && eq;
    detail += std::string(name) + (eq ? "=same " : "=DIFFERENT ");
  }
  report("determinism", same, detail);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    constraint_suite();
    oracle_equivalence();
    comparison_trend();
    feasibility_properties();
    graph_type_property();
    timing_trend();
    guarantee_footnote();
    determinism();
  } catch (const std::exception& e) {
    std::cout << "FAIL unexpected_exception: " << e.what() << std::endl;
    ++failures;
  }
  std::cout << (failures ? "acceptance: FAILED " : "acceptance: all criteria passed ")
            << "(" << fmt(seconds_since(t0)) << " s)" << std::endl;
  return failures ? 1 : 0;
}
