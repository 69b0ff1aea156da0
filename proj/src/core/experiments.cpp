#include "experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "baselines.hpp"
#include "error.hpp"
#include "linalg.hpp"
#include "report_json.hpp"
#include "validate.hpp"

namespace corrgen {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 4> kMethodNames = {{
    {Method::DiagonalDominance, "diagdom"},
    {Method::ChordalCholesky, "chordal"},
    {Method::PartialOrthogonalization, "partial-orth"},
    {Method::Convex, "convex"},
}};

}  // namespace

std::string_view to_string(Method method) noexcept {
  for (const auto& [m, name] : kMethodNames)
    if (m == method) return name;
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (const auto& [m, n] : kMethodNames)
    if (n == name) return m;
  fail(ErrorCode::InvalidInput, "unknown method '" + std::string(name) +
                                    "' (expected diagdom, chordal, partial-orth or convex)");
}

ExperimentConfig ExperimentConfig::quick() {
  ExperimentConfig cfg;
  cfg.p = 20;
  cfg.runs = 10;
  return cfg;
}

void ExperimentConfig::validate() const {
  if (p < 3) fail(ErrorCode::InvalidInput, "experiments need p >= 3");
  if (runs < 1) fail(ErrorCode::InvalidInput, "runs must be at least 1");
  auto check_density = [](double d) {
    if (!(d > 0.0 && d <= 1.0)) fail(ErrorCode::InvalidInput, "densities must lie in (0, 1]");
  };
  check_density(density);
  for (double d : density_grid) check_density(d);
  for (double b_value : b_grid)
    if (!std::isfinite(b_value)) fail(ErrorCode::InvalidInput, "b grid values must be finite");
  if (!std::isfinite(b)) fail(ErrorCode::InvalidInput, "b must be finite");
  if (graph_models.empty()) fail(ErrorCode::InvalidInput, "graph_models is empty");
  if (methods.empty()) fail(ErrorCode::InvalidInput, "methods is empty");
  if (density_grid.empty() || b_grid.empty()) fail(ErrorCode::InvalidInput, "grids are empty");
  if (!(solver.tol > 0.0) || solver.max_iter < 1 || !(solver.epsilon >= 0.0) ||
      solver.detector.window < 1)
    fail(ErrorCode::InvalidInput, "invalid solver settings");
}

namespace {

template <typename T>
std::vector<T> array_of(const nlohmann::json& j, const char* key) {
  if (!j.is_array()) fail(ErrorCode::InvalidInput, std::string(key) + " must be an array");
  return j.get<std::vector<T>>();
}

double number_of(const nlohmann::json& j, const std::string& key) {
  if (!j.is_number()) fail(ErrorCode::InvalidInput, key + " must be a number");
  return j.get<double>();
}

std::size_t count_of(const nlohmann::json& j, const std::string& key) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    fail(ErrorCode::InvalidInput, key + " must be a non-negative integer");
  return j.get<std::size_t>();
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig cfg) {
  if (!j.is_object()) fail(ErrorCode::InvalidInput, "experiment config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "p") cfg.p = count_of(value, key);
      else if (key == "runs") cfg.runs = count_of(value, key);
      else if (key == "base_seed") cfg.base_seed = count_of(value, key);
      else if (key == "threads") cfg.threads = count_of(value, key);
      else if (key == "density") cfg.density = number_of(value, key);
      else if (key == "b") cfg.b = number_of(value, key);
      else if (key == "density_grid") cfg.density_grid = array_of<double>(value, "density_grid");
      else if (key == "b_grid") cfg.b_grid = array_of<double>(value, "b_grid");
      else if (key == "graph_models") {
        cfg.graph_models.clear();
        for (const auto& name : array_of<std::string>(value, "graph_models"))
          cfg.graph_models.push_back(parse_graph_model(name));
      } else if (key == "methods") {
        cfg.methods.clear();
        for (const auto& name : array_of<std::string>(value, "methods"))
          cfg.methods.push_back(parse_method(name));
      } else if (key == "solver") {
        if (!value.is_object()) fail(ErrorCode::InvalidInput, "solver must be an object");
        for (const auto& [sk, sv] : value.items()) {
          if (sk == "tol") cfg.solver.tol = number_of(sv, sk);
          else if (sk == "max_iter") cfg.solver.max_iter = count_of(sv, sk);
          else if (sk == "epsilon") cfg.solver.epsilon = number_of(sv, sk);
          else if (sk == "detector_window") cfg.solver.detector.window = count_of(sv, sk);
          else if (sk == "detector_rel_change") cfg.solver.detector.rel_change = number_of(sv, sk);
          else if (sk == "detector_gap_factor") cfg.solver.detector.gap_factor = number_of(sv, sk);
          else fail(ErrorCode::InvalidInput, "unknown solver key '" + sk + "'");
        }
      } else if (key == "numerics") {
        cfg.numerics = numerics_from_json(value, cfg.numerics);
      } else {
        fail(ErrorCode::InvalidInput, "unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("bad config value: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json models = nlohmann::json::array();
  for (auto m : cfg.graph_models) models.push_back(std::string(to_string(m)));
  nlohmann::json methods = nlohmann::json::array();
  for (auto m : cfg.methods) methods.push_back(std::string(to_string(m)));
  return {{"p", cfg.p},
          {"runs", cfg.runs},
          {"base_seed", cfg.base_seed},
          {"threads", cfg.threads},
          {"density", cfg.density},
          {"b", cfg.b},
          {"density_grid", cfg.density_grid},
          {"b_grid", cfg.b_grid},
          {"graph_models", models},
          {"methods", methods},
          {"solver",
           {{"tol", cfg.solver.tol},
            {"max_iter", cfg.solver.max_iter},
            {"epsilon", cfg.solver.epsilon},
            {"detector_window", cfg.solver.detector.window},
            {"detector_rel_change", cfg.solver.detector.rel_change},
            {"detector_gap_factor", cfg.solver.detector.gap_factor}}},
          {"numerics", to_json(cfg.numerics)}};
}

bool produced_matrix(const RunRecord& r) noexcept {
  return r.status == "Generated" || r.status == "Converged";
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double hi = values[mid];
  if (values.size() % 2) return hi;
  const double lo = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lo + hi);
}

namespace {

std::size_t worker_count(const ExperimentConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("CORRGEN_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs task(i) for i in [0, n) on a pool of workers. Tasks write into
// caller-owned slots, so the merged output order never depends on scheduling.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& task) {
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<double> nonzero_offdiag(const SymMatrix& c) {
  std::vector<double> out;
  for (std::size_t i = 0; i < c.dim(); ++i)
    for (std::size_t j = i + 1; j < c.dim(); ++j)
      if (c(i, j) != 0.0) out.push_back(c(i, j));
  return out;
}

std::uint64_t run_seed(const ExperimentConfig& cfg, std::size_t run) {
  return cfg.base_seed + static_cast<std::uint64_t>(run);
}

ProblemSpec make_problem(const ExperimentConfig& cfg, Graph g, SymMatrix seed_matrix, double b) {
  ProblemSpec spec{std::move(g), std::move(seed_matrix)};
  spec.b = b;
  spec.tol = cfg.solver.tol;
  spec.max_iter = cfg.solver.max_iter;
  spec.epsilon = cfg.solver.epsilon;
  spec.detector = cfg.solver.detector;
  spec.numerics = cfg.numerics;
  return spec;
}

// Post-processed output must be PSD to the eigensolver's accuracy.
constexpr ValidationTolerances kProcessedTolerances{1e-7, -1e-12, 1.0 + 1e-7, 1e-6};
// Raw solver output: a 2x2 minor with eigenvalue >= -1e-6 allows |c_ij| up to 1 + 1e-6.
constexpr ValidationTolerances kRawTolerances{1e-7, -1e-6, 1.0 + 1e-6, 1e-6};
constexpr ValidationTolerances kBaselineTolerances{1e-10, -1e-10, 1.0 + 1e-10, 1e-6};

void fill_from_matrix(RunRecord& r, const SymMatrix& c, const Graph& g, double b,
                      const ValidationTolerances& tol, const NumericalSettings& numerics) {
  const auto v = validate_correlation(c, g, b, tol, numerics);
  r.valid = v.all_pass();
  r.min_eigenvalue = v.min_eigenvalue;
  r.achieved_mean = edge_mean(c, g);
  r.values = nonzero_offdiag(c);
}

RunRecord run_method(Method method, GraphModel model, double target_density, double b,
                     std::uint64_t seed, const ExperimentConfig& cfg) {
  RunRecord r;
  r.method = std::string(to_string(method));
  r.graph_model = std::string(to_string(model));
  r.density = target_density;
  r.b = method == Method::Convex ? b : -1.0;
  r.seed = seed;
  try {
    Graph g = generate_graph(model, cfg.p, target_density, seed);
    const auto start = std::chrono::steady_clock::now();
    switch (method) {
      case Method::Convex: {
        auto spec = make_problem(cfg, g, uniform_seed_matrix(cfg.p, seed), b);
        const auto report = solve_with_guarantee(spec);
        r.status = std::string(to_string(report.status));
        r.iterations = report.iterations;
        r.wall_time_s = report.wall_time_s;
        r.graph_density = density(g);
        if (report.status == SolveStatus::Converged) {
          fill_from_matrix(r, report.matrix, g, b, kProcessedTolerances, cfg.numerics);
        } else {
          r.min_eigenvalue = report.min_eigenvalue;
          r.achieved_mean = report.achieved_mean;
        }
        return r;
      }
      case Method::DiagonalDominance: {
        const auto c = diagonal_dominance(g, seed, false);
        r.status = "Generated";
        fill_from_matrix(r, c, g, -1.0, kBaselineTolerances, cfg.numerics);
        break;
      }
      case Method::ChordalCholesky: {
        if (!maximum_cardinality_search(g).is_chordal) g = triangulate(g, seed);
        const auto c = chordal_cholesky_sample(g, seed, cfg.numerics);
        r.status = "Generated";
        fill_from_matrix(r, c, g, -1.0, kBaselineTolerances, cfg.numerics);
        break;
      }
      case Method::PartialOrthogonalization: {
        const auto c = partial_orthogonalization_with_retry(g, seed, 10, cfg.numerics);
        r.status = "Generated";
        fill_from_matrix(r, c, g, -1.0, kBaselineTolerances, cfg.numerics);
        break;
      }
    }
    r.graph_density = density(g);
    r.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  } catch (const Error& e) {
    r.status = std::string("Failed:") + to_string(e.code());
  }
  return r;
}

std::string join_doubles(const std::vector<double>& v, char sep) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += sep;
    out += format_double(v[k]);
  }
  return out;
}

}  // namespace

std::vector<RunRecord> exp_method_comparison(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.methods.size() * cfg.runs;
  std::vector<RunRecord> out(n);
  parallel_for(n, worker_count(cfg), [&](std::size_t k) {
    const Method m = cfg.methods[k / cfg.runs];
    out[k] = run_method(m, GraphModel::ErdosRenyi, cfg.density, -1.0, run_seed(cfg, k % cfg.runs),
                        cfg);
  });
  return out;
}

std::vector<RunRecord> exp_constraint_suite(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t per_model = cfg.methods.size() * cfg.runs;
  const std::size_t n = cfg.graph_models.size() * per_model;
  std::vector<RunRecord> out(n);
  parallel_for(n, worker_count(cfg), [&](std::size_t k) {
    const GraphModel model = cfg.graph_models[k / per_model];
    const Method m = cfg.methods[(k % per_model) / cfg.runs];
    out[k] = run_method(m, model, cfg.density, -1.0, run_seed(cfg, k % cfg.runs), cfg);
  });
  return out;
}

std::vector<FeasibilityCell> exp_feasibility_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t nd = cfg.density_grid.size();
  const std::size_t nb = cfg.b_grid.size();
  const std::size_t n = nd * cfg.runs * nb;
  // Per task: 0 converged+valid, 1 converged+invalid, 2 infeasible, 3 cap, 4 failed.
  std::vector<int> outcome(n, 4);
  parallel_for(n, worker_count(cfg), [&](std::size_t k) {
    const std::size_t di = k / (cfg.runs * nb);
    const std::size_t run = (k / nb) % cfg.runs;
    const std::size_t bi = k % nb;
    const std::uint64_t seed = run_seed(cfg, run);
    const double b = cfg.b_grid[bi];
    try {
      Graph g = generate_graph(GraphModel::ErdosRenyi, cfg.p, cfg.density_grid[di], seed);
      auto spec = make_problem(cfg, g, uniform_seed_matrix(cfg.p, seed), b);
      const auto report = solve(spec);
      switch (report.status) {
        case SolveStatus::Converged:
          outcome[k] = validate_correlation(report.matrix, g, b, kRawTolerances, cfg.numerics).all_pass() ? 0 : 1;
          break;
        case SolveStatus::InfeasibleSuspected: outcome[k] = 2; break;
        case SolveStatus::IterationCap: outcome[k] = 3; break;
      }
    } catch (const Error&) {
      outcome[k] = 4;
    }
  });
  std::vector<FeasibilityCell> cells;
  for (std::size_t di = 0; di < nd; ++di)
    for (std::size_t bi = 0; bi < nb; ++bi) {
      FeasibilityCell c;
      c.density = cfg.density_grid[di];
      c.b = cfg.b_grid[bi];
      c.runs = cfg.runs;
      for (std::size_t run = 0; run < cfg.runs; ++run) {
        switch (outcome[(di * cfg.runs + run) * nb + bi]) {
          case 0: ++c.converged; break;
          case 1: ++c.converged; ++c.invalid; break;
          case 2: ++c.infeasible; break;
          case 3: ++c.iteration_cap; break;
          default: ++c.failed; break;
        }
      }
      cells.push_back(c);
    }
  return cells;
}

std::vector<RunRecord> exp_graph_type_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.graph_models.size() * cfg.runs;
  std::vector<RunRecord> out(n);
  parallel_for(n, worker_count(cfg), [&](std::size_t k) {
    out[k] = run_method(Method::Convex, cfg.graph_models[k / cfg.runs], cfg.density, cfg.b,
                        run_seed(cfg, k % cfg.runs), cfg);
  });
  return out;
}

std::vector<RunRecord> exp_timing(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t nd = cfg.density_grid.size();
  const std::size_t n = cfg.graph_models.size() * nd * cfg.runs;
  std::vector<RunRecord> out(n);
  parallel_for(n, worker_count(cfg), [&](std::size_t k) {
    const auto model = cfg.graph_models[k / (nd * cfg.runs)];
    const double d = cfg.density_grid[(k / cfg.runs) % nd];
    out[k] = run_method(Method::Convex, model, d, -1.0, run_seed(cfg, k % cfg.runs), cfg);
    out[k].values.clear();
  });
  return out;
}

RealDataResult exp_real_data(const SymMatrix& empirical, double d, const ExperimentConfig& cfg) {
  for (std::size_t i = 0; i < empirical.dim(); ++i)
    if (std::abs(empirical(i, i) - 1.0) > 1e-9)
      fail(ErrorCode::InvalidInput, "empirical matrix must have a unit diagonal");
  if (empirical.max_abs_offdiag() > 1.0 + 1e-9)
    fail(ErrorCode::InvalidInput, "empirical matrix has entries outside [-1, 1]");
  if (!empirical.all_finite()) fail(ErrorCode::InvalidInput, "empirical matrix is not finite");

  Graph g = threshold_to_density(empirical, d);
  const double b = g.edge_count() > 0 ? edge_mean(empirical, g) : -1.0;
  auto spec = make_problem(cfg, g, empirical, b);
  auto report = solve_with_guarantee(spec);
  RealDataResult out{g, b, std::move(report), {}, {}};
  for (const Edge& e : g.edges()) {
    out.empirical.push_back(empirical(e.u, e.v));
    out.generated.push_back(out.report.matrix(e.u, e.v));
  }
  return out;
}

void write_run_records_csv(std::ostream& out, const std::vector<RunRecord>& records,
                           bool with_values) {
  out << "method,graph_model,density,graph_density,b,seed,status,valid,iterations,"
         "achieved_mean,min_eigenvalue,wall_time_s";
  if (with_values) out << ",values";
  out << '\n';
  for (const auto& r : records) {
    out << r.method << ',' << r.graph_model << ',' << format_double(r.density) << ','
        << format_double(r.graph_density) << ',' << format_double(r.b) << ',' << r.seed << ','
        << r.status << ',' << (r.valid ? 1 : 0) << ',' << r.iterations << ','
        << format_double(r.achieved_mean) << ',' << format_double(r.min_eigenvalue) << ','
        << format_double(r.wall_time_s);
    if (with_values) out << ',' << join_doubles(r.values, ';');
    out << '\n';
  }
}

void write_feasibility_csv(std::ostream& out, const std::vector<FeasibilityCell>& cells) {
  out << "density,b,runs,converged,infeasible_suspected,iteration_cap,failed,invalid,"
         "proportion,no_solution\n";
  for (const auto& c : cells)
    out << format_double(c.density) << ',' << format_double(c.b) << ',' << c.runs << ','
        << c.converged << ',' << c.infeasible << ',' << c.iteration_cap << ',' << c.failed << ','
        << c.invalid << ',' << format_double(c.proportion()) << ','
        << (c.converged == 0 ? 1 : 0) << '\n';
}

bool ExperimentOutput::hard_checks_pass() const noexcept {
  for (const auto& c : checks)
    if (c.hard && !c.pass) return false;
  return true;
}

std::string strip_columns(const std::string& csv, const std::vector<std::string>& columns) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  std::vector<std::size_t> drop;
  bool header_seen = false;
  auto split = [](const std::string& s) {
    std::vector<std::string> f;
    std::size_t start = 0;
    for (;;) {
      const auto comma = s.find(',', start);
      f.push_back(s.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return f;
  };
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) {
      out << line << '\n';
      continue;
    }
    auto fields = split(line);
    if (!header_seen) {
      header_seen = true;
      for (std::size_t k = 0; k < fields.size(); ++k)
        if (std::find(columns.begin(), columns.end(), fields[k]) != columns.end())
          drop.push_back(k);
    } else {
      for (std::size_t k : drop)
        if (k < fields.size()) fields[k].clear();
    }
    for (std::size_t k = 0; k < fields.size(); ++k) out << (k ? "," : "") << fields[k];
    out << '\n';
  }
  return out.str();
}

namespace {

void write_metadata(std::ostream& out, std::string_view name, const ExperimentConfig& cfg,
                    const std::vector<std::pair<std::string, std::string>>& extra) {
  out << "# experiment=" << name << '\n';
  out << "# p=" << cfg.p << '\n';
  out << "# runs=" << cfg.runs << '\n';
  out << "# base_seed=" << cfg.base_seed << '\n';
  out << "# solver_tol=" << format_double(cfg.solver.tol) << '\n';
  out << "# solver_max_iter=" << cfg.solver.max_iter << '\n';
  out << "# solver_epsilon=" << format_double(cfg.solver.epsilon) << '\n';
  out << "# detector_window=" << cfg.solver.detector.window << '\n';
  out << "# detector_rel_change=" << format_double(cfg.solver.detector.rel_change) << '\n';
  out << "# detector_gap_factor=" << format_double(cfg.solver.detector.gap_factor) << '\n';
  for (const auto& [k, v] : extra) out << "# " << k << '=' << v << '\n';
}

std::string grid_text(const std::vector<double>& grid) { return join_doubles(grid, ';'); }

std::string model_parameter_text(const std::vector<GraphModel>& models, std::size_t p,
                                 const std::vector<double>& densities) {
  std::string out;
  for (auto m : models)
    for (double d : densities) {
      if (!out.empty()) out += " | ";
      out += std::string(to_string(m)) + "@" + format_double(d) + ": " +
             describe_model_parameters(m, p, d);
    }
  return out;
}

std::size_t count_valid_failures(const std::vector<RunRecord>& records) {
  std::size_t bad = 0;
  for (const auto& r : records)
    if (produced_matrix(r) && !r.valid) ++bad;
  return bad;
}

std::vector<double> abs_values(const std::vector<RunRecord>& records, std::string_view method) {
  std::vector<double> out;
  for (const auto& r : records)
    if (r.method == method && produced_matrix(r))
      for (double v : r.values) out.push_back(std::abs(v));
  return out;
}

// At b = -1 the identity is feasible: an infeasibility verdict is a defect,
// while an iteration cap only means slow convergence.
void add_b_minus_one_checks(ExperimentOutput& out, const std::vector<RunRecord>& records) {
  std::size_t infeasible = 0, capped = 0, failed = 0;
  for (const auto& r : records) {
    if (r.method != "convex") continue;
    if (r.status == "InfeasibleSuspected") ++infeasible;
    else if (r.status == "IterationCap") ++capped;
    else if (r.status.rfind("Failed", 0) == 0) ++failed;
  }
  out.checks.push_back({"no_infeasible_at_b_minus_one", infeasible == 0 && failed == 0, true,
                        std::to_string(infeasible) + " infeasible, " + std::to_string(failed) +
                            " failed convex runs"});
  out.checks.push_back({"all_converged_at_b_minus_one", capped == 0, false,
                        std::to_string(capped) + " convex runs hit the iteration cap"});
}

ExperimentOutput comparison_output(const ExperimentConfig& cfg) {
  const auto records = exp_method_comparison(cfg);
  ExperimentOutput out;
  out.name = "comparison";
  out.file_name = "comparison.csv";
  std::ostringstream csv;
  write_metadata(csv, out.name, cfg,
                 {{"graph_model", "er"},
                  {"density", format_double(cfg.density)},
                  {"b", "-1"},
                  {"seed_matrix", "uniform[-1,1]"},
                  {"diagdom_perturbation", "off"},
                  {"values", "nonzero upper-triangle off-diagonal entries, ';'-separated"}});
  write_run_records_csv(csv, records, true);
  out.csv = csv.str();

  const std::size_t invalid = count_valid_failures(records);
  out.checks.push_back({"outputs_valid", invalid == 0, true,
                        std::to_string(invalid) + " produced matrices failed validation"});
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.status.rfind("Failed", 0) == 0;
  out.checks.push_back({"no_failed_runs", failed == 0, true,
                        std::to_string(failed) + " runs raised an error"});
  add_b_minus_one_checks(out, records);
  nlohmann::json medians = nlohmann::json::object();
  for (auto m : cfg.methods) {
    const auto v = abs_values(records, to_string(m));
    medians[std::string(to_string(m))] = median(v);
  }
  out.summary["median_abs_value"] = medians;
  if (medians.contains("diagdom") && medians.contains("convex")) {
    const double dd = medians["diagdom"].get<double>();
    const double cv = medians["convex"].get<double>();
    out.checks.push_back({"diagdom_median_below_convex", dd < cv, false,
                          "diagdom " + format_double(dd) + " vs convex " + format_double(cv)});
  }
  return out;
}

ExperimentOutput feasibility_output(const ExperimentConfig& cfg) {
  const auto cells = exp_feasibility_sweep(cfg);
  ExperimentOutput out;
  out.name = "feasibility";
  out.file_name = "feasibility.csv";
  std::ostringstream csv;
  write_metadata(csv, out.name, cfg,
                 {{"graph_model", "er"},
                  {"density_grid", grid_text(cfg.density_grid)},
                  {"b_grid", grid_text(cfg.b_grid)},
                  {"seed_matrix", "uniform[-1,1]"},
                  {"success", "status Converged; no_solution=1 marks cells with proportion 0"}});
  write_feasibility_csv(csv, cells);
  out.csv = csv.str();

  std::size_t invalid = 0;
  bool full_at_minus_one = true;
  bool monotone = true;
  std::vector<std::string> zero_cells;
  const std::size_t nb = cfg.b_grid.size();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto& c = cells[k];
    invalid += c.invalid;
    if (c.b <= -1.0 && c.proportion() != 1.0) full_at_minus_one = false;
    if (c.converged == 0)
      zero_cells.push_back("d=" + format_double(c.density) + ",b=" + format_double(c.b));
  }
  // Monotonicity along increasing b at each density.
  for (std::size_t di = 0; di < cfg.density_grid.size(); ++di) {
    std::vector<std::pair<double, double>> col;
    for (std::size_t bi = 0; bi < nb; ++bi) {
      const auto& c = cells[di * nb + bi];
      col.emplace_back(c.b, c.proportion());
    }
    std::sort(col.begin(), col.end());
    for (std::size_t k = 1; k < col.size(); ++k)
      if (col[k].second > col[k - 1].second) monotone = false;
  }
  out.checks.push_back({"outputs_valid", invalid == 0, true,
                        std::to_string(invalid) + " converged matrices failed validation"});
  out.checks.push_back({"b_minus_one_always_feasible", full_at_minus_one, true,
                        "identity matrix is feasible whenever b <= -1"});
  out.checks.push_back({"proportion_nonincreasing_in_b", monotone, false,
                        "feasible sets shrink as b grows"});
  out.checks.push_back({"zero_proportion_cell_present", !zero_cells.empty(), false,
                        std::to_string(zero_cells.size()) + " cells with no solution"});
  out.summary["zero_cells"] = zero_cells;
  return out;
}

ExperimentOutput graphtypes_output(const ExperimentConfig& cfg) {
  const auto records = exp_graph_type_sweep(cfg);
  ExperimentOutput out;
  out.name = "graphtypes";
  out.file_name = "graphtypes.csv";
  std::ostringstream csv;
  write_metadata(csv, out.name, cfg,
                 {{"density", format_double(cfg.density)},
                  {"b", format_double(cfg.b)},
                  {"seed_matrix", "uniform[-1,1]"},
                  {"model_parameters",
                   model_parameter_text(cfg.graph_models, cfg.p, {cfg.density})},
                  {"values", "nonzero upper-triangle off-diagonal entries, ';'-separated"}});
  write_run_records_csv(csv, records, true);
  out.csv = csv.str();

  const std::size_t invalid = count_valid_failures(records);
  out.checks.push_back({"outputs_valid", invalid == 0, true,
                        std::to_string(invalid) + " produced matrices failed validation"});
  nlohmann::json per_model = nlohmann::json::object();
  for (auto m : cfg.graph_models) {
    const std::string name(to_string(m));
    std::vector<double> pooled;
    double min_mean = 2.0;
    std::size_t converged = 0;
    for (const auto& r : records) {
      if (r.graph_model != name || r.status != "Converged") continue;
      ++converged;
      min_mean = std::min(min_mean, r.achieved_mean);
      pooled.insert(pooled.end(), r.values.begin(), r.values.end());
    }
    double mean = 0.0;
    for (double v : pooled) mean += v;
    if (!pooled.empty()) mean /= static_cast<double>(pooled.size());
    per_model[name] = {{"converged", converged},
                       {"entry_mean", mean},
                       {"min_achieved_mean", converged ? min_mean : 0.0}};
    out.checks.push_back({"mean_bound_" + name, converged > 0 && min_mean >= cfg.b - 1e-6, false,
                          "min achieved mean " + format_double(min_mean)});
    out.checks.push_back({"entry_mean_window_" + name,
                          converged > 0 && mean >= 0.15 && mean <= 0.30, false,
                          "pooled entry mean " + format_double(mean) + " (window [0.15, 0.30])"});
  }
  out.summary["per_model"] = per_model;
  return out;
}

ExperimentOutput timing_output(const ExperimentConfig& cfg) {
  const auto records = exp_timing(cfg);
  ExperimentOutput out;
  out.name = "timing";
  out.file_name = "timing.csv";
  std::ostringstream csv;
  write_metadata(csv, out.name, cfg,
                 {{"density_grid", grid_text(cfg.density_grid)},
                  {"b", "-1"},
                  {"seed_matrix", "uniform[-1,1]"},
                  {"model_parameters",
                   model_parameter_text(cfg.graph_models, cfg.p, cfg.density_grid)}});
  write_run_records_csv(csv, records, false);
  out.csv = csv.str();

  const std::size_t invalid = count_valid_failures(records);
  out.checks.push_back({"outputs_valid", invalid == 0, true,
                        std::to_string(invalid) + " produced matrices failed validation"});
  add_b_minus_one_checks(out, records);

  const auto [lo, hi] = std::minmax_element(cfg.density_grid.begin(), cfg.density_grid.end());
  nlohmann::json medians = nlohmann::json::object();
  for (auto m : cfg.graph_models) {
    const std::string name(to_string(m));
    std::map<double, std::vector<double>> times;
    for (const auto& r : records)
      if (r.graph_model == name) times[r.density].push_back(r.wall_time_s);
    nlohmann::json per_density = nlohmann::json::object();
    for (const auto& [d, t] : times) per_density[format_double(d)] = median(t);
    medians[name] = per_density;
    if (*lo != *hi) {
      const double t_lo = median(times[*lo]);
      const double t_hi = median(times[*hi]);
      out.checks.push_back({"time_decreases_with_density_" + name, t_hi <= t_lo, false,
                            "median " + format_double(t_hi) + " s at d=" + format_double(*hi) +
                                " vs " + format_double(t_lo) + " s at d=" + format_double(*lo)});
    }
  }
  out.summary["median_wall_time_s"] = medians;
  return out;
}

ExperimentOutput realdata_output(const ExperimentConfig& cfg, const SymMatrix& empirical) {
  const auto result = exp_real_data(empirical, cfg.density, cfg);
  ExperimentOutput out;
  out.name = "realdata";
  out.file_name = "realdata.csv";
  std::ostringstream csv;
  write_metadata(csv, out.name, cfg,
                 {{"density", format_double(cfg.density)},
                  {"edges", std::to_string(result.graph.edge_count())},
                  {"b", format_double(result.b)},
                  {"status", std::string(to_string(result.report.status))},
                  {"objective", format_double(result.report.objective)}});
  csv << "source,i,j,value\n";
  const auto edges = result.graph.edges();
  for (std::size_t k = 0; k < edges.size(); ++k)
    csv << "empirical," << edges[k].u << ',' << edges[k].v << ','
        << format_double(result.empirical[k]) << '\n';
  for (std::size_t k = 0; k < edges.size(); ++k)
    csv << "generated," << edges[k].u << ',' << edges[k].v << ','
        << format_double(result.generated[k]) << '\n';
  out.csv = csv.str();

  const bool converged = result.report.status == SolveStatus::Converged;
  const auto v = validate_correlation(result.report.matrix, result.graph, result.b,
                                      kProcessedTolerances, cfg.numerics);
  out.checks.push_back({"converged", converged, true, std::string(to_string(result.report.status))});
  out.checks.push_back({"output_valid", converged && v.all_pass(), true, "shared validator"});
  double me = 0.0, mg = 0.0;
  for (double x : result.empirical) me += x;
  for (double x : result.generated) mg += x;
  if (!edges.empty()) {
    me /= static_cast<double>(edges.size());
    mg /= static_cast<double>(edges.size());
  }
  out.checks.push_back({"mean_close", std::abs(me - mg) <= 0.02, false,
                        "empirical " + format_double(me) + " vs generated " + format_double(mg)});
  out.summary["b"] = result.b;
  out.summary["solver"] = to_json(result.report);
  return out;
}

}  // namespace

ExperimentOutput run_experiment(std::string_view name, const ExperimentConfig& cfg,
                                const std::optional<SymMatrix>& empirical) {
  cfg.validate();
  ExperimentOutput out;
  if (name == "comparison") out = comparison_output(cfg);
  else if (name == "feasibility") out = feasibility_output(cfg);
  else if (name == "graphtypes") out = graphtypes_output(cfg);
  else if (name == "timing") out = timing_output(cfg);
  else if (name == "realdata") {
    if (!empirical) fail(ErrorCode::InvalidInput, "realdata needs an empirical matrix");
    out = realdata_output(cfg, *empirical);
  } else {
    fail(ErrorCode::InvalidInput, "unknown experiment '" + std::string(name) + "'");
  }
  out.summary["experiment"] = out.name;
  out.summary["file"] = out.file_name;
  out.summary["config"] = to_json(cfg);
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : out.checks)
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"hard", c.hard}, {"detail", c.detail}});
  out.summary["checks"] = checks;
  out.summary["hard_checks_pass"] = out.hard_checks_pass();
  return out;
}

}  // namespace corrgen
