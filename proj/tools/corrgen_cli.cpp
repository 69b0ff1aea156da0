// Command-line front end. Talks to the library only through the C API.

#include <corrgen/corrgen.h>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kInvalidArgs = 2,
  kInfeasible = 3,
  kNumerical = 4,
};

struct GraphDeleter {
  void operator()(corrgen_graph* g) const { corrgen_graph_free(g); }
};
struct MatrixDeleter {
  void operator()(corrgen_matrix* m) const { corrgen_matrix_free(m); }
};
struct ReportDeleter {
  void operator()(corrgen_report* r) const { corrgen_report_free(r); }
};
struct ValidationDeleter {
  void operator()(corrgen_validation* v) const { corrgen_validation_free(v); }
};
struct ExperimentDeleter {
  void operator()(corrgen_experiment* e) const { corrgen_experiment_free(e); }
};
using GraphPtr = std::unique_ptr<corrgen_graph, GraphDeleter>;
using MatrixPtr = std::unique_ptr<corrgen_matrix, MatrixDeleter>;
using ReportPtr = std::unique_ptr<corrgen_report, ReportDeleter>;
using ValidationPtr = std::unique_ptr<corrgen_validation, ValidationDeleter>;
using ExperimentPtr = std::unique_ptr<corrgen_experiment, ExperimentDeleter>;

// Carries a library failure up to main() with the exit code it maps to.
struct CliError {
  int exit_code;
  std::string message;
};

int exit_code_for(corrgen_status status) {
  switch (status) {
    case CORRGEN_ERR_INVALID_INPUT:
    case CORRGEN_ERR_IO:
    case CORRGEN_ERR_NOT_CHORDAL: return kInvalidArgs;
    default: return kNumerical;
  }
}

void check(corrgen_status status, const std::string& context) {
  if (status == CORRGEN_OK) return;
  throw CliError{exit_code_for(status), context + ": " + corrgen_status_name(status) + ": " +
                                            corrgen_last_error()};
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{kInvalidArgs, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  if (!out) throw CliError{kInvalidArgs, "cannot write " + path};
}

nlohmann::json parse_json(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CliError{kInvalidArgs, what + ": " + e.what()};
  }
}

GraphPtr load_graph(const std::string& path) {
  corrgen_graph* g = nullptr;
  check(corrgen_graph_read(path.c_str(), &g), "reading graph " + path);
  return GraphPtr(g);
}

GraphPtr make_graph(const std::string& model, std::size_t p, double density, std::uint64_t seed) {
  corrgen_graph* g = nullptr;
  check(corrgen_graph_generate(model.c_str(), p, density, seed, &g), "generating graph");
  return GraphPtr(g);
}

MatrixPtr load_matrix(const std::string& path) {
  corrgen_matrix* m = nullptr;
  check(corrgen_matrix_read_csv(path.c_str(), &m), "reading matrix " + path);
  return MatrixPtr(m);
}

bool is_chordal(const corrgen_graph* g) {
  int chordal = 0;
  check(corrgen_graph_is_chordal(g, &chordal), "chordality test");
  return chordal != 0;
}

double graph_density(const corrgen_graph* g) {
  double d = 0.0;
  check(corrgen_graph_density(g, &d), "graph density");
  return d;
}

ValidationPtr validate(const corrgen_matrix* m, const corrgen_graph* g, double b,
                       const corrgen_validation_tolerances* tol = nullptr) {
  corrgen_validation* v = nullptr;
  check(corrgen_validate(m, g, b, tol, &v), "validation");
  return ValidationPtr(v);
}

void print_validation(const corrgen_validation* v) {
  for (std::size_t k = 0; k < corrgen_validation_check_count(v); ++k) {
    const char* name = nullptr;
    int pass = 0;
    double measured = 0.0, limit = 0.0, slack = 0.0;
    check(corrgen_validation_check(v, k, &name, &pass, &measured, &limit, &slack), "validation");
    std::cout << std::setprecision(10) << (pass ? "PASS " : "FAIL ") << name
              << " measured=" << measured + 0.0
              << " limit=" << limit << " slack=" << slack + 0.0 << '\n';
  }
}

struct SolverArgs {
  double b = -1.0;
  double tol = 1e-7;
  std::size_t max_iter = 20000;
  double epsilon = 1e-8;
  std::string numerics_path;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--b", b, "Lower bound on the mean edge entry; <= -1 disables it")
        ->capture_default_str();
    cmd.add_option("--tol", tol, "Convergence tolerance")->capture_default_str()->check(
        CLI::PositiveNumber);
    cmd.add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str()->check(
        CLI::PositiveNumber);
    cmd.add_option("--epsilon", epsilon, "Post-processing shift")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd.add_option("--numerics", numerics_path, "JSON file overriding numerical settings")
        ->check(CLI::ExistingFile);
  }
};

// Solves and writes outputs; returns the exit code for the solve status.
int run_solver(const corrgen_graph* g, const corrgen_matrix* seed, const SolverArgs& args,
               const std::string& out_path, const std::string& report_path,
               nlohmann::json report_extra) {
  corrgen_solver_options opts;
  corrgen_solver_options_default(&opts);
  opts.b = args.b;
  opts.tol = args.tol;
  opts.max_iter = args.max_iter;
  opts.epsilon = args.epsilon;
  std::string numerics;
  if (!args.numerics_path.empty()) {
    numerics = read_text(args.numerics_path);
    opts.numerics_json = numerics.c_str();
  }
  corrgen_report* raw = nullptr;
  check(corrgen_solve_with_guarantee(g, seed, &opts, &raw), "solve");
  ReportPtr report(raw);

  auto json = parse_json(corrgen_report_json(report.get()), "report");
  json["b"] = args.b;
  json["tol"] = args.tol;
  json["max_iter"] = args.max_iter;
  json["epsilon"] = args.epsilon;
  for (auto& [key, value] : report_extra.items()) json[key] = value;

  const auto status = corrgen_report_status(report.get());
  if (status == CORRGEN_SOLVE_CONVERGED) {
    const auto* matrix = corrgen_report_matrix(report.get());
    auto v = validate(matrix, g, args.b);
    json["validation"] = parse_json(corrgen_validation_json(v.get()), "validation");
    check(corrgen_matrix_write_csv(matrix, out_path.c_str()), "writing " + out_path);
    write_text(report_path, json.dump(2) + "\n");
    std::cout << "status=Converged iterations=" << corrgen_report_iterations(report.get())
              << " objective=" << corrgen_report_objective(report.get())
              << " min_eigenvalue=" << corrgen_report_min_eigenvalue(report.get())
              << " achieved_mean=" << corrgen_report_achieved_mean(report.get()) << '\n';
    std::cout << "wrote " << out_path << " and " << report_path << '\n';
    return corrgen_validation_all_pass(v.get()) ? kOk : kCheckFailed;
  }
  write_text(report_path, json.dump(2) + "\n");
  const bool infeasible = status == CORRGEN_SOLVE_INFEASIBLE_SUSPECTED;
  std::cerr << "status=" << (infeasible ? "InfeasibleSuspected" : "IterationCap")
            << " after " << corrgen_report_iterations(report.get())
            << " iterations; no matrix written, report in " << report_path << '\n';
  return infeasible ? kInfeasible : kNumerical;
}

struct GraphSource {
  std::string model;
  std::string path;
  std::size_t p = 51;
  double density = 0.5;
  std::uint64_t seed = 1;

  void add_to(CLI::App& cmd, bool with_seed) {
    auto* m = cmd.add_option("--graph-model", model, "Random graph model: er, ba, ws, sbm, chordal")
                  ->check(CLI::IsMember({"er", "ba", "ws", "sbm", "chordal"}));
    auto* g = cmd.add_option("--graph", path, "Edge-list graph file")->check(CLI::ExistingFile);
    m->excludes(g);
    cmd.add_option("--p", p, "Number of variables")->capture_default_str()->check(
        CLI::Range(3, 100000));
    cmd.add_option("--density", density, "Target graph density in (0, 1]")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    if (with_seed) cmd.add_option("--seed", seed, "Random seed")->capture_default_str();
  }

  GraphPtr load() const {
    if (!path.empty()) return load_graph(path);
    if (model.empty()) throw CliError{kInvalidArgs, "one of --graph-model or --graph is required"};
    return make_graph(model, p, density, seed);
  }
};

int cmd_graph(const GraphSource& src, const std::string& out_path, bool triangulate) {
  auto g = src.load();
  if (triangulate) {
    corrgen_graph* t = nullptr;
    check(corrgen_graph_triangulate(g.get(), src.seed, &t), "triangulation");
    g.reset(t);
  }
  std::cout << "p=" << corrgen_graph_vertex_count(g.get()) << '\n'
            << "edges=" << corrgen_graph_edge_count(g.get()) << '\n'
            << "density=" << graph_density(g.get()) << '\n'
            << "chordal=" << (is_chordal(g.get()) ? "true" : "false") << '\n';
  if (!src.model.empty())
    if (const char* params = corrgen_graph_model_parameters(src.model.c_str(), src.p, src.density))
      std::cout << "parameters=" << params << '\n';
  if (!out_path.empty()) {
    check(corrgen_graph_write(g.get(), out_path.c_str()), "writing " + out_path);
    std::cout << "wrote " << out_path << '\n';
  }
  return kOk;
}

int cmd_generate(const std::string& method, const GraphSource& src, const SolverArgs& solver,
                 bool perturb, const std::string& out_path, const std::string& report_path) {
  auto g = src.load();
  nlohmann::json info = {{"method", method},
                         {"seed", src.seed},
                         {"p", corrgen_graph_vertex_count(g.get())},
                         {"graph_density", graph_density(g.get())}};
  if (!src.model.empty()) {
    info["graph_model"] = src.model;
    info["target_density"] = src.density;
  } else {
    info["graph_file"] = src.path;
  }

  if (method == "convex") {
    corrgen_matrix* seed = nullptr;
    check(corrgen_matrix_uniform_seed(corrgen_graph_vertex_count(g.get()), src.seed, &seed),
          "seed matrix");
    MatrixPtr seed_matrix(seed);
    return run_solver(g.get(), seed_matrix.get(), solver, out_path, report_path, info);
  }

  corrgen_matrix* raw = nullptr;
  if (method == "diagdom") {
    info["perturb"] = perturb;
    check(corrgen_diagonal_dominance(g.get(), src.seed, perturb ? 1 : 0, &raw), method);
  } else if (method == "chordal") {
    const bool chordal = is_chordal(g.get());
    info["triangulated"] = !chordal;
    if (!chordal) {
      corrgen_graph* t = nullptr;
      check(corrgen_graph_triangulate(g.get(), src.seed, &t), "triangulation");
      const std::size_t before = corrgen_graph_edge_count(g.get());
      g.reset(t);
      std::cerr << "WARN graph is not chordal; triangulated it (" << before << " -> "
                << corrgen_graph_edge_count(g.get()) << " edges)\n";
      info["graph_density"] = graph_density(g.get());
    }
    check(corrgen_chordal_cholesky(g.get(), src.seed, &raw), method);
  } else {
    check(corrgen_partial_orthogonalization(g.get(), src.seed, 10, &raw), method);
  }
  MatrixPtr c(raw);
  auto v = validate(c.get(), g.get(), -1.0);
  info["status"] = "Generated";
  info["validation"] = parse_json(corrgen_validation_json(v.get()), "validation");
  check(corrgen_matrix_write_csv(c.get(), out_path.c_str()), "writing " + out_path);
  write_text(report_path, info.dump(2) + "\n");
  std::cout << "wrote " << out_path << " and " << report_path << '\n';
  if (!corrgen_validation_all_pass(v.get())) {
    print_validation(v.get());
    return kCheckFailed;
  }
  return kOk;
}

int cmd_solve(const std::string& graph_path, const std::string& seed_spec,
              const SolverArgs& solver, const std::string& out_path,
              const std::string& report_path) {
  auto g = load_graph(graph_path);
  MatrixPtr seed;
  nlohmann::json info = {{"graph_file", graph_path}, {"seed_matrix", seed_spec}};
  const std::string prefix = "uniform:";
  if (seed_spec.rfind(prefix, 0) == 0) {
    std::uint64_t s = 0;
    try {
      std::size_t used = 0;
      s = std::stoull(seed_spec.substr(prefix.size()), &used);
      if (used != seed_spec.size() - prefix.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw CliError{kInvalidArgs, "bad --seed-matrix value '" + seed_spec + "'"};
    }
    corrgen_matrix* raw = nullptr;
    check(corrgen_matrix_uniform_seed(corrgen_graph_vertex_count(g.get()), s, &raw),
          "seed matrix");
    seed.reset(raw);
  } else {
    seed = load_matrix(seed_spec);
  }
  if (corrgen_matrix_dim(seed.get()) != corrgen_graph_vertex_count(g.get()))
    throw CliError{kInvalidArgs, "seed matrix and graph dimensions differ"};
  return run_solver(g.get(), seed.get(), solver, out_path, report_path, info);
}

int cmd_validate(const std::string& matrix_path, const std::string& graph_path, double b) {
  auto m = load_matrix(matrix_path);
  auto g = load_graph(graph_path);
  if (corrgen_matrix_dim(m.get()) != corrgen_graph_vertex_count(g.get()))
    throw CliError{kInvalidArgs, "matrix and graph dimensions differ"};
  auto v = validate(m.get(), g.get(), b);
  print_validation(v.get());
  const bool ok = corrgen_validation_all_pass(v.get());
  std::cout << (ok ? "all constraints satisfied" : "constraint violations found") << '\n';
  return ok ? kOk : kCheckFailed;
}

struct ExperimentArgs {
  std::string name;
  bool quick = false;
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::size_t> p;
  std::optional<std::size_t> runs;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<double> density;
  std::optional<double> b;
  std::string matrix_path;
};

int cmd_experiment(const ExperimentArgs& args) {
  nlohmann::json cfg = nlohmann::json::object();
  if (!args.config_path.empty()) cfg = parse_json(read_text(args.config_path), args.config_path);
  if (!cfg.is_object()) throw CliError{kInvalidArgs, "config must be a JSON object"};
  if (args.p) cfg["p"] = *args.p;
  if (args.runs) cfg["runs"] = *args.runs;
  if (args.seed) cfg["base_seed"] = *args.seed;
  if (args.threads) cfg["threads"] = *args.threads;
  if (args.density) cfg["density"] = *args.density;
  if (args.b) cfg["b"] = *args.b;

  MatrixPtr empirical;
  if (!args.matrix_path.empty()) empirical = load_matrix(args.matrix_path);
  if (args.name == "realdata" && !empirical)
    throw CliError{kInvalidArgs, "realdata needs --matrix <csv>"};

  const std::string cfg_text = cfg.dump();
  corrgen_experiment* raw = nullptr;
  check(corrgen_experiment_run(args.name.c_str(), cfg_text.c_str(), args.quick ? 1 : 0,
                               empirical.get(), &raw),
        "experiment " + args.name);
  ExperimentPtr e(raw);
  check(corrgen_experiment_write(e.get(), args.out_dir.c_str()), "writing outputs");

  for (std::size_t k = 0; k < corrgen_experiment_check_count(e.get()); ++k) {
    const char* name = nullptr;
    const char* detail = nullptr;
    int pass = 0, hard = 0;
    check(corrgen_experiment_check(e.get(), k, &name, &pass, &hard, &detail), "checks");
    std::cout << (pass ? "PASS " : hard ? "FAIL " : "WARN ") << name << ": " << detail << '\n';
  }
  std::cout << "wrote " << args.out_dir << '/' << corrgen_experiment_file_name(e.get()) << '\n';
  return corrgen_experiment_hard_checks_pass(e.get()) ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate correlation matrices whose zero pattern follows a graph"};
  app.set_version_flag("--version", std::string(corrgen_version()));
  app.require_subcommand(1);

  GraphSource graph_src;
  std::string graph_out;
  bool graph_triangulate = false;
  auto* graph_cmd = app.add_subcommand("graph", "Generate or inspect a graph");
  graph_src.add_to(*graph_cmd, true);
  graph_cmd->add_option("--out", graph_out, "Write the edge list here");
  graph_cmd->add_flag("--triangulate", graph_triangulate, "Add fill-in edges to make it chordal");

  GraphSource gen_src;
  SolverArgs gen_solver;
  std::string gen_method;
  bool gen_perturb = false;
  std::string gen_out = "matrix.csv";
  std::string gen_report = "report.json";
  auto* gen_cmd = app.add_subcommand("generate", "Generate a correlation matrix for a graph");
  gen_cmd->add_option("--method", gen_method, "diagdom, chordal, partial-orth or convex")
      ->required()
      ->check(CLI::IsMember({"diagdom", "chordal", "partial-orth", "convex"}));
  gen_src.add_to(*gen_cmd, true);
  gen_solver.add_to(*gen_cmd);
  gen_cmd->add_flag("--perturb", gen_perturb, "Add a random diagonal perturbation (diagdom)");
  gen_cmd->add_option("--out", gen_out, "Matrix CSV output")->capture_default_str();
  gen_cmd->add_option("--report", gen_report, "JSON report output")->capture_default_str();

  std::string solve_graph;
  std::string solve_seed;
  SolverArgs solve_solver;
  std::string solve_out = "matrix.csv";
  std::string solve_report = "report.json";
  auto* solve_cmd = app.add_subcommand("solve", "Project a seed matrix onto the constraint set");
  solve_cmd->add_option("--graph", solve_graph, "Edge-list graph file")
      ->required()
      ->check(CLI::ExistingFile);
  solve_cmd->add_option("--seed-matrix", solve_seed, "Seed matrix CSV or uniform:SEED")
      ->required();
  solve_solver.add_to(*solve_cmd);
  solve_cmd->add_option("--out", solve_out, "Matrix CSV output")->capture_default_str();
  solve_cmd->add_option("--report", solve_report, "JSON report output")->capture_default_str();

  std::string val_matrix;
  std::string val_graph;
  double val_b = -1.0;
  auto* val_cmd = app.add_subcommand("validate", "Check a matrix against a graph and bound");
  val_cmd->add_option("--matrix", val_matrix, "Matrix CSV")->required();
  val_cmd->add_option("--graph", val_graph, "Edge-list graph file")->required();
  val_cmd->add_option("--b", val_b, "Mean bound; <= -1 skips the check")->capture_default_str();

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run an experiment and write its CSV");
  exp_cmd->add_option("name", exp.name, "comparison, feasibility, graphtypes, timing or realdata")
      ->required()
      ->check(CLI::IsMember({"comparison", "feasibility", "graphtypes", "timing", "realdata"}));
  exp_cmd->add_flag("--quick", exp.quick, "Small profile (p=20, runs=10)");
  exp_cmd->add_option("--config", exp.config_path, "JSON config file")->check(CLI::ExistingFile);
  exp_cmd->add_option("--out-dir", exp.out_dir, "Output directory")->capture_default_str();
  exp_cmd->add_option("--p", exp.p, "Number of variables");
  exp_cmd->add_option("--runs", exp.runs, "Runs per cell");
  exp_cmd->add_option("--seed", exp.seed, "Base seed");
  exp_cmd->add_option("--threads", exp.threads, "Worker threads (0 = automatic)");
  exp_cmd->add_option("--density", exp.density, "Graph density for single-density experiments");
  exp_cmd->add_option("--b", exp.b, "Mean bound for graphtypes");
  exp_cmd->add_option("--matrix", exp.matrix_path, "Empirical correlation matrix CSV (realdata)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidArgs;
  }

  try {
    if (*graph_cmd) return cmd_graph(graph_src, graph_out, graph_triangulate);
    if (*gen_cmd) {
      if (gen_src.model.empty() && gen_src.path.empty())
        throw CliError{kInvalidArgs, "one of --graph-model or --graph is required"};
      return cmd_generate(gen_method, gen_src, gen_solver, gen_perturb, gen_out, gen_report);
    }
    if (*solve_cmd) return cmd_solve(solve_graph, solve_seed, solve_solver, solve_out, solve_report);
    if (*val_cmd) return cmd_validate(val_matrix, val_graph, val_b);
    if (*exp_cmd) return cmd_experiment(exp);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.exit_code;
  }
  return kInvalidArgs;
}
