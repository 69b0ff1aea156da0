#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "graph.hpp"
#include "settings.hpp"
#include "solver.hpp"
#include "sym_matrix.hpp"

namespace corrgen {

enum class Method { DiagonalDominance, ChordalCholesky, PartialOrthogonalization, Convex };

std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view name);

struct SolverSettings {
  double tol = 1e-7;
  std::size_t max_iter = 20000;
  double epsilon = 1e-8;
  InfeasibilityDetector detector{};
};

struct ExperimentConfig {
  std::size_t p = 51;
  std::size_t runs = 50;
  std::uint64_t base_seed = 1;
  std::vector<GraphModel> graph_models{GraphModel::ErdosRenyi, GraphModel::BarabasiAlbert,
                                       GraphModel::WattsStrogatz, GraphModel::StochasticBlock,
                                       GraphModel::Chordal};
  std::vector<double> density_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> b_grid{-1.0, -0.5, 0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<Method> methods{Method::DiagonalDominance, Method::PartialOrthogonalization,
                              Method::Convex};
  /// Fixed density of the comparison, graph-type and real-data experiments.
  double density = 0.5;
  /// Mean bound of the graph-type experiment.
  double b = 0.2;
  /// Worker count; 0 means CORRGEN_THREADS or the hardware concurrency.
  std::size_t threads = 0;
  SolverSettings solver{};
  NumericalSettings numerics{};

  /// p = 20, runs = 10.
  static ExperimentConfig quick();
  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});
nlohmann::json to_json(const ExperimentConfig& cfg);

/// One generated matrix. `status` is a SolveStatus name for the convex
/// method, "Generated" for a baseline that succeeded, or "Failed:<ErrorCode>".
struct RunRecord {
  std::string method;
  std::string graph_model;
  double density = 0.0;        // target
  double graph_density = 0.0;  // realised
  double b = -1.0;
  std::uint64_t seed = 0;
  std::string status;
  bool valid = false;          // passed the shared validator
  std::size_t iterations = 0;
  double wall_time_s = 0.0;
  double achieved_mean = 0.0;
  double min_eigenvalue = 0.0;
  std::vector<double> values;  // nonzero upper-triangle off-diagonal entries
};

/// True for a status that produced a matrix meant to be valid.
bool produced_matrix(const RunRecord& r) noexcept;

struct FeasibilityCell {
  double density = 0.0;
  double b = 0.0;
  std::size_t runs = 0;
  std::size_t converged = 0;
  std::size_t infeasible = 0;
  std::size_t iteration_cap = 0;
  std::size_t failed = 0;
  std::size_t invalid = 0;  // converged but rejected by the validator
  double proportion() const noexcept {
    return runs ? static_cast<double>(converged) / static_cast<double>(runs) : 0.0;
  }
};

struct RealDataResult {
  Graph graph;
  double b;
  SolverReport report;
  std::vector<double> empirical;  // input entries on the retained edges
  std::vector<double> generated;  // output entries on the same edges
};

/// Methods x runs on Erdos-Renyi graphs at cfg.density. Convex runs use a
/// U[-1, 1] seed matrix and b = -1.
std::vector<RunRecord> exp_method_comparison(const ExperimentConfig& cfg);
/// Every method on every graph model at cfg.density, b = -1 for the convex
/// method. Chordal runs triangulate non-chordal graphs first.
std::vector<RunRecord> exp_constraint_suite(const ExperimentConfig& cfg);
/// ER graphs over density_grid x b_grid; a cell's proportion is the share of
/// runs whose projection converged. The same graph and seed matrix are used
/// for every b at a given (density, run).
std::vector<FeasibilityCell> exp_feasibility_sweep(const ExperimentConfig& cfg);
/// Convex method on every model at cfg.density with mean bound cfg.b.
std::vector<RunRecord> exp_graph_type_sweep(const ExperimentConfig& cfg);
/// Convex method timing, models x density_grid x runs, b = -1.
std::vector<RunRecord> exp_timing(const ExperimentConfig& cfg);
/// Thresholds `empirical` to density d, sets b to the mean of the retained
/// entries and projects the empirical matrix itself.
RealDataResult exp_real_data(const SymMatrix& empirical, double d, const ExperimentConfig& cfg);

struct SummaryCheck {
  std::string name;
  bool pass;
  bool hard;  // failing a hard check makes the experiment command fail
  std::string detail;
};

struct ExperimentOutput {
  std::string name;
  std::string file_name;
  std::string csv;
  std::vector<SummaryCheck> checks;
  nlohmann::json summary;

  bool hard_checks_pass() const noexcept;
};

/// Runs a named experiment ("comparison", "feasibility", "graphtypes",
/// "timing" or "realdata") and renders its CSV and summary. `realdata`
/// needs `empirical`.
ExperimentOutput run_experiment(std::string_view name, const ExperimentConfig& cfg,
                                const std::optional<SymMatrix>& empirical = std::nullopt);

/// The CSV with the named columns blanked, for reproducibility comparisons.
std::string strip_columns(const std::string& csv, const std::vector<std::string>& columns);

double median(std::vector<double> values);

/// CSV bodies (header row plus data rows); run_experiment() prepends
/// "# key=value" metadata lines.
void write_run_records_csv(std::ostream& out, const std::vector<RunRecord>& records,
                           bool with_values);
void write_feasibility_csv(std::ostream& out, const std::vector<FeasibilityCell>& cells);

}  // namespace corrgen
