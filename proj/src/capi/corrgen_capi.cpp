#include "corrgen/corrgen.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "core/baselines.hpp"
#include "core/error.hpp"
#include "core/experiments.hpp"
#include "core/graph.hpp"
#include "core/linalg.hpp"
#include "core/report_json.hpp"
#include "core/solver.hpp"
#include "core/validate.hpp"

struct corrgen_graph {
  corrgen::Graph g;
};

struct corrgen_matrix {
  corrgen::SymMatrix m;
};

struct corrgen_report {
  corrgen::SolverReport r;
  corrgen_matrix matrix;
  std::string json;
};

struct corrgen_validation {
  corrgen::ValidationReport v;
  std::string json;
};

struct corrgen_experiment {
  corrgen::ExperimentOutput out;
  std::string summary;
};

namespace {

thread_local std::string last_error;
thread_local std::string string_result;

corrgen_status code_of(corrgen::ErrorCode code) {
  using corrgen::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidInput: return CORRGEN_ERR_INVALID_INPUT;
    case ErrorCode::NumericalFailure: return CORRGEN_ERR_NUMERICAL_FAILURE;
    case ErrorCode::NotPositiveDefinite: return CORRGEN_ERR_NOT_POSITIVE_DEFINITE;
    case ErrorCode::NotChordal: return CORRGEN_ERR_NOT_CHORDAL;
    case ErrorCode::DegenerateRow: return CORRGEN_ERR_DEGENERATE_ROW;
    case ErrorCode::Io: return CORRGEN_ERR_IO;
  }
  return CORRGEN_ERR_INTERNAL;
}

corrgen_status set_error(corrgen_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <typename F>
corrgen_status guarded(F&& body) {
  try {
    body();
    return CORRGEN_OK;
  } catch (const corrgen::Error& e) {
    return set_error(code_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(CORRGEN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(CORRGEN_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(CORRGEN_ERR_INTERNAL, "unknown exception");
  }
}

void require(bool ok, const char* what) {
  if (!ok) corrgen::fail(corrgen::ErrorCode::InvalidInput, std::string(what) + " is null");
}

template <typename T>
void clear_out(T** out) {
  require(out != nullptr, "output pointer");
  *out = nullptr;
}

corrgen::ProblemSpec make_spec(const corrgen_graph* g, const corrgen_matrix* seed,
                               const corrgen_solver_options* options) {
  require(g != nullptr, "graph");
  require(seed != nullptr, "seed matrix");
  corrgen_solver_options opts;
  corrgen_solver_options_default(&opts);
  if (options) opts = *options;
  corrgen::ProblemSpec spec{g->g, seed->m};
  spec.b = opts.b;
  spec.tol = opts.tol;
  spec.max_iter = opts.max_iter;
  spec.epsilon = opts.epsilon;
  spec.detector.window = opts.detector_window;
  spec.detector.rel_change = opts.detector_rel_change;
  spec.detector.gap_factor = opts.detector_gap_factor;
  if (opts.numerics_json) {
    try {
      spec.numerics = corrgen::numerics_from_json(nlohmann::json::parse(opts.numerics_json));
    } catch (const nlohmann::json::exception& e) {
      corrgen::fail(corrgen::ErrorCode::InvalidInput, std::string("numerics: ") + e.what());
    }
  }
  return spec;
}

corrgen_report* wrap_report(corrgen::SolverReport r) {
  corrgen_matrix matrix{r.matrix};
  auto* out = new corrgen_report{std::move(r), std::move(matrix), {}};
  out->json = corrgen::to_json(out->r).dump(2);
  return out;
}

}  // namespace

extern "C" {

const char* corrgen_version(void) { return "0.1.0"; }

const char* corrgen_last_error(void) { return last_error.c_str(); }

const char* corrgen_status_name(corrgen_status status) {
  switch (status) {
    case CORRGEN_OK: return "ok";
    case CORRGEN_ERR_INVALID_INPUT: return "InvalidInput";
    case CORRGEN_ERR_NUMERICAL_FAILURE: return "NumericalFailure";
    case CORRGEN_ERR_NOT_POSITIVE_DEFINITE: return "NotPositiveDefinite";
    case CORRGEN_ERR_NOT_CHORDAL: return "NotChordal";
    case CORRGEN_ERR_DEGENERATE_ROW: return "DegenerateRow";
    case CORRGEN_ERR_IO: return "Io";
    case CORRGEN_ERR_INTERNAL: return "Internal";
  }
  return "unknown";
}

corrgen_status corrgen_graph_new(size_t p, corrgen_graph** out) {
  return guarded([&] {
    clear_out(out);
    *out = new corrgen_graph{corrgen::Graph(p)};
  });
}

corrgen_status corrgen_graph_add_edge(corrgen_graph* g, size_t u, size_t v) {
  return guarded([&] {
    require(g != nullptr, "graph");
    g->g.add_edge(u, v);
  });
}

corrgen_status corrgen_graph_copy(const corrgen_graph* g, corrgen_graph** out) {
  return guarded([&] {
    clear_out(out);
    require(g != nullptr, "graph");
    *out = new corrgen_graph{g->g};
  });
}

corrgen_status corrgen_graph_generate(const char* model, size_t p, double density, uint64_t seed,
                                      corrgen_graph** out) {
  return guarded([&] {
    clear_out(out);
    require(model != nullptr, "model");
    *out = new corrgen_graph{
        corrgen::generate_graph(corrgen::parse_graph_model(model), p, density, seed)};
  });
}

corrgen_status corrgen_graph_erdos_renyi(size_t p, double edge_prob, uint64_t seed,
                                         corrgen_graph** out) {
  return guarded([&] {
    clear_out(out);
    *out = new corrgen_graph{corrgen::erdos_renyi(p, edge_prob, seed)};
  });
}

corrgen_status corrgen_graph_barabasi_albert(size_t p, size_t m, uint64_t seed,
                                             corrgen_graph** out) {
  return guarded([&] {
    clear_out(out);
    *out = new corrgen_graph{corrgen::barabasi_albert(p, m, seed)};
  });
}

corrgen_status corrgen_graph_watts_strogatz(size_t p, size_t k, double beta, uint64_t seed,
                                            corrgen_graph** out) {
  return guarded([&] {
    clear_out(out);
    *out = new corrgen_graph{corrgen::watts_strogatz(p, k, beta, seed)};
  });
}

corrgen_status corrgen_graph_stochastic_block(size_t n_blocks, const size_t* sizes,
                                              const double* probs, uint64_t seed,
                                              corrgen_graph** out) {
  return guarded([&] {
    clear_out(out);
    require(sizes != nullptr && probs != nullptr, "block description");
    std::vector<std::vector<double>> prob(n_blocks, std::vector<double>(n_blocks));
    for (size_t a = 0; a < n_blocks; ++a)
      for (size_t b = 0; b < n_blocks; ++b) prob[a][b] = probs[a * n_blocks + b];
    *out = new corrgen_graph{corrgen::stochastic_block_model(
        std::span<const std::size_t>(sizes, n_blocks), prob, seed)};
  });
}

corrgen_status corrgen_graph_threshold(const corrgen_matrix* c, double density,
                                       corrgen_graph** out) {
  return guarded([&] {
    clear_out(out);
    require(c != nullptr, "matrix");
    *out = new corrgen_graph{corrgen::threshold_to_density(c->m, density)};
  });
}

corrgen_status corrgen_graph_triangulate(const corrgen_graph* g, uint64_t seed,
                                         corrgen_graph** out) {
  return guarded([&] {
    clear_out(out);
    require(g != nullptr, "graph");
    *out = new corrgen_graph{corrgen::triangulate(g->g, seed)};
  });
}

corrgen_status corrgen_graph_is_chordal(const corrgen_graph* g, int* out) {
  return guarded([&] {
    require(g != nullptr && out != nullptr, "argument");
    *out = corrgen::maximum_cardinality_search(g->g).is_chordal ? 1 : 0;
  });
}

corrgen_status corrgen_graph_density(const corrgen_graph* g, double* out) {
  return guarded([&] {
    require(g != nullptr && out != nullptr, "argument");
    *out = corrgen::density(g->g);
  });
}

size_t corrgen_graph_vertex_count(const corrgen_graph* g) { return g ? g->g.vertex_count() : 0; }

size_t corrgen_graph_edge_count(const corrgen_graph* g) { return g ? g->g.edge_count() : 0; }

int corrgen_graph_has_edge(const corrgen_graph* g, size_t u, size_t v) {
  if (!g || u >= g->g.vertex_count() || v >= g->g.vertex_count()) return 0;
  return g->g.has_edge(u, v) ? 1 : 0;
}

corrgen_status corrgen_graph_edges(const corrgen_graph* g, size_t* uv, size_t capacity_pairs) {
  return guarded([&] {
    require(g != nullptr && uv != nullptr, "argument");
    const auto edges = g->g.edges();
    if (capacity_pairs < edges.size())
      corrgen::fail(corrgen::ErrorCode::InvalidInput, "edge buffer too small");
    for (size_t k = 0; k < edges.size(); ++k) {
      uv[2 * k] = edges[k].u;
      uv[2 * k + 1] = edges[k].v;
    }
  });
}

corrgen_status corrgen_graph_read(const char* path, corrgen_graph** out) {
  return guarded([&] {
    clear_out(out);
    require(path != nullptr, "path");
    *out = new corrgen_graph{corrgen::read_graph_file(path)};
  });
}

corrgen_status corrgen_graph_write(const corrgen_graph* g, const char* path) {
  return guarded([&] {
    require(g != nullptr && path != nullptr, "argument");
    corrgen::write_graph_file(path, g->g);
  });
}

const char* corrgen_graph_model_parameters(const char* model, size_t p, double density) {
  const auto status = guarded([&] {
    require(model != nullptr, "model");
    string_result =
        corrgen::describe_model_parameters(corrgen::parse_graph_model(model), p, density);
  });
  return status == CORRGEN_OK ? string_result.c_str() : nullptr;
}

void corrgen_graph_free(corrgen_graph* g) { delete g; }

corrgen_status corrgen_matrix_from_data(size_t p, const double* data, corrgen_matrix** out) {
  return guarded([&] {
    clear_out(out);
    require(data != nullptr || p == 0, "data");
    std::vector<double> entries(data, data + p * p);
    for (size_t i = 0; i < p; ++i)
      for (size_t j = i + 1; j < p; ++j)
        if (std::abs(entries[i * p + j] - entries[j * p + i]) > 1e-9)
          corrgen::fail(corrgen::ErrorCode::InvalidInput, "matrix is not symmetric");
    *out = new corrgen_matrix{corrgen::SymMatrix(p, std::move(entries))};
  });
}

corrgen_status corrgen_matrix_identity(size_t p, corrgen_matrix** out) {
  return guarded([&] {
    clear_out(out);
    *out = new corrgen_matrix{corrgen::SymMatrix::identity(p)};
  });
}

corrgen_status corrgen_matrix_uniform_seed(size_t p, uint64_t seed, corrgen_matrix** out) {
  return guarded([&] {
    clear_out(out);
    *out = new corrgen_matrix{corrgen::uniform_seed_matrix(p, seed)};
  });
}

corrgen_status corrgen_matrix_read_csv(const char* path, corrgen_matrix** out) {
  return guarded([&] {
    clear_out(out);
    require(path != nullptr, "path");
    *out = new corrgen_matrix{corrgen::read_matrix_csv_file(path)};
  });
}

corrgen_status corrgen_matrix_write_csv(const corrgen_matrix* m, const char* path) {
  return guarded([&] {
    require(m != nullptr && path != nullptr, "argument");
    corrgen::write_matrix_csv_file(path, m->m);
  });
}

size_t corrgen_matrix_dim(const corrgen_matrix* m) { return m ? m->m.dim() : 0; }

double corrgen_matrix_get(const corrgen_matrix* m, size_t i, size_t j) {
  if (!m || i >= m->m.dim() || j >= m->m.dim()) return 0.0;
  return m->m(i, j);
}

corrgen_status corrgen_matrix_copy_data(const corrgen_matrix* m, double* out, size_t capacity) {
  return guarded([&] {
    require(m != nullptr && out != nullptr, "argument");
    const auto entries = m->m.entries();
    if (capacity < entries.size())
      corrgen::fail(corrgen::ErrorCode::InvalidInput, "matrix buffer too small");
    std::copy(entries.begin(), entries.end(), out);
  });
}

corrgen_status corrgen_matrix_min_eigenvalue(const corrgen_matrix* m, double* out) {
  return guarded([&] {
    require(m != nullptr && out != nullptr, "argument");
    *out = corrgen::min_eigenvalue(m->m);
  });
}

void corrgen_matrix_free(corrgen_matrix* m) { delete m; }

corrgen_status corrgen_diagonal_dominance(const corrgen_graph* g, uint64_t seed, int perturb,
                                          corrgen_matrix** out) {
  return guarded([&] {
    clear_out(out);
    require(g != nullptr, "graph");
    *out = new corrgen_matrix{corrgen::diagonal_dominance(g->g, seed, perturb != 0)};
  });
}

corrgen_status corrgen_chordal_cholesky(const corrgen_graph* g, uint64_t seed,
                                        corrgen_matrix** out) {
  return guarded([&] {
    clear_out(out);
    require(g != nullptr, "graph");
    *out = new corrgen_matrix{corrgen::chordal_cholesky_sample(g->g, seed)};
  });
}

corrgen_status corrgen_partial_orthogonalization(const corrgen_graph* g, uint64_t seed,
                                                 size_t max_attempts, corrgen_matrix** out) {
  return guarded([&] {
    clear_out(out);
    require(g != nullptr, "graph");
    *out = new corrgen_matrix{
        corrgen::partial_orthogonalization_with_retry(g->g, seed, max_attempts)};
  });
}

void corrgen_solver_options_default(corrgen_solver_options* options) {
  if (!options) return;
  const corrgen::ProblemSpec defaults{corrgen::Graph(1), corrgen::SymMatrix::identity(1)};
  options->b = defaults.b;
  options->tol = defaults.tol;
  options->max_iter = defaults.max_iter;
  options->epsilon = defaults.epsilon;
  options->detector_window = defaults.detector.window;
  options->detector_rel_change = defaults.detector.rel_change;
  options->detector_gap_factor = defaults.detector.gap_factor;
  options->numerics_json = nullptr;
}

corrgen_status corrgen_solve(const corrgen_graph* g, const corrgen_matrix* seed,
                             const corrgen_solver_options* options, corrgen_report** out) {
  return guarded([&] {
    clear_out(out);
    *out = wrap_report(corrgen::solve(make_spec(g, seed, options)));
  });
}

corrgen_status corrgen_solve_with_guarantee(const corrgen_graph* g, const corrgen_matrix* seed,
                                            const corrgen_solver_options* options,
                                            corrgen_report** out) {
  return guarded([&] {
    clear_out(out);
    *out = wrap_report(corrgen::solve_with_guarantee(make_spec(g, seed, options)));
  });
}

corrgen_solve_status corrgen_report_status(const corrgen_report* r) {
  if (!r) return CORRGEN_SOLVE_ITERATION_CAP;
  switch (r->r.status) {
    case corrgen::SolveStatus::Converged: return CORRGEN_SOLVE_CONVERGED;
    case corrgen::SolveStatus::InfeasibleSuspected: return CORRGEN_SOLVE_INFEASIBLE_SUSPECTED;
    case corrgen::SolveStatus::IterationCap: return CORRGEN_SOLVE_ITERATION_CAP;
  }
  return CORRGEN_SOLVE_ITERATION_CAP;
}

size_t corrgen_report_iterations(const corrgen_report* r) { return r ? r->r.iterations : 0; }
double corrgen_report_min_eigenvalue(const corrgen_report* r) { return r ? r->r.min_eigenvalue : 0.0; }
double corrgen_report_achieved_mean(const corrgen_report* r) { return r ? r->r.achieved_mean : 0.0; }
double corrgen_report_objective(const corrgen_report* r) { return r ? r->r.objective : 0.0; }
double corrgen_report_wall_time(const corrgen_report* r) { return r ? r->r.wall_time_s : 0.0; }
const corrgen_matrix* corrgen_report_matrix(const corrgen_report* r) { return r ? &r->matrix : nullptr; }
const char* corrgen_report_json(const corrgen_report* r) { return r ? r->json.c_str() : ""; }
void corrgen_report_free(corrgen_report* r) { delete r; }

void corrgen_validation_tolerances_default(corrgen_validation_tolerances* tol) {
  if (!tol) return;
  const corrgen::ValidationTolerances d;
  *tol = {d.diagonal, d.min_eigenvalue, d.entry_bound, d.mean_slack};
}

corrgen_status corrgen_validate(const corrgen_matrix* c, const corrgen_graph* g, double b,
                                const corrgen_validation_tolerances* tol,
                                corrgen_validation** out) {
  return guarded([&] {
    clear_out(out);
    require(c != nullptr && g != nullptr, "argument");
    corrgen::ValidationTolerances t;
    if (tol) t = {tol->diagonal, tol->min_eigenvalue, tol->entry_bound, tol->mean_slack};
    auto report = corrgen::validate_correlation(c->m, g->g, b, t);
    auto json = corrgen::to_json(report).dump(2);
    *out = new corrgen_validation{std::move(report), std::move(json)};
  });
}

int corrgen_validation_all_pass(const corrgen_validation* v) { return v && v->v.all_pass() ? 1 : 0; }

size_t corrgen_validation_check_count(const corrgen_validation* v) { return v ? v->v.checks.size() : 0; }

corrgen_status corrgen_validation_check(const corrgen_validation* v, size_t index,
                                        const char** name, int* pass, double* measured,
                                        double* limit, double* slack) {
  return guarded([&] {
    require(v != nullptr, "validation");
    if (index >= v->v.checks.size())
      corrgen::fail(corrgen::ErrorCode::InvalidInput, "check index out of range");
    const auto& c = v->v.checks[index];
    if (name) *name = c.name.c_str();
    if (pass) *pass = c.pass ? 1 : 0;
    if (measured) *measured = c.measured;
    if (limit) *limit = c.limit;
    if (slack) *slack = c.slack;
  });
}

const char* corrgen_validation_json(const corrgen_validation* v) { return v ? v->json.c_str() : ""; }

void corrgen_validation_free(corrgen_validation* v) { delete v; }

corrgen_status corrgen_experiment_run(const char* name, const char* config_json, int quick,
                                      const corrgen_matrix* empirical, corrgen_experiment** out) {
  return guarded([&] {
    clear_out(out);
    require(name != nullptr, "experiment name");
    auto cfg = quick ? corrgen::ExperimentConfig::quick() : corrgen::ExperimentConfig{};
    if (config_json) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(config_json);
      } catch (const nlohmann::json::exception& e) {
        corrgen::fail(corrgen::ErrorCode::InvalidInput, std::string("config: ") + e.what());
      }
      cfg = corrgen::config_from_json(j, cfg);
    }
    std::optional<corrgen::SymMatrix> emp;
    if (empirical) emp = empirical->m;
    auto result = corrgen::run_experiment(name, cfg, emp);
    auto summary = result.summary.dump(2);
    *out = new corrgen_experiment{std::move(result), std::move(summary)};
  });
}

const char* corrgen_experiment_file_name(const corrgen_experiment* e) { return e ? e->out.file_name.c_str() : ""; }
const char* corrgen_experiment_csv(const corrgen_experiment* e) { return e ? e->out.csv.c_str() : ""; }
const char* corrgen_experiment_summary_json(const corrgen_experiment* e) { return e ? e->summary.c_str() : ""; }
int corrgen_experiment_hard_checks_pass(const corrgen_experiment* e) { return e && e->out.hard_checks_pass() ? 1 : 0; }
size_t corrgen_experiment_check_count(const corrgen_experiment* e) { return e ? e->out.checks.size() : 0; }

corrgen_status corrgen_experiment_check(const corrgen_experiment* e, size_t index,
                                        const char** name, int* pass, int* hard,
                                        const char** detail) {
  return guarded([&] {
    require(e != nullptr, "experiment");
    if (index >= e->out.checks.size())
      corrgen::fail(corrgen::ErrorCode::InvalidInput, "check index out of range");
    const auto& c = e->out.checks[index];
    if (name) *name = c.name.c_str();
    if (pass) *pass = c.pass ? 1 : 0;
    if (hard) *hard = c.hard ? 1 : 0;
    if (detail) *detail = c.detail.c_str();
  });
}

corrgen_status corrgen_experiment_write(const corrgen_experiment* e, const char* out_dir) {
  return guarded([&] {
    require(e != nullptr && out_dir != nullptr, "argument");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) corrgen::fail(corrgen::ErrorCode::Io, "cannot create " + std::string(out_dir));
    auto write = [](const fs::path& path, const std::string& text) {
      std::ofstream f(path, std::ios::binary);
      f << text;
      if (!f) corrgen::fail(corrgen::ErrorCode::Io, "cannot write " + path.string());
    };
    write(fs::path(out_dir) / e->out.file_name, e->out.csv);
    write(fs::path(out_dir) / (e->out.name + "_summary.json"), e->summary + "\n");
  });
}

void corrgen_experiment_free(corrgen_experiment* e) { delete e; }

}  // extern "C"
