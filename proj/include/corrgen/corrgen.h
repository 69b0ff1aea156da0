#ifndef CORRGEN_CORRGEN_H
#define CORRGEN_CORRGEN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CORRGEN_BUILDING_LIBRARY)
#    define CORRGEN_API __declspec(dllexport)
#  else
#    define CORRGEN_API __declspec(dllimport)
#  endif
#else
#  define CORRGEN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns a status; on failure, corrgen_last_error()
 * holds a message for the calling thread until its next failing call. */
typedef enum corrgen_status {
  CORRGEN_OK = 0,
  CORRGEN_ERR_INVALID_INPUT = 1,
  CORRGEN_ERR_NUMERICAL_FAILURE = 2,
  CORRGEN_ERR_NOT_POSITIVE_DEFINITE = 3,
  CORRGEN_ERR_NOT_CHORDAL = 4,
  CORRGEN_ERR_DEGENERATE_ROW = 5,
  CORRGEN_ERR_IO = 6,
  CORRGEN_ERR_INTERNAL = 7
} corrgen_status;

typedef enum corrgen_solve_status {
  CORRGEN_SOLVE_CONVERGED = 0,
  CORRGEN_SOLVE_INFEASIBLE_SUSPECTED = 1,
  CORRGEN_SOLVE_ITERATION_CAP = 2
} corrgen_solve_status;

typedef struct corrgen_graph corrgen_graph;
typedef struct corrgen_matrix corrgen_matrix;
typedef struct corrgen_report corrgen_report;
typedef struct corrgen_validation corrgen_validation;
typedef struct corrgen_experiment corrgen_experiment;

CORRGEN_API const char* corrgen_version(void);
CORRGEN_API const char* corrgen_last_error(void);
CORRGEN_API const char* corrgen_status_name(corrgen_status status);

/* Graphs. Vertices are 0-based. */
CORRGEN_API corrgen_status corrgen_graph_new(size_t p, corrgen_graph** out);
CORRGEN_API corrgen_status corrgen_graph_add_edge(corrgen_graph* g, size_t u, size_t v);
CORRGEN_API corrgen_status corrgen_graph_copy(const corrgen_graph* g, corrgen_graph** out);
/* model: "er", "ba", "ws", "sbm" or "chordal"; density in (0, 1]. */
CORRGEN_API corrgen_status corrgen_graph_generate(const char* model, size_t p, double density,
                                                  uint64_t seed, corrgen_graph** out);
CORRGEN_API corrgen_status corrgen_graph_erdos_renyi(size_t p, double edge_prob, uint64_t seed,
                                                     corrgen_graph** out);
CORRGEN_API corrgen_status corrgen_graph_barabasi_albert(size_t p, size_t m, uint64_t seed,
                                                         corrgen_graph** out);
CORRGEN_API corrgen_status corrgen_graph_watts_strogatz(size_t p, size_t k, double beta,
                                                        uint64_t seed, corrgen_graph** out);
/* probs is a row-major n_blocks x n_blocks symmetric matrix. */
CORRGEN_API corrgen_status corrgen_graph_stochastic_block(size_t n_blocks, const size_t* sizes,
                                                          const double* probs, uint64_t seed,
                                                          corrgen_graph** out);
/* Keeps the ceil(density * p(p-1)/2) largest |c_ij|. */
CORRGEN_API corrgen_status corrgen_graph_threshold(const corrgen_matrix* c, double density,
                                                   corrgen_graph** out);
CORRGEN_API corrgen_status corrgen_graph_triangulate(const corrgen_graph* g, uint64_t seed,
                                                     corrgen_graph** out);
CORRGEN_API corrgen_status corrgen_graph_is_chordal(const corrgen_graph* g, int* out);
CORRGEN_API corrgen_status corrgen_graph_density(const corrgen_graph* g, double* out);
CORRGEN_API size_t corrgen_graph_vertex_count(const corrgen_graph* g);
CORRGEN_API size_t corrgen_graph_edge_count(const corrgen_graph* g);
CORRGEN_API int corrgen_graph_has_edge(const corrgen_graph* g, size_t u, size_t v);
/* Writes edge_count pairs (u < v, lexicographic) into uv[2 * k], uv[2 * k + 1]. */
CORRGEN_API corrgen_status corrgen_graph_edges(const corrgen_graph* g, size_t* uv,
                                               size_t capacity_pairs);
CORRGEN_API corrgen_status corrgen_graph_read(const char* path, corrgen_graph** out);
CORRGEN_API corrgen_status corrgen_graph_write(const corrgen_graph* g, const char* path);
/* Derived generator parameters for a model at (p, density). The string
 * stays valid until the next call on the same thread. */
CORRGEN_API const char* corrgen_graph_model_parameters(const char* model, size_t p,
                                                       double density);
CORRGEN_API void corrgen_graph_free(corrgen_graph* g);

/* Symmetric matrices, row-major p x p. */
CORRGEN_API corrgen_status corrgen_matrix_from_data(size_t p, const double* data,
                                                    corrgen_matrix** out);
CORRGEN_API corrgen_status corrgen_matrix_identity(size_t p, corrgen_matrix** out);
/* Unit diagonal, off-diagonal entries uniform on [-1, 1]. */
CORRGEN_API corrgen_status corrgen_matrix_uniform_seed(size_t p, uint64_t seed,
                                                       corrgen_matrix** out);
CORRGEN_API corrgen_status corrgen_matrix_read_csv(const char* path, corrgen_matrix** out);
CORRGEN_API corrgen_status corrgen_matrix_write_csv(const corrgen_matrix* m, const char* path);
CORRGEN_API size_t corrgen_matrix_dim(const corrgen_matrix* m);
CORRGEN_API double corrgen_matrix_get(const corrgen_matrix* m, size_t i, size_t j);
CORRGEN_API corrgen_status corrgen_matrix_copy_data(const corrgen_matrix* m, double* out,
                                                    size_t capacity);
CORRGEN_API corrgen_status corrgen_matrix_min_eigenvalue(const corrgen_matrix* m, double* out);
CORRGEN_API void corrgen_matrix_free(corrgen_matrix* m);

/* Baseline generators. */
CORRGEN_API corrgen_status corrgen_diagonal_dominance(const corrgen_graph* g, uint64_t seed,
                                                      int perturb, corrgen_matrix** out);
/* Requires a chordal graph (CORRGEN_ERR_NOT_CHORDAL otherwise). */
CORRGEN_API corrgen_status corrgen_chordal_cholesky(const corrgen_graph* g, uint64_t seed,
                                                    corrgen_matrix** out);
CORRGEN_API corrgen_status corrgen_partial_orthogonalization(const corrgen_graph* g,
                                                             uint64_t seed, size_t max_attempts,
                                                             corrgen_matrix** out);

/* Solver. b <= -1 disables the mean bound. numerics_json may be NULL or a
 * JSON object overriding numerical settings. */
typedef struct corrgen_solver_options {
  double b;
  double tol;
  size_t max_iter;
  double epsilon;
  size_t detector_window;
  double detector_rel_change;
  double detector_gap_factor;
  const char* numerics_json;
} corrgen_solver_options;

CORRGEN_API void corrgen_solver_options_default(corrgen_solver_options* options);
CORRGEN_API corrgen_status corrgen_solve(const corrgen_graph* g, const corrgen_matrix* seed,
                                         const corrgen_solver_options* options,
                                         corrgen_report** out);
/* Solves with b scaled by (1 + epsilon), then shifts by epsilon so the
 * result is positive semidefinite and still meets the original bound. */
CORRGEN_API corrgen_status corrgen_solve_with_guarantee(const corrgen_graph* g,
                                                        const corrgen_matrix* seed,
                                                        const corrgen_solver_options* options,
                                                        corrgen_report** out);
CORRGEN_API corrgen_solve_status corrgen_report_status(const corrgen_report* r);
CORRGEN_API size_t corrgen_report_iterations(const corrgen_report* r);
CORRGEN_API double corrgen_report_min_eigenvalue(const corrgen_report* r);
CORRGEN_API double corrgen_report_achieved_mean(const corrgen_report* r);
CORRGEN_API double corrgen_report_objective(const corrgen_report* r);
CORRGEN_API double corrgen_report_wall_time(const corrgen_report* r);
/* Borrowed; owned by the report. */
CORRGEN_API const corrgen_matrix* corrgen_report_matrix(const corrgen_report* r);
CORRGEN_API const char* corrgen_report_json(const corrgen_report* r);
CORRGEN_API void corrgen_report_free(corrgen_report* r);

/* Validation. Pass NULL tolerances for the defaults. */
typedef struct corrgen_validation_tolerances {
  double diagonal;
  double min_eigenvalue;
  double entry_bound;
  double mean_slack;
} corrgen_validation_tolerances;

CORRGEN_API void corrgen_validation_tolerances_default(corrgen_validation_tolerances* tol);
CORRGEN_API corrgen_status corrgen_validate(const corrgen_matrix* c, const corrgen_graph* g,
                                            double b, const corrgen_validation_tolerances* tol,
                                            corrgen_validation** out);
CORRGEN_API int corrgen_validation_all_pass(const corrgen_validation* v);
CORRGEN_API size_t corrgen_validation_check_count(const corrgen_validation* v);
CORRGEN_API corrgen_status corrgen_validation_check(const corrgen_validation* v, size_t index,
                                                    const char** name, int* pass,
                                                    double* measured, double* limit,
                                                    double* slack);
CORRGEN_API const char* corrgen_validation_json(const corrgen_validation* v);
CORRGEN_API void corrgen_validation_free(corrgen_validation* v);

/* Experiments: "comparison", "feasibility", "graphtypes", "timing" or
 * "realdata" (the last needs an empirical matrix). config_json may be NULL;
 * its keys override the default or quick profile. */
CORRGEN_API corrgen_status corrgen_experiment_run(const char* name, const char* config_json,
                                                  int quick, const corrgen_matrix* empirical,
                                                  corrgen_experiment** out);
CORRGEN_API const char* corrgen_experiment_file_name(const corrgen_experiment* e);
CORRGEN_API const char* corrgen_experiment_csv(const corrgen_experiment* e);
CORRGEN_API const char* corrgen_experiment_summary_json(const corrgen_experiment* e);
CORRGEN_API int corrgen_experiment_hard_checks_pass(const corrgen_experiment* e);
CORRGEN_API size_t corrgen_experiment_check_count(const corrgen_experiment* e);
CORRGEN_API corrgen_status corrgen_experiment_check(const corrgen_experiment* e, size_t index,
                                                    const char** name, int* pass, int* hard,
                                                    const char** detail);
/* Writes <file_name> and <name>_summary.json into out_dir (created if missing). */
CORRGEN_API corrgen_status corrgen_experiment_write(const corrgen_experiment* e,
                                                    const char* out_dir);
CORRGEN_API void corrgen_experiment_free(corrgen_experiment* e);

#ifdef __cplusplus
}
#endif

#endif
