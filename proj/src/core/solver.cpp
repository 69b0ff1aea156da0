#include "solver.hpp"

#include <chrono>
#include <cmath>
#include <optional>

#include "error.hpp"
#include "linalg.hpp"
#include "rng.hpp"

namespace corrgen {

std::string_view to_string(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::InfeasibleSuspected: return "InfeasibleSuspected";
    case SolveStatus::IterationCap: return "IterationCap";
  }
  return "Unknown";
}

void ProblemSpec::validate() const {
  if (seed_matrix.dim() != graph.vertex_count())
    fail(ErrorCode::InvalidInput, "seed matrix dimension does not match graph");
  if (!seed_matrix.all_finite()) fail(ErrorCode::InvalidInput, "seed matrix has non-finite entries");
  if (!(tol > 0.0)) fail(ErrorCode::InvalidInput, "tol must be positive");
  if (max_iter < 1) fail(ErrorCode::InvalidInput, "max_iter must be at least 1");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    fail(ErrorCode::InvalidInput, "epsilon must be non-negative");
  if (!std::isfinite(b)) fail(ErrorCode::InvalidInput, "b must be finite");
  if (mean_constrained() && graph.edge_count() == 0)
    fail(ErrorCode::InvalidInput, "a mean bound b > -1 needs at least one edge");
  if (detector.window < 1) fail(ErrorCode::InvalidInput, "detector window must be positive");
}

SymMatrix project_pattern(const SymMatrix& a, const Graph& g) {
  const std::size_t p = a.dim();
  if (g.vertex_count() != p) fail(ErrorCode::InvalidInput, "dimension mismatch");
  std::vector<double> out(a.entries().begin(), a.entries().end());
  for (std::size_t i = 0; i < p; ++i) {
    out[i * p + i] = 1.0;
    for (std::size_t j = i + 1; j < p; ++j)
      if (!g.has_edge(i, j)) out[i * p + j] = out[j * p + i] = 0.0;
  }
  return from_symmetric_storage(p, std::move(out));
}

double edge_mean(const SymMatrix& a, const Graph& g) {
  if (g.vertex_count() != a.dim()) fail(ErrorCode::InvalidInput, "dimension mismatch");
  if (g.edge_count() == 0) return 0.0;
  double s = 0.0;
  for (const Edge& e : g.edges()) s += a(e.u, e.v) + a(e.v, e.u);
  return s / (2.0 * static_cast<double>(g.edge_count()));
}

SymMatrix project_mean_halfspace(const SymMatrix& a, const Graph& g, double b) {
  if (b <= -1.0) return a;
  if (g.edge_count() == 0)
    fail(ErrorCode::InvalidInput, "mean constraint needs at least one edge");
  const double m = edge_mean(a, g);
  if (m >= b) return a;
  const double shift = b - m;
  SymMatrix out = a;
  for (const Edge& e : g.edges()) out.set(e.u, e.v, a(e.u, e.v) + shift);
  return out;
}

SymMatrix uniform_seed_matrix(std::size_t p, std::uint64_t seed) {
  Rng rng(seed, Stream::SeedMatrix);
  SymMatrix m = SymMatrix::identity(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) m.set(i, j, rng.uniform(-1.0, 1.0));
  return m;
}

double objective(const SymMatrix& c, const SymMatrix& seed) {
  const double d = frobenius_distance(c, seed);
  return 0.5 * d * d;
}

SymMatrix post_process(const SymMatrix& c, double epsilon) {
  if (!(epsilon >= 0.0)) fail(ErrorCode::InvalidInput, "epsilon must be non-negative");
  if (epsilon == 0.0) return c;
  const std::size_t p = c.dim();
  const double scale = 1.0 / (1.0 + epsilon);
  std::vector<double> out(c.entries().begin(), c.entries().end());
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      out[i * p + j] = i == j ? (out[i * p + j] + epsilon) * scale : out[i * p + j] * scale;
  return from_symmetric_storage(p, std::move(out));
}

namespace {

// Dykstra iterate plus one correction term per set. The iterate and the
// corrections always sum to the seed matrix, so a run can be resumed after
// the halfspace moves.
struct DykstraState {
  SymMatrix x;
  SymMatrix inc_psd;
  SymMatrix inc_pattern;
  SymMatrix inc_mean;
  std::optional<Dense> basis;  // eigenvectors (as rows) of the last PSD step
  std::size_t iterations = 0;

  explicit DykstraState(const SymMatrix& seed)
      : x(seed),
        inc_psd(SymMatrix::zeros(seed.dim())),
        inc_pattern(SymMatrix::zeros(seed.dim())),
        inc_mean(SymMatrix::zeros(seed.dim())) {}
};

struct RunOutcome {
  SolveStatus status;
  double residual;
  double gap;
};

RunOutcome run_dykstra(DykstraState& st, const ProblemSpec& spec, double b,
                       std::size_t iteration_budget) {
  const Graph& g = spec.graph;
  const bool mean_active = b > -1.0;
  // For b <= 0 the identity is feasible, so a stagnating gap is only slow
  // convergence and the detector stays off.
  const bool detect = b > 0.0;
  const double gap_limit = spec.detector.gap_factor * spec.tol;
  std::optional<double> checkpoint_gap;
  double residual = 0.0;
  double gap = 0.0;

  for (std::size_t k = 1; k <= iteration_budget; ++k) {
    SymMatrix y = st.x + st.inc_psd;
    const auto eig = st.basis ? eigh_warm(y, *st.basis, spec.numerics) : eigh(y, spec.numerics);
    st.basis = eig.eigenvectors.transposed();
    SymMatrix x_psd = project_psd(eig);
    st.inc_psd = y - x_psd;

    y = x_psd + st.inc_pattern;
    SymMatrix x_next = project_pattern(y, g);
    st.inc_pattern = y - x_next;

    if (mean_active) {
      y = x_next + st.inc_mean;
      x_next = project_mean_halfspace(y, g, b);
      st.inc_mean = y - x_next;
    }

    residual = frobenius_distance(x_next, st.x);
    gap = frobenius_distance(x_next, x_psd);
    st.x = std::move(x_next);
    ++st.iterations;

    if (residual <= spec.tol && gap <= gap_limit) return {SolveStatus::Converged, residual, gap};
    if (detect && k % spec.detector.window == 0) {
      if (checkpoint_gap && gap > gap_limit &&
          std::abs(gap - *checkpoint_gap) < spec.detector.rel_change * gap)
        return {SolveStatus::InfeasibleSuspected, residual, gap};
      checkpoint_gap = gap;
    }
  }
  return {SolveStatus::IterationCap, residual, gap};
}

SolverReport make_report(const ProblemSpec& spec, SymMatrix matrix, const RunOutcome& run,
                         std::size_t iterations, double b_used,
                         std::chrono::steady_clock::time_point start) {
  SolverReport r{std::move(matrix)};
  r.status = run.status;
  r.iterations = iterations;
  r.min_eigenvalue = min_eigenvalue(r.matrix, spec.numerics);
  r.achieved_mean = edge_mean(r.matrix, spec.graph);
  r.objective = objective(r.matrix, spec.seed_matrix);
  r.residual = run.residual;
  r.gap = run.gap;
  r.b_used = b_used;
  r.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

SolverReport solve(const ProblemSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  spec.validate();
  DykstraState st(spec.seed_matrix);
  const RunOutcome run = run_dykstra(st, spec, spec.b, spec.max_iter);
  return make_report(spec, st.x, run, st.iterations, spec.b, start);
}

SolverReport solve_with_guarantee(const ProblemSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  spec.validate();
  const bool constrained = spec.mean_constrained();
  double eps = spec.epsilon;
  DykstraState st(spec.seed_matrix);

  constexpr int kMaxRounds = 8;
  for (int round = 0;; ++round) {
    const double b = constrained ? spec.b * (1.0 + eps) : spec.b;
    const std::size_t budget = spec.max_iter > st.iterations ? spec.max_iter - st.iterations : 0;
    const RunOutcome run = budget ? run_dykstra(st, spec, b, budget)
                                  : RunOutcome{SolveStatus::IterationCap, 0.0, 0.0};
    if (run.status != SolveStatus::Converged)
      return make_report(spec, st.x, run, st.iterations, b, start);

    const double lmin = min_eigenvalue(st.x, spec.numerics);
    if (lmin < -0.5 * eps) {
      const double wider = 2.0 * -lmin;
      if (constrained && round + 1 < kMaxRounds) {
        eps = wider;
        continue;  // re-project against the raised bound b(1 + eps)
      }
      eps = wider;
    }
    SolverReport r = make_report(spec, post_process(st.x, eps), run, st.iterations, b, start);
    r.epsilon_used = eps;
    r.post_processed = true;
    return r;
  }
}

}  // namespace corrgen
