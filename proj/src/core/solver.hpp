#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "graph.hpp"
#include "settings.hpp"
#include "sym_matrix.hpp"

namespace corrgen {

/// Parameters of the stagnation test that flags empty intersections.
/// Every `window` cycles the inter-set gap is compared with its value one
/// window earlier; a gap above gap_factor * tol whose relative change is
/// below rel_change is reported as InfeasibleSuspected. The test only runs
/// for b > 0; smaller bounds are always feasible (the identity qualifies).
struct InfeasibilityDetector {
  std::size_t window = 500;
  double rel_change = 1e-3;
  double gap_factor = 10.0;
};

/// Nearest-correlation problem: minimize 1/2 ||C - seed||_F^2 over PSD C with
/// unit diagonal, zeros on the graph's non-edges, and mean edge entry >= b.
/// b <= -1 drops the mean constraint.
struct ProblemSpec {
  Graph graph;
  SymMatrix seed_matrix;
  double b = -1.0;
  double tol = 1e-7;
  std::size_t max_iter = 20000;
  double epsilon = 1e-8;
  InfeasibilityDetector detector{};
  NumericalSettings numerics{};

  /// Throws InvalidInput unless dimensions agree, tol > 0, max_iter >= 1,
  /// epsilon >= 0 and (b <= -1 or the graph has an edge).
  void validate() const;
  bool mean_constrained() const noexcept { return b > -1.0; }
};

enum class SolveStatus { Converged, InfeasibleSuspected, IterationCap };

std::string_view to_string(SolveStatus status) noexcept;

struct SolverReport {
  SymMatrix matrix;
  SolveStatus status = SolveStatus::IterationCap;
  std::size_t iterations = 0;
  double min_eigenvalue = 0.0;
  double achieved_mean = 0.0;  // mean entry over edges
  double objective = 0.0;      // 1/2 ||matrix - seed||_F^2
  double wall_time_s = 0.0;
  double residual = 0.0;       // last change between full cycles
  double gap = 0.0;            // last distance between PSD and affine iterates
  double b_used = -1.0;        // bound the projection enforced
  double epsilon_used = 0.0;   // shift applied by post_process, 0 if none
  bool post_processed = false;
};

/// Diagonal to 1, non-edges to 0. Exact projection onto that affine set.
SymMatrix project_pattern(const SymMatrix& a, const Graph& g);

/// Euclidean projection onto {mean of edge entries >= b}: when the mean m is
/// short of b, every edge entry (both halves) moves up by b - m.
SymMatrix project_mean_halfspace(const SymMatrix& a, const Graph& g, double b);

/// Mean entry over edges, i.e. (1 / 2|E|) * sum over ordered edge pairs.
/// Zero for an edgeless graph.
double edge_mean(const SymMatrix& a, const Graph& g);

double objective(const SymMatrix& c, const SymMatrix& seed);

/// Dykstra's alternating projections with correction terms over the PSD cone,
/// the pattern set and (when constrained) the mean halfspace.
///
/// Converged: successive cycles differ by <= tol and the returned iterate is
/// within 10 tol of the PSD cone. The iterate always lies exactly in the
/// pattern and mean sets.
SolverReport solve(const ProblemSpec& spec);

/// Seed matrix with off-diagonal entries drawn from U[-1, 1] and a unit
/// diagonal (the diagonal does not affect the projection).
SymMatrix uniform_seed_matrix(std::size_t p, std::uint64_t seed);

/// (c + eps I) / (1 + eps). Keeps the unit diagonal and the zero pattern and
/// lifts every eigenvalue to (l + eps) / (1 + eps).
SymMatrix post_process(const SymMatrix& c, double epsilon);

/// Solves with b raised to b(1 + eps), then post-processes, so the result
/// meets the original b and is PSD. If the converged iterate has
/// l_min < -eps/2 the shift is enlarged to 2|l_min| and, when the mean is
/// constrained, the projection is resumed with the raised bound.
SolverReport solve_with_guarantee(const ProblemSpec& spec);

}  // namespace corrgen
