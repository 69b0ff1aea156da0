#pragma once

// Reference computations that share no code with the library's numerics:
// brute-force searches, closed forms and direct loops.

#include <cstddef>
#include <optional>
#include <vector>

#include "core/graph.hpp"
#include "core/sym_matrix.hpp"

namespace oracle {

/// Determinant by Gaussian elimination with partial pivoting.
double determinant(std::vector<double> a, std::size_t n);

/// PSD test through every principal minor (Sylvester), for n <= 6.
bool psd_by_minors(const std::vector<double>& a, std::size_t n, double tol = 0.0);

/// Plain double loop.
double frobenius_distance(const corrgen::SymMatrix& a, const corrgen::SymMatrix& b);

/// Chordality by searching every vertex subset for an induced cycle of
/// length at least 4; exponential, for p <= 10.
bool chordal_by_enumeration(const corrgen::Graph& g);

struct GridResult {
  double objective;
  std::vector<double> free_values;
};

/// Minimizes 0.5 ||C - seed||_F^2 over unit-diagonal, pattern-respecting C
/// with PSD checked by principal minors and the mean of the free entries
/// >= b (ignored for b <= -1). Coarse grid (step 0.02) followed by 1e-3 and
/// 1e-4 grids around the best point so far. nullopt when no grid point is feasible.
std::optional<GridResult> grid_search_projection(const corrgen::Graph& g,
                                                 const corrgen::SymMatrix& seed, double b);

/// Euclidean projection onto {mean of edge entries >= b} through a scalar
/// dual search (bisection on the multiplier).
corrgen::SymMatrix halfspace_projection_by_dual(const corrgen::SymMatrix& a,
                                                const corrgen::Graph& g, double b);

}  // namespace oracle

namespace oracle {

/// A p <= 4 instance with at most three free entries and its grid optimum.
struct OracleCase {
  corrgen::Graph graph;
  corrgen::SymMatrix seed;
  double b;
  GridResult expected;
};

/// Reproducible random instances (std::mt19937 seeded with `seed`). A drawn
/// bound that admits no grid point is replaced by b = -1.
std::vector<OracleCase> random_oracle_cases(std::size_t count, unsigned seed);

}  // namespace oracle
