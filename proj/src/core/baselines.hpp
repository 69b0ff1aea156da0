#pragma once

#include <cstdint>
#include <optional>

#include "graph.hpp"
#include "settings.hpp"
#include "sym_matrix.hpp"

namespace corrgen {

/// Upper-triangular factor with unit-norm rows whose zeros follow the graph.
/// Rows are labelled in reverse PEO order, so row i belongs to vertex
/// row_vertex[i] = order[p-1-i] and every vertex's earlier-row neighbours
/// form a clique; that is what makes U U^T vanish on non-edges.
struct CholeskyFactorPattern {
  Graph graph;
  EliminationOrdering order;  // a PEO of graph
  std::vector<std::size_t> row_vertex;
  Dense factor;
};

/// Gershgorin construction: U[-1, 1] weights on edges, diagonal set to the
/// absolute row sum (plus U(0, 1) when `perturb`), then rescaled to unit
/// diagonal. Isolated vertices get a unit diagonal.
SymMatrix diagonal_dominance(const Graph& g, std::uint64_t seed, bool perturb);

/// Samples a factor in the chordal pattern: free entries N(0, 1), diagonal
/// |N(0, 1)|, rows normalised. Throws NotChordal when MCS finds no PEO.
CholeskyFactorPattern sample_cholesky_factor(const Graph& g, std::uint64_t seed);

/// C = U U^T from sample_cholesky_factor(), in the original vertex labels.
SymMatrix chordal_cholesky_sample(const Graph& g, std::uint64_t seed,
                                  const NumericalSettings& settings = {});

/// Writes `initial` as Q Q^T (Q = eigenvectors * sqrt(eigenvalues)) and, for
/// i = 1..p-1, orthogonalizes row i against the rows j < i that are not
/// adjacent to i, then renormalises it. Throws DegenerateRow when a row
/// collapses below `settings.degenerate_row_norm`.
///
/// Without `initial`, the start point is chordal_cholesky_sample() on
/// triangulate(g, seed).
SymMatrix partial_orthogonalization(const Graph& g, const std::optional<SymMatrix>& initial,
                                    std::uint64_t seed, const NumericalSettings& settings = {});

/// partial_orthogonalization() with the default start, retrying on
/// DegenerateRow with fresh draws from the same seed (attempt 1, 2, ...).
SymMatrix partial_orthogonalization_with_retry(const Graph& g, std::uint64_t seed,
                                               int max_attempts = 10,
                                               const NumericalSettings& settings = {});

/// Sets every non-edge entry below `snap` in magnitude to +0. Throws
/// NumericalFailure when a non-edge entry is larger than that.
void snap_pattern(std::vector<double>& entries, const Graph& g, double snap);

}  // namespace corrgen
