#include "baselines.hpp"

#include <cmath>

#include "error.hpp"
#include "linalg.hpp"
#include "rng.hpp"

namespace corrgen {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += alpha * x[k];
}

// Retry seeds step through the 64-bit golden-ratio sequence.
constexpr std::uint64_t kRetryStride = 0x9E3779B97F4A7C15ull;

}  // namespace

void snap_pattern(std::vector<double>& entries, const Graph& g, double snap) {
  const std::size_t p = g.vertex_count();
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      if (g.has_edge(i, j)) continue;
      if (std::abs(entries[i * p + j]) >= snap || std::abs(entries[j * p + i]) >= snap)
        fail(ErrorCode::NumericalFailure,
             "non-edge entry (" + std::to_string(i) + "," + std::to_string(j) +
                 ") is not numerically zero");
      entries[i * p + j] = 0.0;
      entries[j * p + i] = 0.0;
    }
}

SymMatrix diagonal_dominance(const Graph& g, std::uint64_t seed, bool perturb) {
  const std::size_t p = g.vertex_count();
  Rng rng(seed, Stream::Method);
  std::vector<double> m(p * p, 0.0);
  for (const Edge& e : g.edges()) {
    const double w = rng.uniform(-1.0, 1.0);
    m[e.u * p + e.v] = w;
    m[e.v * p + e.u] = w;
  }
  std::vector<double> diag(p);
  for (std::size_t i = 0; i < p; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < p; ++j)
      if (j != i) s += std::abs(m[i * p + j]);
    if (perturb) s += rng.uniform();
    diag[i] = s > 0.0 ? s : 1.0;
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j)
      if (j != i && m[i * p + j] != 0.0) m[i * p + j] /= std::sqrt(diag[i] * diag[j]);
    m[i * p + i] = 1.0;
  }
  return from_symmetric_storage(p, std::move(m));
}

CholeskyFactorPattern sample_cholesky_factor(const Graph& g, std::uint64_t seed) {
  auto mcs = maximum_cardinality_search(g);
  if (!mcs.is_chordal) fail(ErrorCode::NotChordal, "graph is not chordal");
  const std::size_t p = g.vertex_count();
  const auto peo = mcs.ordering.order();
  std::vector<std::size_t> row_vertex(p);
  for (std::size_t r = 0; r < p; ++r) row_vertex[r] = peo[p - 1 - r];

  Rng rng(seed, Stream::Method);
  Dense u(p, p);
  for (std::size_t r = 0; r < p; ++r) {
    u(r, r) = std::abs(rng.normal());
    for (std::size_t s = r + 1; s < p; ++s)
      if (g.has_edge(row_vertex[r], row_vertex[s])) u(r, s) = rng.normal();
    auto row = u.row(r);
    double norm = std::sqrt(dot(row, row));
    if (norm == 0.0) {
      // All draws zero; only possible with a degenerate generator.
      u(r, r) = 1.0;
      norm = 1.0;
    }
    for (double& x : row) x /= norm;
  }
  return {g, std::move(mcs.ordering), std::move(row_vertex), std::move(u)};
}

SymMatrix chordal_cholesky_sample(const Graph& g, std::uint64_t seed,
                                  const NumericalSettings& settings) {
  const auto f = sample_cholesky_factor(g, seed);
  const std::size_t p = g.vertex_count();
  const Dense c_rows = multiply_transposed(f.factor, f.factor);
  std::vector<double> c(p * p);
  for (std::size_t r = 0; r < p; ++r)
    for (std::size_t s = 0; s < p; ++s)
      c[f.row_vertex[r] * p + f.row_vertex[s]] = c_rows(r, s);
  for (std::size_t i = 0; i < p; ++i) c[i * p + i] = 1.0;
  snap_pattern(c, g, settings.pattern_snap);
  return SymMatrix(p, std::move(c));
}

SymMatrix partial_orthogonalization(const Graph& g, const std::optional<SymMatrix>& initial,
                                    std::uint64_t seed, const NumericalSettings& settings) {
  const std::size_t p = g.vertex_count();
  const SymMatrix start =
      initial ? *initial : chordal_cholesky_sample(triangulate(g, seed), seed, settings);
  if (start.dim() != p)
    fail(ErrorCode::InvalidInput, "initial matrix dimension does not match graph");

  const auto eig = eigh(start, settings);
  Dense q(p, p);
  for (std::size_t k = 0; k < p; ++k) {
    const double scale = std::sqrt(std::max(eig.eigenvalues[k], 0.0));
    for (std::size_t i = 0; i < p; ++i) q(i, k) = eig.eigenvectors(i, k) * scale;
  }

  std::vector<std::vector<double>> basis;
  for (std::size_t i = 0; i < p; ++i) {
    // Orthonormal basis of span{q_j : j < i, (i, j) not an edge}.
    basis.clear();
    for (std::size_t j = 0; j < i; ++j) {
      if (g.has_edge(i, j)) continue;
      std::vector<double> w(q.row(j).begin(), q.row(j).end());
      const double original = std::sqrt(dot(w, w));
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) axpy(-dot(w, b), b, w);
      const double norm = std::sqrt(dot(w, w));
      if (norm <= 1e-10 * std::max(original, 1e-300)) continue;
      for (double& x : w) x /= norm;
      basis.push_back(std::move(w));
    }
    auto qi = q.row(i);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) axpy(-dot(qi, b), b, qi);
    const double norm = std::sqrt(dot(qi, qi));
    if (norm < settings.degenerate_row_norm)
      fail(ErrorCode::DegenerateRow, "row " + std::to_string(i) + " vanished");
    for (double& x : qi) x /= norm;
  }

  const Dense c_dense = multiply_transposed(q, q);
  std::vector<double> c(c_dense.data().begin(), c_dense.data().end());
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) c[j * p + i] = c[i * p + j];
  for (std::size_t i = 0; i < p; ++i) c[i * p + i] = 1.0;
  snap_pattern(c, g, settings.pattern_snap);
  return from_symmetric_storage(p, std::move(c));
}

SymMatrix partial_orthogonalization_with_retry(const Graph& g, std::uint64_t seed,
                                               int max_attempts,
                                               const NumericalSettings& settings) {
  for (int attempt = 0;; ++attempt) {
    try {
      return partial_orthogonalization(g, std::nullopt,
                                       seed + static_cast<std::uint64_t>(attempt) * kRetryStride,
                                       settings);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateRow || attempt + 1 >= max_attempts) throw;
    }
  }
}

}  // namespace corrgen
