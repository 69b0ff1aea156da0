#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"

namespace corrgen {
namespace {

double offdiag_norm(const std::vector<double>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
  return std::sqrt(2.0 * s);
}

// Diagonalizes the symmetric matrix held in `a` (row-major, full storage) and
// accumulates the rotations into `vt`, whose rows are the current eigenvector
// estimates. On return a is diagonal to within `target`.
void jacobi_sweeps(std::vector<double>& a, Dense& vt, std::size_t n, double target,
                   int max_sweeps) {
  for (int sweep = 0;; ++sweep) {
    const double off = offdiag_norm(a, n);
    if (off <= target) return;
    if (sweep >= max_sweeps)
      fail(ErrorCode::NumericalFailure, "Jacobi eigensolver did not converge");
    // Entries far below the target cannot move the off-norm; skip them.
    const double skip = target / static_cast<double>(4 * n);
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) <= skip) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        double* rp = a.data() + p * n;
        double* rq = a.data() + q * n;
        for (std::size_t k = 0; k < n; ++k) {
          const double x = rp[k];
          const double y = rq[k];
          rp[k] = c * x - s * y;
          rq[k] = s * x + c * y;
        }
        rp[p] = app - t * apq;
        rq[q] = aqq + t * apq;
        rp[q] = 0.0;
        rq[p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          a[k * n + p] = rp[k];
          a[k * n + q] = rq[k];
        }

        auto vp = vt.row(p);
        auto vq = vt.row(q);
        for (std::size_t k = 0; k < n; ++k) {
          const double x = vp[k];
          const double y = vq[k];
          vp[k] = c * x - s * y;
          vq[k] = s * x + c * y;
        }
      }
    }
  }
}

EigenDecomposition finish(const std::vector<double>& a, const Dense& vt, std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x * n + x] > a[y * n + y];
  });
  EigenDecomposition out{std::vector<double>(n), Dense(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.eigenvalues[j] = a[src * n + src];
    auto v = vt.row(src);
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v[i];
  }
  return out;
}

void check_input(const SymMatrix& a) {
  if (!a.all_finite()) fail(ErrorCode::InvalidInput, "matrix has non-finite entries");
}

}  // namespace

EigenDecomposition eigh(const SymMatrix& a, const NumericalSettings& settings) {
  check_input(a);
  const std::size_t n = a.dim();
  std::vector<double> work(a.entries().begin(), a.entries().end());
  Dense vt = Dense::identity(n);
  jacobi_sweeps(work, vt, n, settings.jacobi_rel_tol * a.frobenius_norm(),
                settings.jacobi_max_sweeps);
  return finish(work, vt, n);
}

EigenDecomposition eigh_warm(const SymMatrix& a, const Dense& basis_rows,
                             const NumericalSettings& settings) {
  check_input(a);
  const std::size_t n = a.dim();
  if (basis_rows.rows() != n || basis_rows.cols() != n)
    fail(ErrorCode::InvalidInput, "warm-start basis has the wrong shape");
  // B = V A V^T with V = basis_rows.
  const Dense va = multiply(basis_rows, a.to_dense());
  const Dense b = multiply_transposed(va, basis_rows);
  std::vector<double> work(b.data().begin(), b.data().end());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (work[i * n + j] + work[j * n + i]);
      work[i * n + j] = avg;
      work[j * n + i] = avg;
    }
  Dense rot = Dense::identity(n);
  jacobi_sweeps(work, rot, n, settings.jacobi_rel_tol * a.frobenius_norm(),
                settings.jacobi_max_sweeps);
  return finish(work, multiply(rot, basis_rows), n);
}

SymMatrix project_psd(const EigenDecomposition& eig) {
  const std::size_t n = eig.eigenvalues.size();
  std::vector<double> out(n * n, 0.0);
  std::vector<double> col(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double l = eig.eigenvalues[k];
    if (l <= 0.0) break;  // descending
    for (std::size_t i = 0; i < n; ++i) col[i] = eig.eigenvectors(i, k);
    for (std::size_t i = 0; i < n; ++i) {
      const double li = l * col[i];
      double* row = out.data() + i * n;
      for (std::size_t j = i; j < n; ++j) row[j] += li * col[j];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out[j * n + i] = out[i * n + j];
  return from_symmetric_storage(n, std::move(out));
}

SymMatrix project_psd(const SymMatrix& a, const NumericalSettings& settings) {
  return project_psd(eigh(a, settings));
}

double min_eigenvalue(const SymMatrix& a, const NumericalSettings& settings) {
  return eigh(a, settings).eigenvalues.back();
}

Dense cholesky(const SymMatrix& a, const NumericalSettings& settings) {
  check_input(a);
  const std::size_t n = a.dim();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(a(i, i)));
  const double floor = settings.cholesky_min_pivot * std::max(scale, 1.0);
  Dense l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > floor))
      fail(ErrorCode::NotPositiveDefinite,
           "non-positive pivot at column " + std::to_string(j));
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

double frobenius_distance(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) fail(ErrorCode::InvalidInput, "dimension mismatch");
  const auto x = a.entries();
  const auto y = b.entries();
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace corrgen
