#pragma once

#include <vector>

#include "settings.hpp"
#include "sym_matrix.hpp"

namespace corrgen {

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // descending
  Dense eigenvectors;               // column j pairs with eigenvalues[j]
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Throws InvalidInput on non-finite entries and NumericalFailure when the
/// off-diagonal mass has not dropped below `jacobi_rel_tol * ||a||_F` after
/// `jacobi_max_sweeps` sweeps.
EigenDecomposition eigh(const SymMatrix& a, const NumericalSettings& settings = {});

/// Same result contract as eigh(), but rotates `a` into `basis` first
/// (rows of `basis` orthonormal). When `a` is close to diagonal in that basis,
/// as for successive iterates of an alternating-projection loop, Jacobi needs
/// only a sweep or two.
EigenDecomposition eigh_warm(const SymMatrix& a, const Dense& basis_rows,
                             const NumericalSettings& settings = {});

/// Frobenius-nearest PSD matrix: Q max(L, 0) Q^T.
SymMatrix project_psd(const SymMatrix& a, const NumericalSettings& settings = {});
SymMatrix project_psd(const EigenDecomposition& eig);

double min_eigenvalue(const SymMatrix& a, const NumericalSettings& settings = {});

/// Lower-triangular L with positive diagonal and L L^T = a.
/// Throws NotPositiveDefinite on a pivot at or below the configured floor.
Dense cholesky(const SymMatrix& a, const NumericalSettings& settings = {});

double frobenius_distance(const SymMatrix& a, const SymMatrix& b);

}  // namespace corrgen
