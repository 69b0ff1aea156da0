#pragma once

#include <cstddef>

namespace corrgen {

/// Tolerances shared by the linear algebra kernel and the generators.
/// Every field can be overridden from the CLI or an experiment config.
struct NumericalSettings {
  /// Jacobi stops once the off-diagonal Frobenius norm drops below this
  /// fraction of the input Frobenius norm.
  double jacobi_rel_tol = 1e-12;
  int jacobi_max_sweeps = 100;
  /// Cholesky rejects pivots at or below this value (scaled by max |a_ii|).
  double cholesky_min_pivot = 1e-12;
  /// CSV reader accepts |a_ij - a_ji| up to this much.
  double symmetry_tol = 1e-9;
  /// Non-edge entries with magnitude below this are snapped to exact zero.
  double pattern_snap = 1e-12;
  /// Partial orthogonalization gives up on rows shorter than this.
  double degenerate_row_norm = 1e-10;
};

}  // namespace corrgen
