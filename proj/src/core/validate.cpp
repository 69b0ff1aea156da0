#include "validate.hpp"

#include <cmath>

#include "error.hpp"
#include "linalg.hpp"
#include "solver.hpp"

namespace corrgen {

bool ValidationReport::all_pass() const noexcept {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

const ConstraintCheck* ValidationReport::find(const std::string& name) const noexcept {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

ValidationReport validate_correlation(const SymMatrix& c, const Graph& g, double b,
                                      const ValidationTolerances& tol,
                                      const NumericalSettings& numerics) {
  const std::size_t p = c.dim();
  if (g.vertex_count() != p)
    fail(ErrorCode::InvalidInput, "matrix and graph dimensions differ");
  ValidationReport out;

  double diag_err = 0.0;
  for (std::size_t i = 0; i < p; ++i) diag_err = std::max(diag_err, std::abs(c(i, i) - 1.0));
  out.checks.push_back({"unit_diagonal", diag_err <= tol.diagonal, diag_err, tol.diagonal,
                        tol.diagonal - diag_err});

  double pattern_err = 0.0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      if (!g.has_edge(i, j)) pattern_err = std::max(pattern_err, std::abs(c(i, j)));
  out.checks.push_back({"zero_pattern", pattern_err == 0.0, pattern_err, 0.0, -pattern_err});

  out.min_eigenvalue = min_eigenvalue(c, numerics);
  out.checks.push_back({"psd", out.min_eigenvalue >= tol.min_eigenvalue, out.min_eigenvalue,
                        tol.min_eigenvalue, out.min_eigenvalue - tol.min_eigenvalue});

  const double max_off = c.max_abs_offdiag();
  out.checks.push_back({"entry_bound", max_off <= tol.entry_bound, max_off, tol.entry_bound,
                        tol.entry_bound - max_off});

  if (b > -1.0) {
    const double m = edge_mean(c, g);
    const double limit = b - tol.mean_slack;
    const bool ok = g.edge_count() > 0 && m >= limit;
    out.checks.push_back({"mean_bound", ok, m, limit, m - limit});
  }
  return out;
}

}  // namespace corrgen
