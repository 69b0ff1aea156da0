#pragma once

#include <string>
#include <vector>

#include "graph.hpp"
#include "settings.hpp"
#include "sym_matrix.hpp"

namespace corrgen {

struct ValidationTolerances {
  double diagonal = 1e-7;
  double min_eigenvalue = -1e-6;
  double entry_bound = 1.0 + 1e-7;
  double mean_slack = 1e-6;
};

/// One constraint: `slack` is limit minus measured violation, so a check
/// passes iff slack >= 0 (the pattern check requires exact zeros).
struct ConstraintCheck {
  std::string name;
  bool pass;
  double measured;
  double limit;
  double slack;
};

struct ValidationReport {
  std::vector<ConstraintCheck> checks;
  double min_eigenvalue = 0.0;

  bool all_pass() const noexcept;
  const ConstraintCheck* find(const std::string& name) const noexcept;
};

/// Unit diagonal, exact zeros on non-edges, PSD, |c_ij| bound and (for
/// b > -1) the mean edge entry.
ValidationReport validate_correlation(const SymMatrix& c, const Graph& g, double b,
                                      const ValidationTolerances& tol = {},
                                      const NumericalSettings& numerics = {});

}  // namespace corrgen
