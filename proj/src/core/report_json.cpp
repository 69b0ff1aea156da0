#include "report_json.hpp"

#include "error.hpp"

namespace corrgen {

nlohmann::json to_json(const SolverReport& r) {
  return {
      {"status", std::string(to_string(r.status))},
      {"iterations", r.iterations},
      {"min_eigenvalue", r.min_eigenvalue},
      {"achieved_mean", r.achieved_mean},
      {"objective", r.objective},
      {"wall_time_s", r.wall_time_s},
      {"residual", r.residual},
      {"gap", r.gap},
      {"b_used", r.b_used},
      {"epsilon_used", r.epsilon_used},
      {"post_processed", r.post_processed},
      {"dimension", r.matrix.dim()},
  };
}

nlohmann::json to_json(const ValidationReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"measured", c.measured},
                      {"limit", c.limit},
                      {"slack", c.slack}});
  return {{"all_pass", r.all_pass()}, {"min_eigenvalue", r.min_eigenvalue}, {"checks", checks}};
}

nlohmann::json to_json(const NumericalSettings& s) {
  return {{"jacobi_rel_tol", s.jacobi_rel_tol},
          {"jacobi_max_sweeps", s.jacobi_max_sweeps},
          {"cholesky_min_pivot", s.cholesky_min_pivot},
          {"symmetry_tol", s.symmetry_tol},
          {"pattern_snap", s.pattern_snap},
          {"degenerate_row_norm", s.degenerate_row_norm}};
}

NumericalSettings numerics_from_json(const nlohmann::json& j, NumericalSettings base) {
  if (!j.is_object()) fail(ErrorCode::InvalidInput, "numerics must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) fail(ErrorCode::InvalidInput, "numerics." + key + " must be a number");
    if (key == "jacobi_rel_tol") base.jacobi_rel_tol = value.get<double>();
    else if (key == "jacobi_max_sweeps") base.jacobi_max_sweeps = value.get<int>();
    else if (key == "cholesky_min_pivot") base.cholesky_min_pivot = value.get<double>();
    else if (key == "symmetry_tol") base.symmetry_tol = value.get<double>();
    else if (key == "pattern_snap") base.pattern_snap = value.get<double>();
    else if (key == "degenerate_row_norm") base.degenerate_row_norm = value.get<double>();
    else fail(ErrorCode::InvalidInput, "unknown numerics key '" + key + "'");
  }
  return base;
}

}  // namespace corrgen
