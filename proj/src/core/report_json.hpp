#pragma once

#include <nlohmann/json.hpp>

#include "solver.hpp"
#include "validate.hpp"

namespace corrgen {

nlohmann::json to_json(const SolverReport& r);
nlohmann::json to_json(const ValidationReport& r);
nlohmann::json to_json(const NumericalSettings& s);
NumericalSettings numerics_from_json(const nlohmann::json& j, NumericalSettings base = {});

}  // namespace corrgen
