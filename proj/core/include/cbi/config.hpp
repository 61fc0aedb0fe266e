#pragma once

#include <json.hpp>

#include "cbi/prior.hpp"

namespace cbi {

/// Builds a prior from a structured config record:
///   {"kind": "beta", "alpha": 2, "beta": 20000}
///   {"kind": "piecewise", "knots": [...], "densities": [...]}
Prior prior_from_json(const nlohmann::json& spec);

} // namespace cbi
