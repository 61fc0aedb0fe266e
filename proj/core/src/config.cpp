#include "cbi/config.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace cbi {

Prior prior_from_json(const nlohmann::json& spec) {
    const std::string kind = spec.value("kind", "");
    if (kind == "beta") {
        return Prior::beta(spec.at("alpha").get<double>(), spec.at("beta").get<double>());
    }
    if (kind == "piecewise") {
        return Prior::piecewise(spec.at("knots").get<std::vector<double>>(),
                                spec.at("densities").get<std::vector<double>>());
    }
    throw std::invalid_argument("unknown prior kind '" + kind + "' (expected beta or piecewise)");
}

} // namespace cbi
