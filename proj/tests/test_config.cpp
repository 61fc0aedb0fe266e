#include <doctest.h>

#include <stdexcept>

#include <json.hpp>

#include "cbi/config.hpp"

using cbi::prior_from_json;
using nlohmann::json;

TEST_CASE("beta prior record") {
    const auto p = prior_from_json(json{{"kind", "beta"}, {"alpha", 1}, {"beta", 10000}});
    REQUIRE(p.is_beta());
    CHECK(p.beta_params()->alpha == 1.0);
    CHECK(p.beta_params()->beta == 10000.0);
}

TEST_CASE("piecewise prior record") {
    const auto p = prior_from_json(
        json{{"kind", "piecewise"}, {"knots", {0.0, 1.0}}, {"densities", {2.0, 0.0}}});
    CHECK_FALSE(p.is_beta());
    CHECK(p.density(0.25) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("malformed records are rejected") {
    CHECK_THROWS_AS((void)prior_from_json(json{{"kind", "gamma"}, {"alpha", 1}}),
                    std::invalid_argument);
    CHECK_THROWS((void)prior_from_json(json{{"kind", "beta"}, {"alpha", 1}}));  // missing beta
    CHECK_THROWS((void)prior_from_json(json::object()));
}
