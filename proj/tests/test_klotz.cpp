#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>

#include "cbi/klotz.hpp"

using cbi::in_region;
using cbi::KlotzParams;
using cbi::likelihood_ff;
using cbi::log_likelihood_ff;
using cbi::simulate_chain;
using cbi::transition_probs;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("region membership") {
    CHECK(in_region(0.3, 0.3));
    CHECK(in_region(0.0, 0.0));
    CHECK(in_region(0.0, 1.0));
    CHECK(in_region(0.5, 0.0));
    CHECK(in_region(0.7, (2 * 0.7 - 1) / 0.7));
    CHECK_FALSE(in_region(0.6, 0.2));      // below the (2x-1)/x floor
    CHECK_FALSE(in_region(1.0, 1.0));      // x = 1 excluded
    CHECK_FALSE(in_region(0.3, 1.1));
    CHECK_FALSE(in_region(0.3, -0.1));
    CHECK_FALSE(in_region(-0.1, 0.5));
}

TEST_CASE("transition probabilities") {
    const auto tp = transition_probs({0.3, 0.8});
    CHECK(tp.fail_after_fail == 0.8);
    CHECK(tp.fail_after_success == doctest::Approx(0.2 * 0.3 / 0.7).epsilon(1e-15));
    CHECK(tp.fail_after_fail + tp.success_after_fail == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(tp.fail_after_success + tp.success_after_success ==
          doctest::Approx(1.0).epsilon(1e-15));
    // Boundary of the region: failure is certain after a success.
    CHECK(transition_probs({0.5, 0.0}).fail_after_success == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("failure-free likelihood point values") {
    CHECK(likelihood_ff({0.2, 0.2}, 3) == doctest::Approx(0.512).epsilon(1e-13));
    CHECK(likelihood_ff({0.3, 0.8}, 5) ==
          doctest::Approx(0.48913166180758017).epsilon(1e-13));
    // lambda = 1 freezes the chain: exactly the single-trial survival.
    CHECK(likelihood_ff({0.3, 1.0}, 100) == 0.7);
    CHECK(likelihood_ff({0.3, 1.0}, 1) == 0.7);
    // On the lower lambda boundary at x = 1/2 the chain alternates; two
    // failure-free demands are impossible.
    CHECK(likelihood_ff({0.5, 0.0}, 5) == 0.0);
    CHECK(likelihood_ff({1.0, 1.0}, 3) == 0.0);
    CHECK(likelihood_ff({0.0, 0.4}, 10) == 1.0);
}

TEST_CASE("log likelihood agrees and survives large n") {
    CHECK(log_likelihood_ff({0.2, 0.2}, 3) == doctest::Approx(3 * std::log(0.8)).epsilon(1e-14));
    CHECK(log_likelihood_ff({0.5, 0.0}, 5) == -kInf);
    // x = lambda collapses to the i.i.d. likelihood n*log(1-x).
    CHECK(log_likelihood_ff({1e-4, 1e-4}, 1000000) ==
          doctest::Approx(-100.00500033335834).epsilon(1e-13));
}

TEST_CASE("diagonal equals the i.i.d. likelihood") {
    for (double x : {0.01, 0.1, 0.25, 0.5, 0.9}) {
        for (std::int64_t n : {1, 2, 7, 50}) {
            CHECK(likelihood_ff({x, x}, n) ==
                  doctest::Approx(std::pow(1 - x, n)).epsilon(1e-12));
        }
    }
}

TEST_CASE("likelihood is non-increasing in n") {
    for (double lambda : {0.0, 0.3, 0.9}) {
        const KlotzParams p{0.2, lambda};
        double prev = 1.0;
        for (std::int64_t n = 1; n <= 40; ++n) {
            const double cur = likelihood_ff(p, n);
            CHECK(cur <= prev + 1e-15);
            prev = cur;
        }
    }
}

TEST_CASE("simulated chains are reproducible and match the model") {
    const auto a = simulate_chain({0.3, 0.8}, 1000, 7);
    const auto b = simulate_chain({0.3, 0.8}, 1000, 7);
    CHECK(a.trials == b.trials);
    CHECK(a.to_line().size() == 1000);

    // x = 0: no failures ever.
    const auto clean = simulate_chain({0.0, 0.5}, 500, 11);
    for (auto t : clean.trials) CHECK(t == 0);

    // Marginal failure frequency ~ x (3 sigma), conditional P(1|1) ~ lambda.
    const std::int64_t n = 100000;
    const auto run = simulate_chain({0.3, 0.8}, n, 12345);
    std::int64_t fails = 0, after_fail = 0, fail_after_fail = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        if (run.trials[i]) ++fails;
        if (i > 0 && run.trials[i - 1]) {
            ++after_fail;
            if (run.trials[i]) ++fail_after_fail;
        }
    }
    const double freq = static_cast<double>(fails) / n;
    // Dependent chain: var of the mean is inflated by (1+lambda)/(1-lambda) = 9.
    CHECK(std::abs(freq - 0.3) < 3 * std::sqrt(9 * 0.3 * 0.7 / n));
    const double cond = static_cast<double>(fail_after_fail) / after_fail;
    CHECK(std::abs(cond - 0.8) < 3 * std::sqrt(0.8 * 0.2 / after_fail));
}

TEST_CASE("split_seed separates streams") {
    CHECK(cbi::split_seed(1, 0) != cbi::split_seed(1, 1));
    CHECK(cbi::split_seed(1, 0) != cbi::split_seed(2, 0));
    CHECK(cbi::split_seed(17, 3) == cbi::split_seed(17, 3));
}
