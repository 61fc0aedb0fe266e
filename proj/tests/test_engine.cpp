#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "cbi/engine.hpp"
#include "cbi/errors.hpp"

using cbi::AssessmentProblem;
using cbi::conservative_confidence;
using cbi::DiscreteJointPrior;
using cbi::iid_posterior;
using cbi::posterior_for_joint_prior;
using cbi::Prior;

TEST_CASE("problem validation") {
    const Prior p = Prior::beta(1, 10000);
    CHECK_NOTHROW((AssessmentProblem{1e-4, 10000, p, 0.05, 0.05}.validate()));
    CHECK_THROWS_AS((AssessmentProblem{0.6, 100, p, 0.0, 0.0}.validate()), std::domain_error);
    CHECK_THROWS_AS((AssessmentProblem{1e-4, 1, p, 0.0, 0.0}.validate()), std::domain_error);
    CHECK_THROWS_AS((AssessmentProblem{1e-4, 100, p, 0.7, 0.4}.validate()), std::domain_error);
    // cdf(b) ~ 0.632: phi1 above it, or phi2 above the complement, breaks PK4.
    CHECK_THROWS_AS((AssessmentProblem{1e-4, 100, p, 0.7, 0.0}.validate()), cbi::pk4_violation);
    CHECK_THROWS_AS((AssessmentProblem{1e-4, 100, p, 0.0, 0.5}.validate()), cbi::pk4_violation);
}

TEST_CASE("iid posterior basics") {
    const Prior p = Prior::beta(1, 10000);
    // n = 0: the posterior is the prior cdf.
    CHECK(iid_posterior(p, 1e-4, 0) == doctest::Approx(p.cdf(1e-4)).epsilon(1e-9));
    CHECK(iid_posterior(Prior::beta(2, 20000), 1e-4, 0) ==
          doctest::Approx(0.594034751552).epsilon(1e-9));
    // Beta(1, beta) updates give 1 - (1-b)^(beta+n) exactly.
    CHECK(iid_posterior(p, 1e-4, 10000) ==
          doctest::Approx(0.864678250517).epsilon(1e-8));
}

TEST_CASE("zero doubt reduces to the i.i.d. posterior") {
    struct Row {
        Prior prior;
        std::int64_t n;
    };
    const Row rows[] = {
        {Prior::beta(2, 20000), 100}, {Prior::beta(2, 20000), 10000},
        {Prior::beta(1, 10000), 100}, {Prior::beta(1, 10000), 10000},
        {Prior::beta(0.1, 1000), 100}, {Prior::beta(0.1, 1000), 10000},
    };
    for (const Row& row : rows) {
        const auto r = conservative_confidence({1e-4, row.n, row.prior, 0.0, 0.0});
        const double iid = iid_posterior(row.prior, 1e-4, row.n);
        CHECK(std::abs(r.conservative_confidence - iid) <= 1e-9);
        CHECK(r.iid_confidence == doctest::Approx(iid).epsilon(1e-10));
    }
}

TEST_CASE("doubt strictly reduces confidence") {
    const Prior p = Prior::beta(1, 10000);
    const auto r = conservative_confidence({1e-4, 10000, p, 0.05, 0.05});
    CHECK(r.conservative_confidence < r.iid_confidence);
    CHECK(r.conservative_confidence > 0.0);
    CHECK(r.quadrature_error <= 1e-8);
}

TEST_CASE("frozen reference confidences, Beta(1,10000), b=1e-4, phi=0.05") {
    const Prior p = Prior::beta(1, 10000);
    const auto n4 = conservative_confidence({1e-4, 10000, p, 0.05, 0.05});
    CHECK(n4.conservative_confidence == doctest::Approx(0.7878897479).epsilon(1e-7));
    const auto n6 = conservative_confidence({1e-4, 1000000, p, 0.05, 0.05});
    CHECK(n6.conservative_confidence == doctest::Approx(0.1653037914).epsilon(1e-7));
    const auto n3 = conservative_confidence({1e-4, 1000, p, 0.05, 0.05});
    CHECK(n3.conservative_confidence == doctest::Approx(0.6554014247).epsilon(1e-7));
}

TEST_CASE("desk-scale frozen reference: Beta(2,5), b=0.2, n=20, phi=0.1") {
    const auto r = conservative_confidence({0.2, 20, Prior::beta(2, 5), 0.1, 0.1});
    CHECK(r.conservative_confidence ==
          doctest::Approx(0.352458200384791).epsilon(1e-8));
    CHECK(r.iid_confidence == doctest::Approx(0.9773326408822257).epsilon(1e-8));
}

TEST_CASE("confidence is monotone in each doubt mass") {
    const Prior p = Prior::beta(1, 10000);
    const std::vector<double> grid{0.0, 0.05, 0.1, 0.2, 0.3};
    std::vector<std::vector<double>> conf(grid.size(), std::vector<double>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < grid.size(); ++j)
            conf[i][j] = conservative_confidence({1e-4, 10000, p, grid[i], grid[j]})
                             .conservative_confidence;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < grid.size(); ++j) {
            if (i + 1 < grid.size()) CHECK(conf[i + 1][j] <= conf[i][j] + 1e-9);
            if (j + 1 < grid.size()) CHECK(conf[i][j + 1] <= conf[i][j] + 1e-9);
        }
}

TEST_CASE("confidence is continuous at zero doubt") {
    const Prior p = Prior::beta(1, 10000);
    const double at_zero =
        conservative_confidence({1e-4, 10000, p, 0.0, 0.0}).conservative_confidence;
    double prev = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const double c =
            conservative_confidence({1e-4, 10000, p, eps, eps}).conservative_confidence;
        CHECK(c <= at_zero + 1e-9);
        CHECK(c >= prev - 1e-9);  // approaches the limit from below
        prev = c;
    }
    CHECK(at_zero - prev < 1e-2);
}

TEST_CASE("discrete joint posterior: exact small cases") {
    // Single atom below b: certainty.
    DiscreteJointPrior one{{{0.05, 0.05, 1.0}}};
    CHECK(posterior_for_joint_prior(one, 0.2, 5) == 1.0);

    // Two equal atoms on the diagonal, n = 2:
    // L(0.1,0.1;2) = 0.81, L(0.3,0.3;2) = 0.49.
    DiscreteJointPrior two{{{0.1, 0.1, 0.5}, {0.3, 0.3, 0.5}}};
    CHECK(posterior_for_joint_prior(two, 0.2, 2) ==
          doctest::Approx(0.623076923077).epsilon(1e-12));

    // Zero total likelihood is a typed error, not a NaN.
    DiscreteJointPrior dead{{{0.5, 0.0, 1.0}}};
    CHECK_THROWS_AS((void)posterior_for_joint_prior(dead, 0.2, 5), cbi::zero_likelihood_error);
}

TEST_CASE("worst-case prior reconstructed from the cut-points reproduces 1/(1+Q)") {
    // Discretize the analytical worst case: diagonal atoms outside the doubt
    // intervals, lambda=0 atoms on [c1l,c2l], lambda=1 atoms on [c1h,c2h].
    const Prior prior = Prior::beta(2, 5);
    const double b = 0.2;
    const std::int64_t n = 20;
    const auto r = conservative_confidence({b, n, prior, 0.1, 0.1});
    const auto& cp = r.cutpoints;

    DiscreteJointPrior joint;
    const int strips = 10000;
    auto add_band = [&](double lo, double hi, double lambda, bool diagonal) {
        if (hi <= lo) return;
        for (int i = 0; i < strips; ++i) {
            const double a = lo + (hi - lo) * i / strips;
            const double c = lo + (hi - lo) * (i + 1) / strips;
            const double mass = prior.cdf(c) - prior.cdf(a);
            if (mass <= 0.0) continue;
            const double mid = 0.5 * (a + c);
            joint.atoms.push_back({mid, diagonal ? mid : lambda, mass});
        }
    };
    add_band(0.0, cp.c1_low, 0.0, true);
    add_band(cp.c1_low, cp.c2_low, 0.0, false);
    add_band(cp.c2_low, b, 0.0, true);
    add_band(b, cp.c1_high, 0.0, true);
    add_band(cp.c1_high, cp.c2_high, 1.0, false);
    add_band(cp.c2_high, 1.0, 0.0, true);
    double total = 0.0;
    for (auto& atom : joint.atoms) total += atom.mass;
    for (auto& atom : joint.atoms) atom.mass /= total;
    joint.validate();

    const double discrete = posterior_for_joint_prior(joint, b, n);
    CHECK(discrete == doctest::Approx(r.conservative_confidence).epsilon(1e-4));
}

TEST_CASE("asymptotic envelope") {
    const Prior p = Prior::beta(1, 10000);

    // phi2 = 0: the envelope is finite and must contain Q.
    const AssessmentProblem prob{1e-4, 1000000, p, 0.05, 0.0};
    const auto bounds = cbi::asymptotic_q_bounds(prob);
    CHECK(bounds.upper_finite);
    CHECK(bounds.lower == 0.0);
    const auto r = conservative_confidence(prob);
    const double q = std::exp(r.log_q);
    CHECK(q >= bounds.lower);
    CHECK(q <= bounds.upper * (1 + 1e-9));

    // phi2 > 0: no finite upper envelope.
    const auto open_bounds = cbi::asymptotic_q_bounds({1e-4, 1000000, p, 0.05, 0.05});
    CHECK_FALSE(open_bounds.upper_finite);
    CHECK(std::isinf(open_bounds.upper));
}

TEST_CASE("long-run behaviour differs across the phi2 = 0 boundary") {
    const Prior p = Prior::beta(1, 10000);
    // With positive-dependence doubt, late confidence decays...
    const double c5 = conservative_confidence({1e-4, 100000, p, 0.05, 0.05})
                          .conservative_confidence;
    const double c7 = conservative_confidence({1e-4, 10000000, p, 0.05, 0.05})
                          .conservative_confidence;
    CHECK(c7 < c5);
    CHECK(c7 == doctest::Approx(0.01959069232).epsilon(1e-6));
    // ...without it, confidence keeps building toward 1.
    const double closed = conservative_confidence({1e-4, 10000000, p, 0.05, 0.0})
                              .conservative_confidence;
    CHECK(closed > 0.999);
}
