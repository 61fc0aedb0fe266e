#include "cbi/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cbi/errors.hpp"
#include "cbi/quadrature.hpp"

namespace cbi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double stable_inverse_one_plus_exp(double log_q) {
    if (log_q == -kInf) return 1.0;
    if (log_q == kInf) return 0.0;
    if (log_q <= 0.0) return 1.0 / (1.0 + std::exp(log_q));
    const double t = std::exp(-log_q);
    return t / (1.0 + t);
}

struct Segment {
    double a, b;
    const std::function<double(double)>* log_weight;
};

// logsumexp of the prior-weighted integrals over the segments; tracks the
// worst relative quadrature error seen.
double sum_segments(const Prior& prior, std::span<const Segment> segments,
                    const QuadratureOptions& opts, double* worst_error) {
    double total = -kInf;
    for (const Segment& s : segments) {
        if (!(s.b > s.a)) continue;
        const LogIntegral part = log_weighted_integral(prior, *s.log_weight, s.a, s.b, {}, opts);
        if (!part.converged)
            throw convergence_error("quadrature did not converge on a Q segment", part.rel_error,
                                    part.panels);
        total = log_add(total, part.log_value);
        if (worst_error) *worst_error = std::max(*worst_error, part.rel_error);
    }
    return total;
}

} // namespace

void AssessmentProblem::validate() const {
    if (!(b > 0.0 && b < 0.5)) throw std::domain_error("theorem requires 0 < b < 1/2");
    if (n < 2) throw std::domain_error("theorem requires n >= 2");
    if (!(phi1 >= 0.0 && phi2 >= 0.0 && phi1 + phi2 <= 1.0))
        throw std::domain_error("doubts must satisfy phi1, phi2 >= 0 and phi1 + phi2 <= 1");
    const double prior_conf = prior.cdf(b);
    if (prior_conf < phi1)
        throw pk4_violation("prior confidence in b is " + std::to_string(prior_conf) +
                            " < phi1 = " + std::to_string(phi1));
    if (prior_conf > 1.0 - phi2)
        throw pk4_violation("prior confidence in b is " + std::to_string(prior_conf) +
                            " > 1 - phi2 = " + std::to_string(1.0 - phi2));
}

QResult compute_q(const AssessmentProblem& problem, double eps, double quad_rel_tol) {
    problem.validate();
    const GFunctionContext ctx{problem.n};
    const CutPoints cp =
        solve_cutpoints(problem.prior, ctx, problem.b, problem.phi1, problem.phi2, eps);

    const double nd = static_cast<double>(problem.n);
    const std::function<double(double)> log_survive_iid = [nd](double x) {
        return nd * std::log1p(-x);  // (1-x)^n
    };
    const std::function<double(double)> log_survive_dep = [](double x) {
        return std::log1p(-x);  // (1-x), the lambda=1 likelihood
    };
    const std::function<double(double)> log_survive_alt = [nd](double x) {
        // (1-2x)^(n-1)/(1-x)^(n-2): only evaluated on (c1_low, c2_low) in [0, b],
        // where 1-2x > 0 so the expression stays non-negative.
        if (!(x < 0.5)) throw std::domain_error("alternating-likelihood weight needs x < 1/2");
        return (nd - 1.0) * std::log1p(-2.0 * x) - (nd - 2.0) * std::log1p(-x);
    };

    QuadratureOptions opts;
    opts.rel_tol = quad_rel_tol;
    double worst_error = 0.0;

    const Segment numerator[] = {{problem.b, cp.c1_high, &log_survive_iid},
                                 {cp.c1_high, cp.c2_high, &log_survive_dep},
                                 {cp.c2_high, 1.0, &log_survive_iid}};
    const Segment denominator[] = {{0.0, cp.c1_low, &log_survive_iid},
                                   {cp.c1_low, cp.c2_low, &log_survive_alt},
                                   {cp.c2_low, problem.b, &log_survive_iid}};

    const double log_num = sum_segments(problem.prior, numerator, opts, &worst_error);
    const double log_den = sum_segments(problem.prior, denominator, opts, &worst_error);

    double log_q;
    if (log_den == -kInf)
        log_q = kInf;  // confidence indistinguishable from 0
    else if (log_num == -kInf)
        log_q = -kInf;
    else
        log_q = log_num - log_den;
    return {log_q, cp, worst_error};
}

ConfidenceResult conservative_confidence(const AssessmentProblem& problem, double eps,
                                         double quad_rel_tol) {
    const QResult q = compute_q(problem, eps, quad_rel_tol);
    ConfidenceResult result;
    result.log_q = q.log_q;
    result.q_value = std::exp(q.log_q);
    result.conservative_confidence = stable_inverse_one_plus_exp(q.log_q);
    result.iid_confidence = iid_posterior(problem.prior, problem.b, problem.n, quad_rel_tol);
    result.cutpoints = q.cutpoints;
    result.quadrature_error = q.quadrature_error;
    return result;
}

double iid_posterior(const Prior& prior, double b, std::int64_t n, double quad_rel_tol) {
    if (!(b >= 0.0 && b <= 1.0)) throw std::domain_error("bound b must lie in [0,1]");
    if (n < 0) throw std::domain_error("iid_posterior requires n >= 0");
    const double nd = static_cast<double>(n);
    const std::function<double(double)> log_w = [nd](double x) { return nd * std::log1p(-x); };
    QuadratureOptions opts;
    opts.rel_tol = quad_rel_tol;
    const double log_below = log_weighted_integral(prior, log_w, 0.0, b, {}, opts).log_value;
    const double log_above = log_weighted_integral(prior, log_w, b, 1.0, {}, opts).log_value;
    if (log_below == -kInf) return 0.0;
    return stable_inverse_one_plus_exp(log_above - log_below);
}

double posterior_for_joint_prior(const DiscreteJointPrior& joint, double b, std::int64_t n) {
    joint.validate();
    double below = 0.0, total = 0.0;
    for (const PriorAtom& atom : joint.atoms) {
        const double contribution = likelihood_ff({atom.x, atom.lambda}, n) * atom.mass;
        total += contribution;
        if (atom.x <= b) below += contribution;
    }
    if (total == 0.0) throw zero_likelihood_error();
    return below / total;
}

QBounds asymptotic_q_bounds(const AssessmentProblem& problem, double eps, double quad_rel_tol) {
    problem.validate();
    if (problem.phi2 > 0.0) return {0.0, kInf, false};

    const GFunctionContext ctx{problem.n};
    const IntervalSolution low =
        solve_lower_cutpoints(problem.prior, ctx, problem.b, problem.phi1, eps);
    const double c1 = low.lo, c2 = low.hi;
    const Prior& prior = problem.prior;
    const double nd = static_cast<double>(problem.n);

    auto truncated_mean = [&](double a, double b2, double mass) {
        // E[X | a < X < b2]; the weight x is evaluable in log space since x >= 0.
        const std::function<double(double)> log_x = [](double x) {
            return x > 0.0 ? std::log(x) : -kInf;
        };
        QuadratureOptions opts;
        opts.rel_tol = quad_rel_tol;
        return std::exp(log_weighted_integral(prior, log_x, a, b2, {}, opts).log_value) / mass;
    };

    const double mass_lo = prior.cdf(c1);
    const double mass_mid = prior.cdf(problem.b) - prior.cdf(c2);
    const double mass_hi = 1.0 - prior.cdf(problem.b);

    // log of the chord bound on the numerator.
    const double mean_hi = truncated_mean(problem.b, 1.0, mass_hi);
    const double log_num =
        std::log1p(-mean_hi) - std::log1p(-problem.b) + std::log(mass_hi);

    // log of the tangent bounds on the two (1-x)^n pieces of the denominator.
    double log_den = -kInf;
    if (mass_lo > 0.0) {
        const double mean = truncated_mean(0.0, c1, mass_lo);
        log_den = log_add(log_den, nd * (std::log1p(-mean) - std::log1p(-problem.b)) +
                                       std::log(mass_lo));
    }
    if (mass_mid > 0.0) {
        const double mean = truncated_mean(c2, problem.b, mass_mid);
        log_den = log_add(log_den, nd * (std::log1p(-mean) - std::log1p(-problem.b)) +
                                       std::log(mass_mid));
    }
    if (log_den == -kInf) return {0.0, kInf, false};
    return {0.0, std::exp(log_num - log_den), true};
}

} // namespace cbi
