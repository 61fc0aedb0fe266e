#include "cbi/cutpoints.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cbi/errors.hpp"

namespace cbi {

namespace {

constexpr int kMaxBisection = 200;

void check_problem(const GFunctionContext& ctx, double b, double phi, const char* which) {
    if (ctx.n < 2) throw std::domain_error("cut-point solver requires n >= 2");
    if (!(b > 0.0 && b < 0.5)) throw std::domain_error("cut-point solver requires 0 < b < 1/2");
    if (!(phi >= 0.0 && phi <= 1.0))
        throw std::domain_error(std::string(which) + " must lie in [0,1]");
}

double g_gap(const GFunctionContext& ctx, GKind g, double lo, double hi) {
    auto eval = [&](double x) {
        return g == GKind::lower ? g_lower(ctx, x) : g_upper(ctx, x);
    };
    return std::abs(eval(lo) - eval(hi));
}

} // namespace

int classify_case(const GFunctionContext& ctx, double b) {
    if (ctx.n < 2) throw std::domain_error("classify_case requires n >= 2");
    if (!(b > 0.0 && b < 0.5)) throw std::domain_error("classify_case requires 0 < b < 1/2");
    const bool xl_low = argmax_g_lower(ctx) < b;   // tie pins c2_low at b
    const bool xu_high = argmax_g_upper(ctx) > b;  // tie pins c1_high at b
    if (xl_low) return xu_high ? 2 : 1;
    return xu_high ? 4 : 3;
}

IntervalSolution solve_lower_cutpoints(const Prior& prior, const GFunctionContext& ctx, double b,
                                       double phi1, double eps) {
    check_problem(ctx, b, phi1, "phi1");
    const double mass_below = prior.cdf(b);
    if (mass_below < phi1) throw pk4_violation("prior mass below b is " +
                                               std::to_string(mass_below) + " < phi1");
    if (phi1 == 0.0) return {b, b, 0.0, 0.0, false, 0};

    const double x_l = argmax_g_lower(ctx);
    auto pin_at_b = [&]() -> IntervalSolution {
        const double c1 = prior.inverse_cdf(mass_below - phi1);
        const double residual = std::abs((mass_below - prior.cdf(c1)) - phi1);
        return {c1, b, residual, 0.0, true, 0};
    };
    if (x_l >= b) return pin_at_b();  // proof cases 3/4

    const double log_target_b = log_g_lower(ctx, b);
    const double candidate = solve_on_branch(GKind::lower, ctx, log_target_b, Branch::ascending);
    if (mass_below - prior.cdf(candidate) < phi1) return pin_at_b();

    double lo = x_l, hi = b;
    double c2 = b, c1 = candidate;
    for (int i = 1; i <= kMaxBisection; ++i) {
        c1 = solve_on_branch(GKind::lower, ctx, log_g_lower(ctx, c2), Branch::ascending);
        const double mass = prior.cdf(c2) - prior.cdf(c1);
        const double residual = std::abs(mass - phi1);
        if (residual <= eps)
            return {c1, c2, residual, g_gap(ctx, GKind::lower, c1, c2), false, i};
        if (mass > phi1)
            hi = c2;
        else
            lo = c2;
        c2 = 0.5 * (lo + hi);
    }
    throw convergence_error("lower cut-point bisection did not converge",
                            std::abs(prior.cdf(c2) - prior.cdf(c1) - phi1), kMaxBisection);
}

IntervalSolution solve_upper_cutpoints(const Prior& prior, const GFunctionContext& ctx, double b,
                                       double phi2, double eps) {
    check_problem(ctx, b, phi2, "phi2");
    const double mass_above = 1.0 - prior.cdf(b);
    if (mass_above < phi2) throw pk4_violation("prior mass above b is " +
                                               std::to_string(mass_above) + " < phi2");
    if (phi2 == 0.0) return {b, b, 0.0, 0.0, false, 0};

    const double x_u = argmax_g_upper(ctx);
    auto pin_at_b = [&]() -> IntervalSolution {
        const double c2 = prior.inverse_cdf(prior.cdf(b) + phi2);
        const double residual = std::abs((prior.cdf(c2) - prior.cdf(b)) - phi2);
        return {b, c2, residual, 0.0, true, 0};
    };
    if (x_u <= b) return pin_at_b();  // proof cases 1/3

    const double log_target_b = log_g_upper(ctx, b);
    const double candidate = solve_on_branch(GKind::upper, ctx, log_target_b, Branch::descending);
    if (prior.cdf(candidate) - prior.cdf(b) < phi2) return pin_at_b();

    double lo = b, hi = x_u;
    double v = b, w = candidate;
    for (int i = 1; i <= kMaxBisection; ++i) {
        w = solve_on_branch(GKind::upper, ctx, log_g_upper(ctx, v), Branch::descending);
        const double mass = prior.cdf(w) - prior.cdf(v);
        const double residual = std::abs(mass - phi2);
        if (residual <= eps)
            return {v, w, residual, g_gap(ctx, GKind::upper, v, w), false, i};
        if (mass > phi2)
            lo = v;  // shrink the interval by moving v toward the apex
        else
            hi = v;
        v = 0.5 * (lo + hi);
    }
    throw convergence_error("upper cut-point bisection did not converge",
                            std::abs(prior.cdf(w) - prior.cdf(v) - phi2), kMaxBisection);
}

CutPoints solve_cutpoints(const Prior& prior, const GFunctionContext& ctx, double b, double phi1,
                          double phi2, double eps) {
    const IntervalSolution low = solve_lower_cutpoints(prior, ctx, b, phi1, eps);
    const IntervalSolution high = solve_upper_cutpoints(prior, ctx, b, phi2, eps);
    return {low.lo,  low.hi,  high.lo, high.hi, classify_case(ctx, b),
            low.mass_residual, high.mass_residual, low.g_residual, high.g_residual};
}

} // namespace cbi
