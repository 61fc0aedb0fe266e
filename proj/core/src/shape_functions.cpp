#include "cbi/shape_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cbi {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_n(const GFunctionContext& ctx) {
    if (ctx.n < 2) throw std::domain_error("g-functions require n >= 2");
}

// log(1 - exp(d)) for d <= 0.
double log1m_exp(double d) {
    const double v = -std::expm1(d);
    return v > 0.0 ? std::log(v) : kNegInf;
}
} // namespace

double log_g_lower(const GFunctionContext& ctx, double x) {
    require_n(ctx);
    if (!(x >= 0.0 && x <= 0.5)) throw std::domain_error("g_l domain is [0, 1/2]");
    const double nd = static_cast<double>(ctx.n);
    const double log_a = nd * std::log1p(-x);
    if (x == 0.5) return log_a;  // the L(x,0;n) term vanishes
    // d = log L(x,0;n) - log L(x,x;n) = (n-1) log((1-2x)/(1-x)^2) <= 0,
    // written via (1-2x)/(1-x)^2 = 1 - (x/(1-x))^2 to avoid cancellation.
    const double r = x / (1.0 - x);
    const double d = (nd - 1.0) * std::log1p(-r * r);
    return log_a + log1m_exp(d);
}

double g_lower(const GFunctionContext& ctx, double x) { return std::exp(log_g_lower(ctx, x)); }

double log_g_upper(const GFunctionContext& ctx, double x) {
    require_n(ctx);
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("g_u domain is [0, 1]");
    const double l1 = std::log1p(-x);  // -inf at x=1
    if (x == 1.0) return kNegInf;
    return l1 + log1m_exp((static_cast<double>(ctx.n) - 1.0) * l1);
}

double g_upper(const GFunctionContext& ctx, double x) { return std::exp(log_g_upper(ctx, x)); }

double argmax_g_upper(const GFunctionContext& ctx) {
    require_n(ctx);
    const double nd = static_cast<double>(ctx.n);
    // From g_u' = -1 + n(1-x)^(n-1) = 0.
    return -std::expm1(-std::log(nd) / (nd - 1.0));
}

double argmax_g_lower(const GFunctionContext& ctx) {
    require_n(ctx);
    if (ctx.n == 2) return 0.5;  // g_l = x^2, increasing on the whole domain
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = 0.5;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = log_g_lower(ctx, c);
    double fd = log_g_lower(ctx, d);
    while (b - a > 1e-14) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = log_g_lower(ctx, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = log_g_lower(ctx, d);
        }
    }
    return 0.5 * (a + b);
}

double solve_on_branch(GKind g, const GFunctionContext& ctx, double log_target, Branch branch) {
    require_n(ctx);
    const bool lower = (g == GKind::lower);
    auto eval = [&](double x) { return lower ? log_g_lower(ctx, x) : log_g_upper(ctx, x); };
    const double apex_x = lower ? argmax_g_lower(ctx) : argmax_g_upper(ctx);
    const double apex = eval(apex_x);

    double lo, hi;
    bool increasing;
    if (branch == Branch::ascending) {
        lo = 0.0;
        hi = apex_x;
        increasing = true;
    } else {
        lo = apex_x;
        hi = lower ? 0.5 : 1.0;
        increasing = false;
    }
    const double at_far_end = eval(increasing ? lo : hi);

    if (log_target > apex || log_target < at_far_end) {
        // Tolerate targets a hair above the apex: the caller's target is often
        // g evaluated at a point bisection has driven onto the apex itself.
        if (log_target <= apex + 1e-9 && log_target >= at_far_end) return apex_x;
        throw std::domain_error(
            std::string(lower ? "g_l " : "g_u ") +
            (branch == Branch::ascending ? "ascending" : "descending") +
            " branch: log target " + std::to_string(log_target) + " outside attainable range [" +
            std::to_string(at_far_end) + ", " + std::to_string(apex) + "]");
    }

    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((eval(mid) < log_target) == increasing)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace cbi
