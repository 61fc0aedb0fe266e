#pragma once

#include <cstdint>

namespace cbi {

/// Demand count for the likelihood-difference functions g_l, g_u; the
/// theorem's machinery needs n >= 2.
struct GFunctionContext {
    std::int64_t n;
};

/// g_l(x) = L(x,x;n) - L(x,0;n) = (1-x)^n - (1-2x)^(n-1)/(1-x)^(n-2)
/// on [0, 1/2]; non-negative and unimodal.
double g_lower(const GFunctionContext& ctx, double x);
/// log g_l(x), evaluated with signed log-space subtraction so both terms
/// may underflow while their difference stays meaningful. -inf at x=0.
double log_g_lower(const GFunctionContext& ctx, double x);

/// g_u(x) = L(x,1;n) - L(x,x;n) = (1-x) - (1-x)^n on [0,1].
double g_upper(const GFunctionContext& ctx, double x);
double log_g_upper(const GFunctionContext& ctx, double x);

/// Closed-form maximizer of g_u: x_u = 1 - n^(-1/(n-1)).
double argmax_g_upper(const GFunctionContext& ctx);

/// Unique maximizer of g_l on [0, 1/2], via golden-section search on the
/// (monotone-equivalent) log form; absolute tolerance 1e-14 in x.
/// n=2 returns the boundary 0.5, where g_l = x^2 is increasing.
double argmax_g_lower(const GFunctionContext& ctx);

enum class GKind { lower, upper };
/// Which monotone branch of the unimodal g to solve on.
enum class Branch { ascending, descending };

/// Unique x on the chosen branch with g(x) equal to exp(log_target), by
/// bisection on the branch's monotone log form. Throws std::domain_error
/// when the target lies outside the branch's attainable range.
double solve_on_branch(GKind g, const GFunctionContext& ctx, double log_target, Branch branch);

} // namespace cbi
