#pragma once

#include <cstdint>

#include "cbi/prior.hpp"
#include "cbi/shape_functions.hpp"

namespace cbi {

/// One doubt interval of the worst-case prior: [lo, hi] carries exactly the
/// requested doubt mass, with equal g-values at the ends when interior.
struct IntervalSolution {
    double lo;
    double hi;
    double mass_residual;  ///< achieved |integral of f over [lo,hi] - phi|
    double g_residual;     ///< |g(lo) - g(hi)| when interior, 0 when pinned/degenerate
    bool pinned;           ///< one endpoint pinned at the bound b
    int iterations;
};

/// The four worst-case-prior cut-points and solver diagnostics.
/// Ordering invariant: 0 <= c1_low <= c2_low <= b <= c1_high <= c2_high <= 1.
struct CutPoints {
    double c1_low;
    double c2_low;
    double c1_high;
    double c2_high;
    int case_id;  ///< which of the proof's 4 cases applied (relative sizes of x_l, x_u, b)
    double mass_residual_low;
    double mass_residual_high;
    double g_residual_low;
    double g_residual_high;
};

/// Case taxonomy from the relative positions of the g maximizers and b:
/// 1: x_l<b, x_u<b; 2: x_l<b, x_u>b; 3: x_l>b, x_u<b; 4: x_l>b, x_u>b.
/// Exact ties resolve toward the pinned-at-b branch.
int classify_case(const GFunctionContext& ctx, double b);

/// The Appendix-style bisection for the lower doubt interval [c1_low, c2_low]
/// within [0, b]: integral of f equals phi1 within eps, endpoints g_l-equal
/// when interior, c2_low pinned at b when the maximizer x_l sits at or past b
/// (or when the equal-g interval ending at b cannot hold phi1 mass).
/// Throws pk4_violation when the prior's mass below b is less than phi1.
IntervalSolution solve_lower_cutpoints(const Prior& prior, const GFunctionContext& ctx, double b,
                                       double phi1, double eps = 1e-10);

/// Mirror construction on [b, 1] with g_u: c1_high pinned at b when x_u <= b.
/// Throws pk4_violation when the prior's mass above b is less than phi2.
IntervalSolution solve_upper_cutpoints(const Prior& prior, const GFunctionContext& ctx, double b,
                                       double phi2, double eps = 1e-10);

/// All four cut-points plus the case id.
CutPoints solve_cutpoints(const Prior& prior, const GFunctionContext& ctx, double b, double phi1,
                          double phi2, double eps = 1e-10);

} // namespace cbi
