#pragma once

#include <functional>
#include <span>

namespace cbi {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    // Panel budget; adaptive bisection toward an integrable endpoint
    // singularity needs a few hundred panels, so this is generous.
    int max_panels = 1 << 20;
};

/// Result of a log-domain integral: value = exp(log_value).
/// log_value is -inf for a zero integral.
struct LogIntegral {
    double log_value;
    double rel_error;  ///< achieved error estimate relative to the value
    int panels;
    bool converged;
};

/// Adaptive Gauss-Kronrod (G7,K15) quadrature of a non-negative integrand
/// supplied in log space: integrates exp(log_f(x)) over [a,b].
///
/// Panels are rescaled by their peak log value before summation, so
/// integrands like (1-x)^n f(x) at n ~ 1e7 are handled without underflow.
/// Kronrod nodes are interior, so endpoint-divergent densities are never
/// sampled at x=a or x=b.
///
/// `splits` lists interior points where the integrand is discontinuous;
/// the initial panel set is cut there instead of relying on adaptivity.
LogIntegral integrate_log(const std::function<double(double)>& log_f, double a, double b,
                          std::span<const double> splits = {},
                          const QuadratureOptions& opts = {});

/// Linear-space convenience wrapper for a non-negative integrand.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> splits = {}, const QuadratureOptions& opts = {});

/// log(exp(a) + exp(b)) without overflow; handles -inf.
double log_add(double a, double b);

} // namespace cbi
