#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "cbi/quadrature.hpp"

namespace cbi {

/// Shape parameters of a Beta(alpha, beta) distribution; both strictly positive.
struct BetaParams {
    double alpha;
    double beta;
};

/// A continuous prior distribution of pfd on [0,1] (prior knowledge PK1):
/// density, CDF, inverse CDF and weighted integrals, all usable in log space.
///
/// Two concrete kinds are shipped: the Beta family and a piecewise-linear
/// density given by knots. Values are immutable after construction and safe
/// to share across threads.
class Prior {
public:
    static Prior beta(double alpha, double beta);
    static Prior beta(const BetaParams& p) { return beta(p.alpha, p.beta); }

    /// Piecewise-linear density through (knots[i], densities[i]). Knots must
    /// be sorted, span [0,1], and the trapezoid integral must be 1 within
    /// 1e-9 relative.
    static Prior piecewise(std::vector<double> knots, std::vector<double> densities);

    /// log f(x). Returns +inf where the density diverges (e.g. Beta with
    /// alpha < 1 at x=0), -inf where it vanishes; never NaN.
    double log_density(double x) const;
    double density(double x) const;

    /// P(X <= u); regularized incomplete beta for the Beta kind,
    /// trapezoid-exact for the piecewise kind.
    double cdf(double u) const;

    /// Smallest u with cdf(u) ~= p, by bracketed bisection on the monotone
    /// CDF; |cdf(u) - p| <= 1e-12.
    double inverse_cdf(double p) const;

    bool is_beta() const;
    const BetaParams* beta_params() const;  ///< nullptr unless Beta kind

    /// Compact comma-free descriptor for CSV cells, e.g. "beta(1;10000)".
    std::string describe() const;

private:
    struct Piecewise {
        std::vector<double> knots;
        std::vector<double> densities;
        std::vector<double> cum;  // cdf at each knot
    };
    Prior() = default;
    std::variant<BetaParams, Piecewise> impl_;
};

/// Adaptive quadrature of the prior-weighted integral over [a,b] of
/// exp(log_weight(x)) f(x) dx, carried out in log space.
LogIntegral log_weighted_integral(const Prior& prior,
                                  const std::function<double(double)>& log_weight, double a,
                                  double b, std::span<const double> splits = {},
                                  const QuadratureOptions& opts = {});

/// Linear-space wrapper: integral over [a,b] of weight(x) f(x) dx with
/// relative error <= rel_tol. weight must be non-negative on [a,b].
double weighted_integral(const Prior& prior, const std::function<double(double)>& weight,
                         double a, double b, double rel_tol = 1e-10);

} // namespace cbi
