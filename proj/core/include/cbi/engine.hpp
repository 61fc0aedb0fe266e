#pragma once

#include <cstdint>

#include "cbi/cutpoints.hpp"
#include "cbi/discrete_prior.hpp"
#include "cbi/prior.hpp"

namespace cbi {

/// The theorem's input bundle: bound, failure-free demand count, marginal
/// pfd prior, and the doubt masses on negative/positive dependence.
struct AssessmentProblem {
    double b;
    std::int64_t n;
    Prior prior;
    double phi1;
    double phi2;

    /// Checks 0 < b < 1/2, n >= 2, phi1+phi2 <= 1 and PK4
    /// (phi1 <= cdf(b) <= 1-phi2); throws on violation.
    void validate() const;
};

struct QResult {
    double log_q;       ///< log of the Eq.-ratio; +inf when the denominator underflows
    CutPoints cutpoints;
    double quadrature_error;  ///< worst relative quadrature error among the segments
};

/// Worst-case posterior ratio Q: numerator and denominator integrals are
/// split exactly at the cut-points and accumulated in log space.
QResult compute_q(const AssessmentProblem& problem, double eps = 1e-10,
                  double quad_rel_tol = 1e-10);

struct ConfidenceResult {
    double log_q;
    double q_value;                 ///< exp(log_q); may overflow to +inf, use log_q then
    double conservative_confidence; ///< 1/(1+Q), evaluated stably
    double iid_confidence;          ///< the i.i.d. special case for the same prior, b, n
    CutPoints cutpoints;
    double quadrature_error;
};

/// Full assessment: Q, conservative confidence 1/(1+Q), the i.i.d.
/// confidence, cut-points and diagnostics.
ConfidenceResult conservative_confidence(const AssessmentProblem& problem, double eps = 1e-10,
                                         double quad_rel_tol = 1e-10);

/// Posterior confidence under the i.i.d. assumption:
/// integral_0^b (1-x)^n f / integral_0^1 (1-x)^n f, by quadrature. n >= 0.
double iid_posterior(const Prior& prior, double b, std::int64_t n, double quad_rel_tol = 1e-10);

/// Exact posterior confidence for an explicit finite joint prior:
/// sum of L(x_i, lambda_i; n) p_i over {x_i <= b}, over the total.
double posterior_for_joint_prior(const DiscreteJointPrior& joint, double b, std::int64_t n);

struct QBounds {
    double lower;       ///< always 0
    double upper;
    bool upper_finite;  ///< false when phi2 > 0 (Q diverges as n grows)
};

/// Chord-and-tangent (Jensen) envelope for Q. Finite only on the phi2 = 0
/// path, where the upper bound decays to 0 as n grows.
QBounds asymptotic_q_bounds(const AssessmentProblem& problem, double eps = 1e-10,
                            double quad_rel_tol = 1e-10);

} // namespace cbi
