#pragma once

#include <cstdint>

#include "cbi/discrete_prior.hpp"
#include "cbi/klotz.hpp"
#include "cbi/prior.hpp"

namespace cbi {

/// Discretization for the brute-force grid optimizer: x_points equal-width
/// strips over [0,1]. Doubt mass is placed on the lambda=0 edge (below b)
/// or the lambda=1 edge (above b); remaining mass sits on the diagonal.
struct GridSpec {
    int x_points = 200;
};

struct GridInfimumResult {
    double confidence;
    DiscreteJointPrior witness;
};

/// Brute-force infimum of the posterior over discrete priors built from the
/// proof's reallocation scheme: contiguous placements of the phi1 mass on
/// the lambda=0 edge within [0,b] and the phi2 mass on the lambda=1 edge
/// within [b,1], anchored at strip edges; each candidate is evaluated
/// exactly through the finite-support posterior.
///
/// Deliberately desk-scale: exact double-precision sums need likelihoods far
/// from underflow (n <= ~50, b >= ~0.1).
GridInfimumResult grid_infimum(const Prior& prior, double b, std::int64_t n, double phi1,
                               double phi2, const GridSpec& grid);

struct McEstimate {
    double estimate;
    double std_error;
};

/// Monte Carlo estimate of the failure-free probability: fraction of
/// simulated chains with zero failures. Runs are partitioned into fixed
/// seed blocks so the result is identical regardless of thread count.
McEstimate mc_likelihood(const KlotzParams& p, std::int64_t n, std::int64_t runs,
                         std::uint64_t seed);

/// Closed-form i.i.d. posterior for a Beta prior: I_b(alpha, beta + n),
/// the conjugate-update oracle for the quadrature path.
double beta_conjugate_posterior(const BetaParams& params, double b, std::int64_t n);

} // namespace cbi
