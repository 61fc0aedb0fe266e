#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cbi {

/// A point (x, lambda) in the Klotz model's feasible region R:
/// x is the pfd, lambda is P(failure follows failure).
struct KlotzParams {
    double x;
    double lambda;
};

/// Membership in R: 0 <= x < 1 and max{0, (2x-1)/x} <= lambda <= 1,
/// with the lower bound read as 0 when x = 0.
bool in_region(double x, double lambda);
inline bool in_region(const KlotzParams& p) { return in_region(p.x, p.lambda); }

/// One-step transition probabilities of the stationary chain.
struct TransitionProbs {
    double fail_after_fail;        // P(1|1) = lambda
    double success_after_fail;     // P(0|1)
    double fail_after_success;     // P(1|0) = (1-lambda)x/(1-x)
    double success_after_success;  // P(0|0)
};

TransitionProbs transition_probs(const KlotzParams& p);

/// Probability of n failure-free demands:
/// L(x,lambda;n) = (1-x)(1 - (1-lambda)x/(1-x))^(n-1).
/// The limit convention L(1,1;n) = 0 is honoured.
double likelihood_ff(const KlotzParams& p, std::int64_t n);

/// log of likelihood_ff; -inf where the likelihood is zero.
double log_likelihood_ff(const KlotzParams& p, std::int64_t n);

/// A simulated outcome sequence (0 = success, 1 = failure).
struct ChainOutcome {
    std::vector<std::uint8_t> trials;
    std::uint64_t seed;

    std::string to_line() const;  ///< compact "0100..." debug form
};

/// Simulate n demands; T1 is drawn from the stationary marginal
/// P(T1=1) = x, subsequent draws from the transition probabilities.
/// Reproducible for a fixed seed.
ChainOutcome simulate_chain(const KlotzParams& p, std::int64_t n, std::uint64_t seed);

/// splitmix64 step; used to derive independent sub-seeds.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace cbi
