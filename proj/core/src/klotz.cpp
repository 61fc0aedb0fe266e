#include "cbi/klotz.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace cbi {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_in_region(const KlotzParams& p) {
    if (!in_region(p))
        throw std::domain_error("(x=" + std::to_string(p.x) + ", lambda=" +
                                std::to_string(p.lambda) + ") is outside the feasible region");
}
} // namespace

bool in_region(double x, double lambda) {
    if (!(x >= 0.0 && x < 1.0)) return false;
    if (!(lambda >= 0.0 && lambda <= 1.0)) return false;
    const double lower = x > 0.0 ? std::max(0.0, (2.0 * x - 1.0) / x) : 0.0;
    return lambda >= lower;
}

TransitionProbs transition_probs(const KlotzParams& p) {
    require_in_region(p);
    const double fail_after_success = (1.0 - p.lambda) * p.x / (1.0 - p.x);
    return {p.lambda, 1.0 - p.lambda, fail_after_success, 1.0 - fail_after_success};
}

double log_likelihood_ff(const KlotzParams& p, std::int64_t n) {
    if (n < 1) throw std::domain_error("likelihood requires n >= 1");
    if (p.x == 1.0 && p.lambda == 1.0) return kNegInf;  // limit convention
    require_in_region(p);
    const double t = (1.0 - p.lambda) * p.x / (1.0 - p.x);
    if (t >= 1.0) return kNegInf;  // boundary x = 1/(2-lambda)
    return std::log1p(-p.x) + static_cast<double>(n - 1) * std::log1p(-t);
}

double likelihood_ff(const KlotzParams& p, std::int64_t n) {
    if (n < 1) throw std::domain_error("likelihood requires n >= 1");
    if (p.x == 1.0 && p.lambda == 1.0) return 0.0;  // limit convention
    require_in_region(p);
    const double t = (1.0 - p.lambda) * p.x / (1.0 - p.x);
    if (t >= 1.0) return 0.0;
    // Keeping the (1-x) factor outside the exponential makes the
    // lambda=1 identity L(x,1;n) = 1-x hold exactly.
    return (1.0 - p.x) * std::exp(static_cast<double>(n - 1) * std::log1p(-t));
}

std::string ChainOutcome::to_line() const {
    std::string line;
    line.reserve(trials.size());
    for (std::uint8_t t : trials) line.push_back(t ? '1' : '0');
    return line;
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + stream * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

ChainOutcome simulate_chain(const KlotzParams& p, std::int64_t n, std::uint64_t seed) {
    require_in_region(p);
    if (n < 0) throw std::domain_error("simulate_chain requires n >= 0");
    const TransitionProbs tp = transition_probs(p);

    std::mt19937_64 rng(split_seed(seed, 0));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    ChainOutcome out;
    out.seed = seed;
    out.trials.resize(static_cast<std::size_t>(n));
    bool failed = false;
    for (std::int64_t i = 0; i < n; ++i) {
        const double threshold = (i == 0) ? p.x : (failed ? tp.fail_after_fail : tp.fail_after_success);
        failed = unit(rng) < threshold;
        out.trials[static_cast<std::size_t>(i)] = failed ? 1 : 0;
    }
    return out;
}

} // namespace cbi
