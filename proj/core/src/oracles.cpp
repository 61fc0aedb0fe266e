#include "cbi/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "cbi/errors.hpp"

namespace cbi {

namespace {

// Diagonal atoms (lambda = x) for the strip portions covering [lo, hi].
void append_diagonal_atoms(const Prior& prior, const std::vector<double>& edges, double lo,
                           double hi, std::vector<PriorAtom>& out) {
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = std::max(edges[i], lo);
        const double b = std::min(edges[i + 1], hi);
        if (b <= a) continue;
        const double mass = prior.cdf(b) - prior.cdf(a);
        if (mass <= 0.0) continue;
        const double mid = 0.5 * (a + b);
        out.push_back({mid, mid, mass});
    }
}

// Edge atoms at fixed lambda for the strip portions covering [lo, hi].
void append_edge_atoms(const Prior& prior, const std::vector<double>& edges, double lo, double hi,
                       double lambda, std::vector<PriorAtom>& out) {
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = std::max(edges[i], lo);
        const double b = std::min(edges[i + 1], hi);
        if (b <= a) continue;
        const double mass = prior.cdf(b) - prior.cdf(a);
        if (mass <= 0.0) continue;
        out.push_back({0.5 * (a + b), lambda, mass});
    }
}

double likelihood_sum(const std::vector<PriorAtom>& atoms, std::int64_t n) {
    double total = 0.0;
    for (const PriorAtom& atom : atoms) total += likelihood_ff({atom.x, atom.lambda}, n) * atom.mass;
    return total;
}

} // namespace

GridInfimumResult grid_infimum(const Prior& prior, double b, std::int64_t n, double phi1,
                               double phi2, const GridSpec& grid) {
    if (grid.x_points < 2) throw std::invalid_argument("grid needs at least 2 strips");
    if (!(b > 0.0 && b < 0.5)) throw std::domain_error("grid oracle requires 0 < b < 1/2");
    if (n < 1) throw std::domain_error("grid oracle requires n >= 1");
    const double mass_below = prior.cdf(b);
    if (mass_below < phi1) throw pk4_violation("grid oracle: prior mass below b < phi1");
    if (1.0 - mass_below < phi2) throw pk4_violation("grid oracle: prior mass above b < phi2");

    std::vector<double> edges(static_cast<std::size_t>(grid.x_points) + 1);
    for (std::size_t i = 0; i < edges.size(); ++i)
        edges[i] = static_cast<double>(i) / static_cast<double>(grid.x_points);

    // The lower placement only affects the x <= b likelihood sum and the
    // upper placement only the x > b sum, so the joint minimum of
    // S_low / (S_low + S_high) factorizes: minimize S_low, maximize S_high.
    std::vector<double> lower_starts{0.0};
    std::vector<double> upper_starts{b};
    for (double e : edges) {
        if (e > 0.0 && e < b) lower_starts.push_back(e);
        if (e > b && e < 1.0) upper_starts.push_back(e);
    }

    double best_low = std::numeric_limits<double>::infinity();
    std::vector<PriorAtom> best_low_atoms;
    for (double r : lower_starts) {
        if (mass_below - prior.cdf(r) < phi1) continue;  // interval cannot hold the mass
        const double s = phi1 > 0.0 ? prior.inverse_cdf(prior.cdf(r) + phi1) : r;
        if (s > b * (1.0 + 1e-12)) continue;
        std::vector<PriorAtom> atoms;
        append_diagonal_atoms(prior, edges, 0.0, r, atoms);
        append_edge_atoms(prior, edges, r, s, 0.0, atoms);
        append_diagonal_atoms(prior, edges, s, b, atoms);
        const double value = likelihood_sum(atoms, n);
        if (value < best_low) {
            best_low = value;
            best_low_atoms = std::move(atoms);
        }
    }
    if (best_low_atoms.empty()) throw pk4_violation("grid oracle: no feasible phi1 placement");

    double best_high = -1.0;
    std::vector<PriorAtom> best_high_atoms;
    for (double v : upper_starts) {
        if (1.0 - prior.cdf(v) < phi2) continue;
        const double w = phi2 > 0.0 ? prior.inverse_cdf(prior.cdf(v) + phi2) : v;
        std::vector<PriorAtom> atoms;
        append_diagonal_atoms(prior, edges, b, v, atoms);
        append_edge_atoms(prior, edges, v, w, 1.0, atoms);
        append_diagonal_atoms(prior, edges, w, 1.0, atoms);
        const double value = likelihood_sum(atoms, n);
        if (value > best_high) {
            best_high = value;
            best_high_atoms = std::move(atoms);
        }
    }
    if (best_high_atoms.empty()) throw pk4_violation("grid oracle: no feasible phi2 placement");

    GridInfimumResult result;
    result.confidence = best_low / (best_low + best_high);
    result.witness.atoms = std::move(best_low_atoms);
    result.witness.atoms.insert(result.witness.atoms.end(), best_high_atoms.begin(),
                                best_high_atoms.end());
    // Strip masses are CDF differences; rescale away the telescoped rounding
    // so the witness satisfies the exact-normalization invariant.
    double total = 0.0;
    for (const PriorAtom& atom : result.witness.atoms) total += atom.mass;
    for (PriorAtom& atom : result.witness.atoms) atom.mass /= total;
    return result;
}

McEstimate mc_likelihood(const KlotzParams& p, std::int64_t n, std::int64_t runs,
                         std::uint64_t seed) {
    if (runs < 1000) throw std::domain_error("mc_likelihood needs at least 1000 runs");
    if (!in_region(p)) throw std::domain_error("mc_likelihood: parameters outside the region");
    const TransitionProbs tp = transition_probs(p);

    constexpr int kBlocks = 16;  // fixed partition keeps results thread-count independent
    auto run_block = [&](int block) -> std::int64_t {
        const std::int64_t lo = runs * block / kBlocks;
        const std::int64_t hi = runs * (block + 1) / kBlocks;
        std::mt19937_64 rng(split_seed(seed, static_cast<std::uint64_t>(block) + 1));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::int64_t all_success = 0;
        for (std::int64_t r = lo; r < hi; ++r) {
            bool failed = false;
            bool any_failure = false;
            for (std::int64_t i = 0; i < n && !any_failure; ++i) {
                const double threshold =
                    (i == 0) ? p.x : (failed ? tp.fail_after_fail : tp.fail_after_success);
                failed = unit(rng) < threshold;
                any_failure = failed;
            }
            if (!any_failure) ++all_success;
        }
        return all_success;
    };

    std::vector<std::future<std::int64_t>> futures;
    futures.reserve(kBlocks);
    for (int block = 0; block < kBlocks; ++block)
        futures.push_back(std::async(std::launch::async, run_block, block));
    std::int64_t successes = 0;
    for (auto& f : futures) successes += f.get();

    const double estimate = static_cast<double>(successes) / static_cast<double>(runs);
    const double std_error =
        std::sqrt(estimate * (1.0 - estimate) / static_cast<double>(runs));
    return {estimate, std_error};
}

double beta_conjugate_posterior(const BetaParams& params, double b, std::int64_t n) {
    if (!(b >= 0.0 && b <= 1.0)) throw std::domain_error("bound b must lie in [0,1]");
    if (n < 0) throw std::domain_error("beta_conjugate_posterior requires n >= 0");
    if (b == 0.0) return 0.0;
    if (b == 1.0) return 1.0;
    return boost::math::ibeta(params.alpha, params.beta + static_cast<double>(n), b);
}

} // namespace cbi
