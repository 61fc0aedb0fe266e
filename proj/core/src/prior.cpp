#include "cbi/prior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

namespace cbi {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_unit_interval(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error(std::string(what) + " must lie in [0,1]");
}
} // namespace

Prior Prior::beta(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("Beta prior requires alpha > 0 and beta > 0");
    Prior p;
    p.impl_ = BetaParams{alpha, beta};
    return p;
}

Prior Prior::piecewise(std::vector<double> knots, std::vector<double> densities) {
    if (knots.size() < 2 || knots.size() != densities.size())
        throw std::invalid_argument("piecewise prior needs matching knots/densities, at least 2");
    if (knots.front() != 0.0 || knots.back() != 1.0)
        throw std::invalid_argument("piecewise knots must span [0,1]");
    if (!std::is_sorted(knots.begin(), knots.end()))
        throw std::invalid_argument("piecewise knots must be sorted");
    for (double d : densities)
        if (!(d >= 0.0)) throw std::invalid_argument("piecewise densities must be non-negative");

    Piecewise pw;
    pw.cum.resize(knots.size(), 0.0);
    for (std::size_t i = 1; i < knots.size(); ++i) {
        const double seg = 0.5 * (densities[i - 1] + densities[i]) * (knots[i] - knots[i - 1]);
        pw.cum[i] = pw.cum[i - 1] + seg;
    }
    const double total = pw.cum.back();
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("piecewise density integrates to " + std::to_string(total) +
                                    ", expected 1");
    // Remove the residual rounding so cdf(1) is exactly 1.
    for (double& c : pw.cum) c /= total;
    pw.knots = std::move(knots);
    pw.densities = std::move(densities);

    Prior p;
    p.impl_ = std::move(pw);
    return p;
}

double Prior::log_density(double x) const {
    check_unit_interval(x, "density argument");
    if (const auto* bp = std::get_if<BetaParams>(&impl_)) {
        const double a = bp->alpha, b = bp->beta;
        const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
        if (x == 0.0) {
            if (a < 1.0) return kInf;
            if (a > 1.0) return -kInf;
            return log_norm;  // alpha == 1: f(0) = beta
        }
        if (x == 1.0) {
            if (b < 1.0) return kInf;
            if (b > 1.0) return -kInf;
            return log_norm;
        }
        return log_norm + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x);
    }
    const double d = density(x);
    return d > 0.0 ? std::log(d) : -kInf;
}

double Prior::density(double x) const {
    if (const auto* bp = std::get_if<BetaParams>(&impl_)) {
        (void)bp;
        return std::exp(log_density(x));
    }
    check_unit_interval(x, "density argument");
    const auto& pw = std::get<Piecewise>(impl_);
    const auto it = std::upper_bound(pw.knots.begin(), pw.knots.end(), x);
    const std::size_t hi = std::min<std::size_t>(it - pw.knots.begin(), pw.knots.size() - 1);
    const std::size_t lo = hi - 1;
    const double span = pw.knots[hi] - pw.knots[lo];
    if (span <= 0.0) return pw.densities[hi];
    const double t = (x - pw.knots[lo]) / span;
    return pw.densities[lo] + t * (pw.densities[hi] - pw.densities[lo]);
}

double Prior::cdf(double u) const {
    check_unit_interval(u, "cdf argument");
    if (const auto* bp = std::get_if<BetaParams>(&impl_)) {
        if (u == 0.0) return 0.0;
        if (u == 1.0) return 1.0;
        return boost::math::ibeta(bp->alpha, bp->beta, u);
    }
    const auto& pw = std::get<Piecewise>(impl_);
    const auto it = std::upper_bound(pw.knots.begin(), pw.knots.end(), u);
    const std::size_t hi = std::min<std::size_t>(it - pw.knots.begin(), pw.knots.size() - 1);
    const std::size_t lo = hi - 1;
    const double span = pw.knots[hi] - pw.knots[lo];
    if (span <= 0.0) return pw.cum[lo];
    const double dx = u - pw.knots[lo];
    const double slope = (pw.densities[hi] - pw.densities[lo]) / span;
    return std::min(1.0, pw.cum[lo] + pw.densities[lo] * dx + 0.5 * slope * dx * dx);
}

double Prior::inverse_cdf(double p) const {
    check_unit_interval(p, "inverse_cdf argument");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

bool Prior::is_beta() const { return std::holds_alternative<BetaParams>(impl_); }

const BetaParams* Prior::beta_params() const { return std::get_if<BetaParams>(&impl_); }

std::string Prior::describe() const {
    std::ostringstream out;
    if (const auto* bp = beta_params()) {
        out << "beta(" << bp->alpha << ";" << bp->beta << ")";
    } else {
        out << "piecewise(" << std::get<Piecewise>(impl_).knots.size() << " knots)";
    }
    return out.str();
}

LogIntegral log_weighted_integral(const Prior& prior,
                                  const std::function<double(double)>& log_weight, double a,
                                  double b, std::span<const double> splits,
                                  const QuadratureOptions& opts) {
    check_unit_interval(a, "integral lower limit");
    check_unit_interval(b, "integral upper limit");
    auto log_f = [&](double x) { return log_weight(x) + prior.log_density(x); };
    return integrate_log(log_f, a, b, splits, opts);
}

double weighted_integral(const Prior& prior, const std::function<double(double)>& weight,
                         double a, double b, double rel_tol) {
    auto log_w = [&weight](double x) {
        const double w = weight(x);
        if (w < 0.0) throw std::domain_error("weighted_integral: weight must be non-negative");
        return w > 0.0 ? std::log(w) : -kInf;
    };
    QuadratureOptions opts;
    opts.rel_tol = rel_tol;
    return std::exp(log_weighted_integral(prior, log_w, a, b, {}, opts).log_value);
}

} // namespace cbi
