#include "cbi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cbi {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// (G7,K15) abscissae on [0,1] with Gauss and Kronrod weights.
// Rows with zero Gauss weight are Kronrod-only nodes.
constexpr double kNodes[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

struct Panel {
    double a, b;
    double log_value;  // log of the K15 estimate
    double log_error;  // log of |K15 - G7| scaled estimate
};

Panel evaluate_panel(const std::function<double(double)>& log_f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double logv[15];
    int count = 0;
    logv[count++] = log_f(mid);
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kNodes[i][0];
        logv[count++] = log_f(mid + dx);
        logv[count++] = log_f(mid - dx);
    }

    double peak = kNegInf;
    for (int i = 0; i < count; ++i) peak = std::max(peak, logv[i]);
    if (!(peak > kNegInf)) return {a, b, kNegInf, kNegInf};
    if (std::isinf(peak)) throw std::domain_error("integrand is infinite at a quadrature node");

    double kron = kNodes[0][2] * std::exp(logv[0] - peak);
    double gauss = kNodes[0][1] * std::exp(logv[0] - peak);
    int idx = 1;
    for (int i = 1; i < 8; ++i) {
        const double pair = std::exp(logv[idx] - peak) + std::exp(logv[idx + 1] - peak);
        idx += 2;
        kron += kNodes[i][2] * pair;
        gauss += kNodes[i][1] * pair;
    }

    const double log_val = (kron > 0.0) ? peak + std::log(kron * half) : kNegInf;
    const double diff = std::abs(kron - gauss);
    const double log_err = (diff > 0.0) ? peak + std::log(diff * half) : kNegInf;
    return {a, b, log_val, log_err};
}

} // namespace

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

LogIntegral integrate_log(const std::function<double(double)>& log_f, double a, double b,
                          std::span<const double> splits, const QuadratureOptions& opts) {
    if (!(a <= b)) throw std::domain_error("integrate_log: requires a <= b");
    if (a == b) return {kNegInf, 0.0, 0, true};

    std::vector<double> edges;
    edges.push_back(a);
    for (double s : splits)
        if (s > a && s < b) edges.push_back(s);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());

    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        if (edges[i + 1] > edges[i]) panels.push_back(evaluate_panel(log_f, edges[i], edges[i + 1]));

    const double log_tol = std::log(opts.rel_tol);
    double total = kNegInf, err = kNegInf;
    while (true) {
        total = kNegInf;
        err = kNegInf;
        std::size_t worst = 0;
        double worst_err = kNegInf;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total = log_add(total, panels[i].log_value);
            err = log_add(err, panels[i].log_error);
            if (panels[i].log_error > worst_err) {
                worst_err = panels[i].log_error;
                worst = i;
            }
        }
        if (total == kNegInf) return {kNegInf, 0.0, static_cast<int>(panels.size()), true};
        if (err <= total + log_tol)
            return {total, std::exp(err - total), static_cast<int>(panels.size()), true};
        if (static_cast<int>(panels.size()) >= opts.max_panels) break;

        const Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b)) break;  // bracket exhausted at double precision
        panels[worst] = evaluate_panel(log_f, p.a, mid);
        panels.push_back(evaluate_panel(log_f, mid, p.b));
    }
    return {total, std::exp(err - total), static_cast<int>(panels.size()), false};
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> splits, const QuadratureOptions& opts) {
    auto log_f = [&f](double x) {
        const double v = f(x);
        if (v < 0.0) throw std::domain_error("integrate: integrand must be non-negative");
        return v > 0.0 ? std::log(v) : kNegInf;
    };
    return std::exp(integrate_log(log_f, a, b, splits, opts).log_value);
}

} // namespace cbi
