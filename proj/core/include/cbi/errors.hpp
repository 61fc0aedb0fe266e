#pragma once

#include <stdexcept>
#include <string>

namespace cbi {

/// Raised when prior knowledge constraint PK4 fails, i.e. the prior does not
/// carry enough mass on the required side of the bound to host the doubt mass.
class pk4_violation : public std::runtime_error {
public:
    explicit pk4_violation(std::string detail)
        : std::runtime_error("PK4 violated: " + std::move(detail)) {}
};

/// An iterative solver ran out of iterations before meeting its tolerance.
class convergence_error : public std::runtime_error {
public:
    convergence_error(std::string what, double residual, int iterations)
        : std::runtime_error(std::move(what) + " (residual " + std::to_string(residual) +
                             " after " + std::to_string(iterations) + " iterations)"),
          residual(residual),
          iterations(iterations) {}

    double residual;
    int iterations;
};

/// Total likelihood over a discrete joint prior is exactly zero, so the
/// posterior is undefined.
class zero_likelihood_error : public std::runtime_error {
public:
    zero_likelihood_error() : std::runtime_error("total likelihood over the prior support is zero") {}
};

} // namespace cbi
