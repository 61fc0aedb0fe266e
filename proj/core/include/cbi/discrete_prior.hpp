#pragma once

#include <vector>

#include "cbi/klotz.hpp"

namespace cbi {

struct PriorAtom {
    double x;
    double lambda;
    double mass;
};

/// A finitely supported joint prior over the feasible region R.
struct DiscreteJointPrior {
    std::vector<PriorAtom> atoms;

    /// Masses positive and summing to 1 within 1e-12; every atom in R.
    void validate() const;
};

} // namespace cbi
