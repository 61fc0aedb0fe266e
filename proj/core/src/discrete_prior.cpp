#include "cbi/discrete_prior.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cbi {

void DiscreteJointPrior::validate() const {
    if (atoms.empty()) throw std::invalid_argument("discrete joint prior needs at least one atom");
    double total = 0.0;
    for (const PriorAtom& atom : atoms) {
        if (!(atom.mass > 0.0)) throw std::invalid_argument("atom masses must be positive");
        if (!in_region(atom.x, atom.lambda))
            throw std::invalid_argument("atom (" + std::to_string(atom.x) + ", " +
                                        std::to_string(atom.lambda) + ") is outside the region");
        total += atom.mass;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("atom masses sum to " + std::to_string(total) +
                                    ", expected 1");
}

} // namespace cbi
