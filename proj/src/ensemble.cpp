#include "flocksim/ensemble.hpp"

#include <cmath>

namespace flocksim {

bool PhaseEnsemble::all_finite() const {
    for (double v : pos)
        if (!std::isfinite(v)) return false;
    for (double v : vel)
        if (!std::isfinite(v)) return false;
    return true;
}

void PhaseEnsemble::require_valid() const {
    if (dim < 1) throw std::invalid_argument("ensemble: dim must be >= 1");
    if (pos.size() != vel.size())
        throw std::invalid_argument("ensemble: positions and velocities differ in size");
    if (pos.empty() || pos.size() % dim != 0)
        throw std::invalid_argument("ensemble: size must be a positive multiple of dim");
    if (!all_finite()) throw std::invalid_argument("ensemble: non-finite entry");
}

}  // namespace flocksim
