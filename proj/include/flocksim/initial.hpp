#pragma once

#include <cstdint>
#include <string>

#include "flocksim/ensemble.hpp"

namespace flocksim {

// Initial law descriptors. All have finite second moments and bounded
// densities. Velocities are standard Gaussian throughout; the descriptor
// shapes the positions (gaussian additionally shifts velocities by vdrift
// along the first axis).
struct InitialCondition {
    enum class Kind { gaussian, uniform_ball, two_cluster };
    Kind kind = Kind::gaussian;
    double mean = 0.0;    // gaussian: per-coordinate position mean
    double scale = 1.0;   // gaussian: position standard deviation
    double vdrift = 0.0;  // gaussian: velocity shift along e1
    double radius = 1.0;  // uniform-ball
    double separation = 4.0;  // two-cluster: distance between cluster centers

    std::string describe() const;
};

InitialCondition parse_initial(const std::string& text);

// N iid draws, deterministic in seed. Particle i's draw depends only on
// (seed, i), so the first N samples of a larger ensemble coincide with
// sample_initial(n=N) — the property the coupled runs rely on.
PhaseEnsemble sample_initial(const InitialCondition& ic, int64_t n, int dim, uint64_t seed);

}  // namespace flocksim
