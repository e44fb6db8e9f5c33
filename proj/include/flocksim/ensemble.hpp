#pragma once

#include <span>
#include <vector>

#include "flocksim/params.hpp"

namespace flocksim {

// Positions and velocities of N particles in R^d at one time, stored row-major
// (particle i occupies entries [i*dim, (i+1)*dim)).
struct PhaseEnsemble {
    int dim = 3;
    double time = 0.0;
    std::vector<double> pos;
    std::vector<double> vel;

    PhaseEnsemble() = default;
    PhaseEnsemble(int64_t n, int d) : dim(d), pos(n * d, 0.0), vel(n * d, 0.0) {}

    int64_t count() const { return static_cast<int64_t>(pos.size()) / dim; }

    std::span<double> position(int64_t i) { return {pos.data() + i * dim, size_t(dim)}; }
    std::span<const double> position(int64_t i) const { return {pos.data() + i * dim, size_t(dim)}; }
    std::span<double> velocity(int64_t i) { return {vel.data() + i * dim, size_t(dim)}; }
    std::span<const double> velocity(int64_t i) const { return {vel.data() + i * dim, size_t(dim)}; }

    bool all_finite() const;

    // Shape and finiteness invariants; throws std::invalid_argument.
    void require_valid() const;
};

// Uniform-grid record of a simulation: snapshots at 0, dt, 2dt, ..., T.
struct Trajectory {
    Params params{};
    double dt = 0.0;
    std::vector<PhaseEnsemble> snapshots;
};

}  // namespace flocksim
