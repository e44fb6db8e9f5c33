#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace flocksim {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A block is a
// pure function of (counter, key), so draws can be indexed rather than
// streamed and are reproducible in any evaluation order.
namespace philox {

std::array<uint32_t, 4> block(std::array<uint32_t, 4> counter, std::array<uint32_t, 2> key);

// Two iid standard normals from one block via Box-Muller.
void normal_pair(uint64_t seed, uint32_t stream, uint32_t hi, uint32_t lo, uint32_t blk,
                 double& z0, double& z1);

// One uniform in [0,1) from one block.
double uniform(uint64_t seed, uint32_t stream, uint32_t hi, uint32_t lo, uint32_t blk);

}  // namespace philox

// Counter streams keep independent consumers of the same seed from colliding.
enum class NoiseStream : uint32_t {
    dynamics = 0,
    initial_data = 1,
};

// Deterministic source of Brownian increments keyed by (seed, particle, step).
// increment() scales standard normals by sqrt(dt); distinct (particle, step)
// pairs map to distinct Philox counters and are independent.
class NoisePlan {
public:
    NoisePlan(uint64_t seed, int dim, double dt, NoiseStream stream = NoiseStream::dynamics);

    uint64_t seed() const { return seed_; }
    int dim() const { return dim_; }
    double dt() const { return dt_; }

    // dim iid N(0, dt) draws for this (particle, step).
    void increment(int64_t particle, int64_t step, std::span<double> out) const;

    // dim iid N(0, 1) draws (used where the sqrt(dt) scaling is not wanted).
    void standard_normals(int64_t particle, int64_t step, std::span<double> out) const;

private:
    uint64_t seed_;
    int dim_;
    double dt_;
    double sqrt_dt_;
    uint32_t stream_;
};

}  // namespace flocksim
