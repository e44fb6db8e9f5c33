#include "flocksim/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "flocksim/params.hpp"

namespace flocksim {
namespace philox {

namespace {

constexpr uint32_t kW32A = 0x9E3779B9u;
constexpr uint32_t kW32B = 0xBB67AE85u;
constexpr uint32_t kM4x32A = 0xD2511F53u;
constexpr uint32_t kM4x32B = 0xCD9E8D57u;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& lo, uint32_t& hi) {
    const uint64_t p = static_cast<uint64_t>(a) * b;
    lo = static_cast<uint32_t>(p);
    hi = static_cast<uint32_t>(p >> 32);
}

inline void round_once(std::array<uint32_t, 4>& c, const std::array<uint32_t, 2>& k) {
    uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kM4x32A, c[0], lo0, hi0);
    mulhilo(kM4x32B, c[2], lo1, hi1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

inline double u53_half_open(uint64_t x) {  // [0,1)
    return static_cast<double>(x >> 11) * 0x1p-53;
}

inline double u53_positive(uint64_t x) {  // (0,1]
    return static_cast<double>((x >> 11) + 1) * 0x1p-53;
}

}  // namespace

std::array<uint32_t, 4> block(std::array<uint32_t, 4> counter, std::array<uint32_t, 2> key) {
    for (int r = 0; r < 10; ++r) {
        round_once(counter, key);
        key[0] += kW32A;
        key[1] += kW32B;
    }
    return counter;
}

void normal_pair(uint64_t seed, uint32_t stream, uint32_t hi, uint32_t lo, uint32_t blk,
                 double& z0, double& z1) {
    const auto out = block({blk, lo, hi, stream},
                           {static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)});
    const uint64_t a = out[0] | (static_cast<uint64_t>(out[1]) << 32);
    const uint64_t b = out[2] | (static_cast<uint64_t>(out[3]) << 32);
    const double r = std::sqrt(-2.0 * std::log(u53_positive(a)));
    const double theta = 2.0 * M_PI * u53_half_open(b);
    z0 = r * std::cos(theta);
    z1 = r * std::sin(theta);
}

double uniform(uint64_t seed, uint32_t stream, uint32_t hi, uint32_t lo, uint32_t blk) {
    const auto out = block({blk, lo, hi, stream},
                           {static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)});
    return u53_half_open(out[0] | (static_cast<uint64_t>(out[1]) << 32));
}

}  // namespace philox

NoisePlan::NoisePlan(uint64_t seed, int dim, double dt, NoiseStream stream)
    : seed_(seed), dim_(dim), dt_(dt), sqrt_dt_(std::sqrt(dt)), stream_(static_cast<uint32_t>(stream)) {
    if (dim < 1) throw std::invalid_argument("NoisePlan: dim must be >= 1");
    check_positive(dt, "dt");
}

void NoisePlan::standard_normals(int64_t particle, int64_t step, std::span<double> out) const {
    if (particle < 0 || particle > 0xFFFFFFFFll || step < 0 || step > 0xFFFFFFFFll)
        throw std::invalid_argument("NoisePlan: particle/step index out of counter range");
    const auto hi = static_cast<uint32_t>(particle);
    const auto lo = static_cast<uint32_t>(step);
    for (int c = 0; c < dim_; c += 2) {
        double z0, z1;
        philox::normal_pair(seed_, stream_, hi, lo, static_cast<uint32_t>(c / 2), z0, z1);
        out[c] = z0;
        if (c + 1 < dim_) out[c + 1] = z1;
    }
}

void NoisePlan::increment(int64_t particle, int64_t step, std::span<double> out) const {
    standard_normals(particle, step, out);
    for (int c = 0; c < dim_; ++c) out[c] *= sqrt_dt_;
}

}  // namespace flocksim
