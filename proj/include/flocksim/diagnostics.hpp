#pragma once

#include <cstdint>
#include <vector>

#include "flocksim/ensemble.hpp"
#include "flocksim/params.hpp"

namespace flocksim {

// Raised when duplicated phase-space points make a k-NN distance zero.
class DegenerateSampleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Moments {
    double pos_second = 0.0;          // (1/N) sum |X_i|^2
    double vel_second = 0.0;          // (1/N) sum |V_i|^2
    std::vector<double> vel_mean{};   // (1/N) sum V_i
};

Moments moments(const PhaseEnsemble& ens);

// (1/(2N^2)) sum_{i != j} W_eps(X_i - X_j) >= 0.
double interaction_energy(const PhaseEnsemble& ens, double eps);

// (1/N) sum_i |log fhat(X_i, V_i)| with the Kozachenko-Leonenko k-NN
// log-density estimate in 2d-dimensional phase space.
double entropy_estimate(const PhaseEnsemble& ens, int k);

// Monitored functional: kinetic + |x|^2/2 average + confinement
// + sigma * entropy_estimate + interaction energy (the |x|^2/2 term appears
// twice because the confinement potential equals it).
double entropy_functional(const PhaseEnsemble& ens, const Params& p, int k);

// Velocity coherence in [0,1]: 1 - Var(V)/(mean squared speed + floor).
double flocking_order(const PhaseEnsemble& ens);

struct DiagnosticsRecord {
    double time = 0.0;
    double kinetic = 0.0;      // (1/N) sum |V|^2 / 2
    double confinement = 0.0;  // (1/N) sum |X|^2 / 2
    double interaction = 0.0;
    double entropy = 0.0;      // sigma * entropy_estimate
    double order = 0.0;
};

DiagnosticsRecord diagnostics_record(const PhaseEnsemble& ens, const Params& p, int k);

// Ornstein-Uhlenbeck reduction (lambda = beta = 0): compares the sampled
// E|V(T)|^2 against e^{-2 gamma T} E|V_0|^2 + (d sigma/gamma)(1 - e^{-2 gamma T}).
struct OuOracleReport {
    double sample_mean = 0.0;
    double target = 0.0;
    double std_err = 0.0;
    double z = 0.0;
    int64_t n = 0;
};

OuOracleReport ou_oracle_check(const Params& p, double t_final, double dt, int64_t n,
                               uint64_t seed, double v0_scale = 0.0);

}  // namespace flocksim
