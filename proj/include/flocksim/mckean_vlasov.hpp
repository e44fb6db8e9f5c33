#pragma once

#include <utility>
#include <vector>

#include "flocksim/ensemble.hpp"
#include "flocksim/noise.hpp"
#include "flocksim/params.hpp"

namespace flocksim {

// Empirical stand-in for the law of the reference process: one M-sample
// ensemble per time grid point, aligned with the consumer's grid.
struct FrozenFlow {
    double dt = 0.0;
    std::vector<PhaseEnsemble> ensembles;

    int64_t sample_count() const { return ensembles.empty() ? 0 : ensembles.front().count(); }
    int64_t steps() const { return static_cast<int64_t>(ensembles.size()) - 1; }
};

struct PicardReport {
    int iterations = 0;
    std::vector<double> gaps;  // mean-square displacement between successive flows
    bool converged = false;
};

// (1/M) sum_j phi1^eps(x - X_j) >= 0.
double mollified_density(std::span<const double> x, const PhaseEnsemble& ens, double eps);

// Field-form alignment: [(1/M) sum_j V_j phi2^delta(V_j) phi1^eps(x - X_j)]
// / (mollified_density + nu). |result| <= 2/delta.
std::vector<double> field_alignment(std::span<const double> x, const PhaseEnsemble& ens,
                                    const Xi& xi);

// (1/M) sum_j grad W_eps(x - X_j); the self term vanishes since grad W_eps(0) = 0.
std::vector<double> field_interaction(std::span<const double> x, const PhaseEnsemble& ens,
                                      double eps);

// Drift of the reference process against one frozen-flow ensemble:
//   dX = v, dV = -gamma v - beta (v - u_bar(x)) - lambda (x + grad W_eps * rho(x)).
void reference_drift(std::span<const double> x, std::span<const double> v,
                     const PhaseEnsemble& flow_step, const Params& p, std::span<double> dx,
                     std::span<double> dv);

// One EM step of all paths in `state` driven by the fields of flow.ensembles[k]
// (piecewise-constant in time: the floor grid point drives the whole step).
void reference_em_step_inplace(PhaseEnsemble& state, const FrozenFlow& flow, int64_t k,
                               const Params& p, double dt, const NoisePlan& noise);

// Fixed-point construction of the reference flow. Iteration 0 freezes the flow
// as the initial ensemble held constant in time; iteration k simulates the M
// paths against iteration k-1's flow with the same noise increments every
// iteration; stops when the max-over-time mean-square displacement between
// successive flows drops below tol. Non-convergence is reported, not thrown.
std::pair<FrozenFlow, PicardReport> picard_solve(const PhaseEnsemble& init, const Params& p,
                                                 double t_final, double dt, int max_iters,
                                                 double tol, const NoisePlan& noise);

}  // namespace flocksim
