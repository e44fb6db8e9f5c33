#pragma once

#include <functional>
#include <vector>

#include "flocksim/ensemble.hpp"
#include "flocksim/noise.hpp"
#include "flocksim/params.hpp"

namespace flocksim {

// Per-particle drift of the interacting system:
//   dX_i = V_i
//   dV_i = -gamma V_i - beta (V_i - u_xi(X_i)) - lambda (X_i + (1/N) sum_{j != i} grad W_eps(X_i - X_j))
struct Drift {
    std::vector<double> dx;
    std::vector<double> dv;
};

// Local alignment velocity u_xi(X_i): the cutoff-weighted, mollified mean
// velocity around particle i, with the self term included in both sums.
// Indices are 0-based. |result| <= 2/delta.
std::vector<double> empirical_alignment(int64_t i, const PhaseEnsemble& ens, const Xi& xi);

// u_xi for every particle at once (row-major n*dim).
std::vector<double> empirical_alignment_all(const PhaseEnsemble& ens, const Xi& xi);

// (1/N) sum_{j != i} grad W_eps(X_i - X_j); zero vector for N = 1.
std::vector<double> interaction_force(int64_t i, const PhaseEnsemble& ens, double eps);

// Pairwise sums run in a canonical state-sorted order, so relabeling the
// particles permutes the result bit-exactly.
Drift drift(const PhaseEnsemble& ens, const Params& p);

// One Euler-Maruyama step: X' = X + dt V, V' = V + dt dV + sqrt(2 sigma) dB.
// The NoisePlan must carry the same dt.
PhaseEnsemble em_step(const PhaseEnsemble& ens, const Params& p, double dt, int64_t step_index,
                      const NoisePlan& noise);
void em_step_inplace(PhaseEnsemble& ens, const Params& p, double dt, int64_t step_index,
                     const NoisePlan& noise);

// Advance `steps` EM steps in place. The observer (if any) sees the state
// after every step. Throws BlowupError naming the step if the state leaves
// the finite range.
void integrate(PhaseEnsemble& ens, const Params& p, int64_t steps, double dt,
               const NoisePlan& noise,
               const std::function<void(int64_t, const PhaseEnsemble&)>& observer = {});

// Snapshot count is T/dt + 1; dt must divide T within rounding.
Trajectory simulate(const PhaseEnsemble& init, const Params& p, double t_final, double dt,
                    const NoisePlan& noise);

// Number of EM steps for a horizon, validating that dt divides T.
int64_t step_count(double t_final, double dt);

}  // namespace flocksim
