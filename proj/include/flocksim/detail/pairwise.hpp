#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "flocksim/ensemble.hpp"

namespace flocksim::detail {

// Structure-of-arrays copy of one ensemble, optionally gathered in a
// caller-supplied order, with the cutoff-weighted velocities precomputed for
// alignment sums. coord/wvel hold dim planes of length m: coord[c*m + j].
struct SampleTable {
    int dim = 0;
    int64_t m = 0;
    std::vector<double> coord;
    std::vector<double> wvel;
    bool has_alignment = false;

    void build(const PhaseEnsemble& ens, double delta, bool need_alignment,
               std::span<const int64_t> order = {});
};

// Sum over all table samples j of grad W_eps(q - x_j), written to out[dim]
// (not normalized by m). A sample coinciding with q contributes exactly zero,
// so the caller never needs a self-exclusion branch.
void force_sum(const SampleTable& t, const double* q, double eps, double* out);

// Returns sum_j phi1^eps(q - x_j) and accumulates the cutoff-weighted velocity
// numerator num[c] = sum_j wvel_c(j) phi1^eps(q - x_j) (not normalized by m).
// num may be null when only the density is wanted.
double alignment_sums(const SampleTable& t, const double* q, double eps, double* num);

// Sum over unordered pairs {i<j} of W_eps(x_i - x_j) over the table samples.
double potential_pair_sum(const SampleTable& t, double eps);

}  // namespace flocksim::detail
