#pragma once

#include <span>
#include <vector>

#include "flocksim/ensemble.hpp"
#include "flocksim/params.hpp"
#include "flocksim/particle_system.hpp"

// Plain direct-sum implementations of every pairwise quantity, in label order,
// single-threaded, built from the scalar kernel functions. Kept as the
// reference the optimized kernels are tested and benchmarked against; do not
// "optimize" these.
namespace flocksim::serial_ref {

std::vector<double> empirical_alignment(int64_t i, const PhaseEnsemble& ens, const Xi& xi);
std::vector<double> interaction_force(int64_t i, const PhaseEnsemble& ens, double eps);
Drift drift(const PhaseEnsemble& ens, const Params& p);

double mollified_density(std::span<const double> x, const PhaseEnsemble& ens, double eps);
std::vector<double> field_alignment(std::span<const double> x, const PhaseEnsemble& ens,
                                    const Xi& xi);
std::vector<double> field_interaction(std::span<const double> x, const PhaseEnsemble& ens,
                                      double eps);

}  // namespace flocksim::serial_ref
