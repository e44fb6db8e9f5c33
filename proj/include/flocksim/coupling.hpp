#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "flocksim/ensemble.hpp"
#include "flocksim/initial.hpp"
#include "flocksim/mckean_vlasov.hpp"
#include "flocksim/params.hpp"

namespace flocksim {

// Logarithmic regularization schedule: delta^2 nu^4 eps^{4d+2} * alpha ln N = 1.
// Uncapped, the budget splits in equal thirds in log space; when eps or delta
// hit a cap, nu is re-solved so the identity still holds exactly.
struct Schedule {
    double alpha = 0.0;
    int64_t n = 0;
    int dim = 3;
    double budget = 0.0;  // L = alpha ln N
    Xi xi{};
    bool eps_capped = false;
    bool delta_capped = false;

    double identity_residual() const;  // |delta^2 nu^4 eps^{4d+2} L - 1|
};

struct ScheduleCaps {
    std::optional<double> eps;
    std::optional<double> delta;
};

Schedule xi_schedule(int64_t n, double alpha, int dim, const ScheduleCaps& caps = {});

// One shared-noise, shared-initial-data coupled run of the interacting system
// against reference paths driven by the frozen flow. Error curves are
// sup-over-particles squared gaps per time.
struct CouplingReport {
    int64_t n = 0;
    int64_t m = 0;
    std::vector<uint64_t> seeds;
    std::vector<double> times;
    std::vector<double> err_x;      // max_i |X_i - Xbar_i|^2
    std::vector<double> err_v;      // max_i |V_i - Vbar_i|^2
    std::vector<double> err_total;  // max_i (|X_i - Xbar_i|^2 + |V_i - Vbar_i|^2)
    double sup_error = 0.0;         // max over times of err_total
    Params params{};
    std::optional<Schedule> schedule;
    int picard_iterations = 0;
    bool picard_converged = false;
};

struct CoupledRunOptions {
    int picard_max_iters = 30;
    double picard_tol = 1e-9;
    InitialCondition init{};
    bool keep_trajectories = false;
    std::optional<Schedule> schedule;  // provenance echo only
};

struct CoupledRunResult {
    CouplingReport report;
    PicardReport picard;
    // Populated only when keep_trajectories is set.
    Trajectory interacting;
    Trajectory reference;
    FrozenFlow flow;
};

CoupledRunResult coupled_run(int64_t n, int64_t m, const Params& p, double t_final, double dt,
                             uint64_t seed, const CoupledRunOptions& opts = {});

// Time-integrated squared gap between the empirical alignment along the
// interacting trajectory and the field alignment along the reference paths.
struct AlignmentGapReport {
    std::vector<double> per_particle;  // int_0^T |u_xi(X_i) - ubar_xi(Xbar_i)|^2 dt
    double max_integral = 0.0;
    std::vector<double> gap_curve;  // max_i squared gap per time
};

AlignmentGapReport alignment_gap(const Trajectory& interacting, const Trajectory& reference,
                                 const FrozenFlow& flow, const Xi& xi);

// Ordinary least squares with a resampling (bootstrap) 95% half-width for the
// slope. Points are (log N, log error) pairs.
struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double half_width = 0.0;
};

FitResult fit_rate(std::span<const std::pair<double, double>> points, int resamples = 200,
                   uint64_t seed = 12345);

// Convergence sweep over particle counts with a fresh schedule per N.
struct SweepCell {
    int64_t n = 0;
    int64_t m = 0;
    Schedule schedule{};
    std::vector<double> sup_errors;  // one per seed
    double mean_sup_error = 0.0;
};

struct SweepReport {
    double alpha = 0.0;
    int reps = 0;
    double t_final = 0.0;
    double dt = 0.0;
    Params base{};
    std::vector<SweepCell> cells;
    double slope = 0.0;
    double intercept = 0.0;
    double half_width = 0.0;
    bool degenerate = false;  // some cell's mean error is exactly zero
};

struct SweepOptions {
    int m_multiplier = 8;
    int64_t m_max = 32768;
    ScheduleCaps caps{0.5, 0.5};
    int picard_max_iters = 30;
    double picard_tol = 1e-9;
    InitialCondition init{};
    uint64_t seed0 = 1;
    int bootstrap_resamples = 400;
};

SweepReport sweep(std::span<const int64_t> n_list, double alpha, int reps, const Params& base,
                  double t_final, double dt, const SweepOptions& opts = {});

// Seed-level bootstrap used by sweep: resamples the per-seed sup-errors within
// each cell and refits the slope. Exposed for the synthetic-data tests.
double bootstrap_half_width(const std::vector<std::vector<double>>& per_cell_errors,
                            const std::vector<double>& log_n, int resamples, uint64_t seed);

}  // namespace flocksim
