#include "flocksim/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "flocksim/detail/pairwise.hpp"
#include "flocksim/particle_system.hpp"

namespace flocksim {

double Schedule::identity_residual() const {
    const double prod = xi.delta * xi.delta * std::pow(xi.nu, 4) * std::pow(xi.eps, 4 * dim + 2);
    return std::abs(prod * budget - 1.0);
}

Schedule xi_schedule(int64_t n, double alpha, int dim, const ScheduleCaps& caps) {
    if (n < 2) throw std::invalid_argument("xi_schedule: N must be >= 2");
    if (!(alpha > 0.0) || !(alpha <= 1.0))
        throw std::invalid_argument("xi_schedule: alpha must satisfy 0 < alpha <= 1");
    check_dim(dim);

    Schedule s;
    s.alpha = alpha;
    s.n = n;
    s.dim = dim;
    s.budget = alpha * std::log(static_cast<double>(n));

    const int ep = 4 * dim + 2;
    // Equal thirds of the budget in log space: delta^2, nu^4 and eps^{4d+2}
    // each contribute L^{-1/3}.
    double eps = std::pow(s.budget, -1.0 / (3.0 * ep));
    double delta = std::pow(s.budget, -1.0 / 6.0);
    if (caps.eps && eps > *caps.eps) {
        eps = *caps.eps;
        s.eps_capped = true;
    }
    if (caps.delta && delta > *caps.delta) {
        delta = *caps.delta;
        s.delta_capped = true;
    }
    // Re-solve nu from the identity so it holds exactly, capped or not.
    const double nu = std::pow(s.budget * delta * delta * std::pow(eps, ep), -0.25);
    s.xi = Xi{eps, delta, nu};
    s.xi.validate();
    return s;
}

namespace {

struct GapCurves {
    std::vector<double> err_x, err_v, err_total;
};

void record_gaps(const PhaseEnsemble& a, const PhaseEnsemble& b, GapCurves& g) {
    const int64_t n = a.count();
    const int d = a.dim;
    double mx = 0.0, mv = 0.0, mt = 0.0;
    for (int64_t i = 0; i < n; ++i) {
        double gx = 0.0, gv = 0.0;
        for (int c = 0; c < d; ++c) {
            const double dxp = a.pos[i * d + c] - b.pos[i * d + c];
            const double dxv = a.vel[i * d + c] - b.vel[i * d + c];
            gx += dxp * dxp;
            gv += dxv * dxv;
        }
        mx = std::max(mx, gx);
        mv = std::max(mv, gv);
        mt = std::max(mt, gx + gv);
    }
    g.err_x.push_back(mx);
    g.err_v.push_back(mv);
    g.err_total.push_back(mt);
}

}  // namespace

CoupledRunResult coupled_run(int64_t n, int64_t m, const Params& p, double t_final, double dt,
                             uint64_t seed, const CoupledRunOptions& opts) {
    p.validate();
    if (n < 1) throw std::invalid_argument("coupled_run: N must be >= 1");
    if (m < n) throw std::invalid_argument("coupled_run: M must be >= N");
    const int64_t steps = step_count(t_final, dt);
    const int d = p.dim;

    const PhaseEnsemble init_all = sample_initial(opts.init, m, d, seed);
    const NoisePlan plan(seed, d, dt);

    auto [flow, picard] =
        picard_solve(init_all, p, t_final, dt, opts.picard_max_iters, opts.picard_tol, plan);

    // Both systems start from the first N reference samples and consume the
    // same increments per particle index.
    PhaseEnsemble interacting(n, d);
    interacting.dim = d;
    std::copy(init_all.pos.begin(), init_all.pos.begin() + n * d, interacting.pos.begin());
    std::copy(init_all.vel.begin(), init_all.vel.begin() + n * d, interacting.vel.begin());
    PhaseEnsemble reference = interacting;

    CoupledRunResult result;
    result.picard = picard;
    if (opts.keep_trajectories) {
        result.interacting.params = p;
        result.interacting.dt = dt;
        result.interacting.snapshots.push_back(interacting);
        result.reference.params = p;
        result.reference.dt = dt;
        result.reference.snapshots.push_back(reference);
    }

    GapCurves gaps;
    std::vector<double> times;
    times.reserve(steps + 1);
    times.push_back(0.0);
    record_gaps(interacting, reference, gaps);

    for (int64_t k = 0; k < steps; ++k) {
        em_step_inplace(interacting, p, dt, k, plan);
        interacting.time = (k + 1) * dt;
        reference_em_step_inplace(reference, flow, k, p, dt, plan);
        reference.time = (k + 1) * dt;
        if (!interacting.all_finite() || !reference.all_finite())
            throw BlowupError(k, "coupled_run: non-finite state after step " + std::to_string(k));

        times.push_back((k + 1) * dt);
        record_gaps(interacting, reference, gaps);
        if (opts.keep_trajectories) {
            result.interacting.snapshots.push_back(interacting);
            result.reference.snapshots.push_back(reference);
        }
    }

    CouplingReport& rep = result.report;
    rep.n = n;
    rep.m = m;
    rep.seeds = {seed};
    rep.times = std::move(times);
    rep.err_x = std::move(gaps.err_x);
    rep.err_v = std::move(gaps.err_v);
    rep.err_total = std::move(gaps.err_total);
    rep.sup_error = *std::max_element(rep.err_total.begin(), rep.err_total.end());
    rep.params = p;
    rep.schedule = opts.schedule;
    rep.picard_iterations = picard.iterations;
    rep.picard_converged = picard.converged;

    if (opts.keep_trajectories) result.flow = std::move(flow);
    return result;
}

AlignmentGapReport alignment_gap(const Trajectory& interacting, const Trajectory& reference,
                                 const FrozenFlow& flow, const Xi& xi) {
    xi.validate();
    const auto snaps = static_cast<int64_t>(interacting.snapshots.size());
    if (snaps == 0 || reference.snapshots.size() != size_t(snaps) ||
        flow.ensembles.size() != size_t(snaps) || interacting.dt != reference.dt ||
        flow.dt != interacting.dt)
        throw std::invalid_argument("alignment_gap: trajectory/flow grid mismatch");

    const int64_t n = interacting.snapshots.front().count();
    const int d = interacting.snapshots.front().dim;
    const double dt = interacting.dt;

    AlignmentGapReport rep;
    rep.per_particle.assign(n, 0.0);
    rep.gap_curve.assign(snaps, 0.0);

    detail::SampleTable table;
    std::vector<double> num(d);
    for (int64_t k = 0; k < snaps; ++k) {
        const auto u_all = empirical_alignment_all(interacting.snapshots[k], xi);
        table.build(flow.ensembles[k], xi.delta, true);
        const auto& ref = reference.snapshots[k];
        const double inv_m = 1.0 / static_cast<double>(table.m);
        double worst = 0.0;
        for (int64_t i = 0; i < n; ++i) {
            const double dens = detail::alignment_sums(table, ref.pos.data() + i * d, xi.eps,
                                                       num.data());
            const double inv_den = 1.0 / (inv_m * dens + xi.nu);
            double g = 0.0;
            for (int c = 0; c < d; ++c) {
                const double diff = u_all[i * d + c] - inv_m * num[c] * inv_den;
                g += diff * diff;
            }
            worst = std::max(worst, g);
            if (k < snaps - 1) rep.per_particle[i] += g * dt;  // left-endpoint rule
        }
        rep.gap_curve[k] = worst;
    }
    rep.max_integral = *std::max_element(rep.per_particle.begin(), rep.per_particle.end());
    return rep;
}

namespace {

// OLS on (x, y); returns false when the abscissae carry no variance.
bool fit_line(std::span<const double> x, std::span<const double> y, double& slope,
              double& intercept) {
    const size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) return false;
    slope = sxy / sxx;
    intercept = my - slope * mx;
    return true;
}

double percentile_half_width(std::vector<double>& slopes) {
    if (slopes.size() < 2) return 0.0;
    std::sort(slopes.begin(), slopes.end());
    const auto q = [&](double p) {
        const double idx = p * (slopes.size() - 1);
        const auto lo = static_cast<size_t>(idx);
        const size_t hi = std::min(lo + 1, slopes.size() - 1);
        return slopes[lo] + (idx - lo) * (slopes[hi] - slopes[lo]);
    };
    return 0.5 * (q(0.975) - q(0.025));
}

}  // namespace

FitResult fit_rate(std::span<const std::pair<double, double>> points, int resamples,
                   uint64_t seed) {
    if (points.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 points");
    std::vector<double> x(points.size()), y(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        x[i] = points[i].first;
        y[i] = points[i].second;
    }
    FitResult fr;
    if (!fit_line(x, y, fr.slope, fr.intercept))
        throw std::invalid_argument("fit_rate: degenerate abscissae");

    resamples = std::max(resamples, 200);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, points.size() - 1);
    std::vector<double> rx(points.size()), ry(points.size()), slopes;
    slopes.reserve(resamples);
    for (int b = 0; b < resamples; ++b) {
        for (size_t i = 0; i < points.size(); ++i) {
            const size_t j = pick(rng);
            rx[i] = x[j];
            ry[i] = y[j];
        }
        double s, ic;
        if (fit_line(rx, ry, s, ic)) slopes.push_back(s);
    }
    fr.half_width = percentile_half_width(slopes);
    return fr;
}

double bootstrap_half_width(const std::vector<std::vector<double>>& per_cell_errors,
                            const std::vector<double>& log_n, int resamples, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> slopes;
    slopes.reserve(resamples);
    std::vector<double> means(per_cell_errors.size());
    for (int b = 0; b < resamples; ++b) {
        bool ok = true;
        for (size_t c = 0; c < per_cell_errors.size(); ++c) {
            const auto& e = per_cell_errors[c];
            std::uniform_int_distribution<size_t> pick(0, e.size() - 1);
            double s = 0.0;
            for (size_t r = 0; r < e.size(); ++r) s += e[pick(rng)];
            s /= e.size();
            if (s <= 0.0) {
                ok = false;
                break;
            }
            means[c] = std::log(s);
        }
        if (!ok) continue;
        double s, ic;
        if (fit_line(log_n, means, s, ic)) slopes.push_back(s);
    }
    return percentile_half_width(slopes);
}

SweepReport sweep(std::span<const int64_t> n_list, double alpha, int reps, const Params& base,
                  double t_final, double dt, const SweepOptions& opts) {
    if (n_list.size() < 3) throw std::invalid_argument("sweep: need at least 3 values of N");
    for (int64_t n : n_list)
        if (n < 64) throw std::invalid_argument("sweep: every N must be >= 64");
    if (reps < 5) throw std::invalid_argument("sweep: reps must be >= 5");

    SweepReport rep;
    rep.alpha = alpha;
    rep.reps = reps;
    rep.t_final = t_final;
    rep.dt = dt;
    rep.base = base;

    for (int64_t n : n_list) {
        SweepCell cell;
        cell.n = n;
        cell.m = std::min<int64_t>(n * opts.m_multiplier, opts.m_max);
        cell.schedule = xi_schedule(n, alpha, base.dim, opts.caps);

        Params p = base;
        p.xi = cell.schedule.xi;

        CoupledRunOptions run_opts;
        run_opts.picard_max_iters = opts.picard_max_iters;
        run_opts.picard_tol = opts.picard_tol;
        run_opts.init = opts.init;
        run_opts.schedule = cell.schedule;
        for (int r = 0; r < reps; ++r) {
            const auto res = coupled_run(n, cell.m, p, t_final, dt, opts.seed0 + r, run_opts);
            cell.sup_errors.push_back(res.report.sup_error);
        }
        double mean = 0.0;
        for (double e : cell.sup_errors) mean += e;
        cell.mean_sup_error = mean / reps;
        rep.cells.push_back(std::move(cell));
    }

    std::vector<double> lx, ly;
    std::vector<std::vector<double>> per_cell;
    for (const auto& c : rep.cells) {
        if (c.mean_sup_error <= 0.0) {
            rep.degenerate = true;
            rep.slope = std::numeric_limits<double>::quiet_NaN();
            rep.intercept = std::numeric_limits<double>::quiet_NaN();
            rep.half_width = std::numeric_limits<double>::quiet_NaN();
            return rep;
        }
        lx.push_back(std::log(static_cast<double>(c.n)));
        ly.push_back(std::log(c.mean_sup_error));
        per_cell.push_back(c.sup_errors);
    }
    if (!fit_line(lx, ly, rep.slope, rep.intercept))
        throw std::invalid_argument("sweep: degenerate abscissae");
    rep.half_width = bootstrap_half_width(per_cell, lx, opts.bootstrap_resamples, opts.seed0);
    return rep;
}

}  // namespace flocksim
