#include "flocksim/particle_system.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "flocksim/detail/pairwise.hpp"

namespace flocksim {

namespace {

// Lexicographic order on (position row, velocity row). Label-free: ties can
// only occur between bitwise-identical states, whose summed contributions are
// interchangeable, so permuting particle labels cannot change any sum.
std::vector<int64_t> canonical_order(const PhaseEnsemble& ens) {
    const int64_t n = ens.count();
    const int d = ens.dim;
    std::vector<int64_t> idx(n);
    std::iota(idx.begin(), idx.end(), int64_t{0});
    std::sort(idx.begin(), idx.end(), [&](int64_t a, int64_t b) {
        const double* pa = ens.pos.data() + a * d;
        const double* pb = ens.pos.data() + b * d;
        for (int c = 0; c < d; ++c) {
            if (pa[c] < pb[c]) return true;
            if (pa[c] > pb[c]) return false;
        }
        const double* va = ens.vel.data() + a * d;
        const double* vb = ens.vel.data() + b * d;
        for (int c = 0; c < d; ++c) {
            if (va[c] < vb[c]) return true;
            if (va[c] > vb[c]) return false;
        }
        return false;
    });
    return idx;
}

void check_xi_ens(const PhaseEnsemble& ens, const Xi& xi) {
    ens.require_valid();
    xi.validate();
}

// dv[i*d + c] for the whole ensemble; dx is just V.
void compute_dv(const PhaseEnsemble& ens, const Params& p, std::vector<double>& dv) {
    const int64_t n = ens.count();
    const int d = ens.dim;
    dv.assign(size_t(n) * d, 0.0);

    const bool need_align = p.beta != 0.0;
    const bool need_force = p.lambda != 0.0;

    detail::SampleTable table;
    if (need_align || need_force) {
        const auto order = canonical_order(ens);
        table.build(ens, p.xi.delta, need_align, order);
    }
    const double inv_n = 1.0 / static_cast<double>(n);

#pragma omp parallel
    {
        std::vector<double> num(d), frc(d);
#pragma omp for schedule(static)
        for (int64_t i = 0; i < n; ++i) {
            const double* q = ens.pos.data() + i * d;
            const double* v = ens.vel.data() + i * d;
            double* out = dv.data() + i * d;
            if (need_force) detail::force_sum(table, q, p.xi.eps, frc.data());
            double dens = 0.0;
            if (need_align) dens = detail::alignment_sums(table, q, p.xi.eps, num.data());
            const double inv_den = need_align ? 1.0 / (inv_n * dens + p.xi.nu) : 0.0;
            for (int c = 0; c < d; ++c) {
                double a = -p.gamma * v[c];
                if (need_align) a -= p.beta * (v[c] - inv_n * num[c] * inv_den);
                if (need_force) a -= p.lambda * (q[c] + inv_n * frc[c]);
                out[c] = a;
            }
        }
    }
}

void check_index(int64_t i, int64_t n) {
    if (i < 0 || i >= n) throw std::out_of_range("particle index out of range");
}

}  // namespace

std::vector<double> empirical_alignment(int64_t i, const PhaseEnsemble& ens, const Xi& xi) {
    check_xi_ens(ens, xi);
    check_index(i, ens.count());
    const int d = ens.dim;
    detail::SampleTable table;
    table.build(ens, xi.delta, true, canonical_order(ens));
    std::vector<double> num(d), u(d);
    const double dens = detail::alignment_sums(table, ens.pos.data() + i * d, xi.eps, num.data());
    const double inv_n = 1.0 / static_cast<double>(ens.count());
    const double inv_den = 1.0 / (inv_n * dens + xi.nu);
    for (int c = 0; c < d; ++c) u[c] = inv_n * num[c] * inv_den;
    return u;
}

std::vector<double> empirical_alignment_all(const PhaseEnsemble& ens, const Xi& xi) {
    check_xi_ens(ens, xi);
    const int64_t n = ens.count();
    const int d = ens.dim;
    detail::SampleTable table;
    table.build(ens, xi.delta, true, canonical_order(ens));
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> all(size_t(n) * d);
#pragma omp parallel
    {
        std::vector<double> num(d);
#pragma omp for schedule(static)
        for (int64_t i = 0; i < n; ++i) {
            const double dens =
                detail::alignment_sums(table, ens.pos.data() + i * d, xi.eps, num.data());
            const double inv_den = 1.0 / (inv_n * dens + xi.nu);
            for (int c = 0; c < d; ++c) all[i * d + c] = inv_n * num[c] * inv_den;
        }
    }
    return all;
}

std::vector<double> interaction_force(int64_t i, const PhaseEnsemble& ens, double eps) {
    ens.require_valid();
    check_positive(eps, "eps");
    check_dim(ens.dim);
    check_index(i, ens.count());
    const int d = ens.dim;
    detail::SampleTable table;
    table.build(ens, 1.0, false, canonical_order(ens));
    std::vector<double> f(d);
    detail::force_sum(table, ens.pos.data() + i * d, eps, f.data());
    const double inv_n = 1.0 / static_cast<double>(ens.count());
    for (int c = 0; c < d; ++c) f[c] *= inv_n;
    return f;
}

Drift drift(const PhaseEnsemble& ens, const Params& p) {
    ens.require_valid();
    p.validate();
    if (ens.dim != p.dim) throw std::invalid_argument("drift: ensemble/params dim mismatch");
    Drift out;
    out.dx = ens.vel;
    compute_dv(ens, p, out.dv);
    return out;
}

void em_step_inplace(PhaseEnsemble& ens, const Params& p, double dt, int64_t step_index,
                     const NoisePlan& noise) {
    check_positive(dt, "dt");
    if (noise.dim() != ens.dim) throw std::invalid_argument("em_step: noise dim mismatch");
    if (noise.dt() != dt) throw std::invalid_argument("em_step: noise plan dt mismatch");

    const int64_t n = ens.count();
    const int d = ens.dim;
    static thread_local std::vector<double> dv;
    compute_dv(ens, p, dv);

    const double sq2sig = std::sqrt(2.0 * p.sigma);
    const bool noisy = p.sigma != 0.0;
#pragma omp parallel
    {
        std::vector<double> z(d);
#pragma omp for schedule(static)
        for (int64_t i = 0; i < n; ++i) {
            double* x = ens.pos.data() + i * d;
            double* v = ens.vel.data() + i * d;
            if (noisy) noise.increment(i, step_index, z);
            for (int c = 0; c < d; ++c) {
                x[c] += dt * v[c];
                v[c] += dt * dv[i * d + c];
                if (noisy) v[c] += sq2sig * z[c];
            }
        }
    }
    ens.time += dt;
}

PhaseEnsemble em_step(const PhaseEnsemble& ens, const Params& p, double dt, int64_t step_index,
                      const NoisePlan& noise) {
    ens.require_valid();
    p.validate();
    PhaseEnsemble out = ens;
    em_step_inplace(out, p, dt, step_index, noise);
    return out;
}

int64_t step_count(double t_final, double dt) {
    check_positive(t_final, "t_final");
    check_positive(dt, "dt");
    const auto steps = static_cast<int64_t>(std::llround(t_final / dt));
    if (steps < 1 || std::abs(steps * dt - t_final) > 1e-9 * std::max(1.0, t_final))
        throw std::invalid_argument("dt must divide t_final within rounding");
    return steps;
}

void integrate(PhaseEnsemble& ens, const Params& p, int64_t steps, double dt,
               const NoisePlan& noise,
               const std::function<void(int64_t, const PhaseEnsemble&)>& observer) {
    ens.require_valid();
    p.validate();
    const double t0 = ens.time;
    for (int64_t k = 0; k < steps; ++k) {
        em_step_inplace(ens, p, dt, k, noise);
        ens.time = t0 + (k + 1) * dt;
        if (!ens.all_finite())
            throw BlowupError(k, "non-finite state after step " + std::to_string(k) + " (t=" +
                                     std::to_string(ens.time) + ")");
        if (observer) observer(k + 1, ens);
    }
}

Trajectory simulate(const PhaseEnsemble& init, const Params& p, double t_final, double dt,
                    const NoisePlan& noise) {
    init.require_valid();
    p.validate();
    const int64_t steps = step_count(t_final, dt);

    Trajectory traj;
    traj.params = p;
    traj.dt = dt;
    traj.snapshots.reserve(steps + 1);

    PhaseEnsemble state = init;
    state.time = 0.0;
    traj.snapshots.push_back(state);
    integrate(state, p, steps, dt, noise,
              [&](int64_t, const PhaseEnsemble& e) { traj.snapshots.push_back(e); });
    return traj;
}

}  // namespace flocksim
