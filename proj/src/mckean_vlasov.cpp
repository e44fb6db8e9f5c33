#include "flocksim/mckean_vlasov.hpp"

#include <cmath>

#include "flocksim/detail/pairwise.hpp"
#include "flocksim/kernels.hpp"

namespace flocksim {

namespace {

void check_query(std::span<const double> x, const PhaseEnsemble& ens) {
    ens.require_valid();
    if (static_cast<int>(x.size()) != ens.dim)
        throw std::invalid_argument("field query dimension mismatch");
}

// EM step of every path in `state` against one prebuilt flow-step table.
void advance_against_table(PhaseEnsemble& state, const detail::SampleTable& table,
                           const Params& p, double dt, int64_t step_index,
                           const NoisePlan& noise) {
    const int64_t n = state.count();
    const int d = state.dim;
    const int64_t m = table.m;
    const double inv_m = 1.0 / static_cast<double>(m);
    const bool need_align = p.beta != 0.0;
    const bool need_force = p.lambda != 0.0;
    const bool noisy = p.sigma != 0.0;
    const double sq2sig = std::sqrt(2.0 * p.sigma);

#pragma omp parallel
    {
        std::vector<double> num(d), frc(d), z(d);
#pragma omp for schedule(static)
        for (int64_t i = 0; i < n; ++i) {
            double* x = state.pos.data() + i * d;
            double* v = state.vel.data() + i * d;
            if (need_force) detail::force_sum(table, x, p.xi.eps, frc.data());
            double dens = 0.0;
            if (need_align) dens = detail::alignment_sums(table, x, p.xi.eps, num.data());
            const double inv_den = need_align ? 1.0 / (inv_m * dens + p.xi.nu) : 0.0;
            if (noisy) noise.increment(i, step_index, z);
            for (int c = 0; c < d; ++c) {
                double a = -p.gamma * v[c];
                if (need_align) a -= p.beta * (v[c] - inv_m * num[c] * inv_den);
                if (need_force) a -= p.lambda * (x[c] + inv_m * frc[c]);
                x[c] += dt * v[c];
                v[c] += dt * a;
                if (noisy) v[c] += sq2sig * z[c];
            }
        }
    }
    state.time += dt;
}

}  // namespace

double mollified_density(std::span<const double> x, const PhaseEnsemble& ens, double eps) {
    check_query(x, ens);
    check_positive(eps, "eps");
    const int64_t m = ens.count();
    const int d = ens.dim;
    double sum = 0.0;
    for (int64_t j = 0; j < m; ++j) {
        double r2 = 0.0;
        for (int c = 0; c < d; ++c) {
            const double dc = x[c] - ens.pos[j * d + c];
            r2 += dc * dc;
        }
        sum += mollifier_r2(r2, eps, d);
    }
    return sum / static_cast<double>(m);
}

std::vector<double> field_alignment(std::span<const double> x, const PhaseEnsemble& ens,
                                    const Xi& xi) {
    check_query(x, ens);
    xi.validate();
    const int64_t m = ens.count();
    const int d = ens.dim;
    std::vector<double> num(d, 0.0);
    double dens = 0.0;
    for (int64_t j = 0; j < m; ++j) {
        double r2 = 0.0;
        for (int c = 0; c < d; ++c) {
            const double dc = x[c] - ens.pos[j * d + c];
            r2 += dc * dc;
        }
        const double phi = mollifier_r2(r2, xi.eps, d);
        if (phi != 0.0) {
            const double w = velocity_cutoff(ens.velocity(j), xi.delta);
            dens += phi;
            for (int c = 0; c < d; ++c) num[c] += phi * w * ens.vel[j * d + c];
        }
    }
    const double inv_m = 1.0 / static_cast<double>(m);
    const double inv_den = 1.0 / (inv_m * dens + xi.nu);
    for (int c = 0; c < d; ++c) num[c] *= inv_m * inv_den;
    return num;
}

std::vector<double> field_interaction(std::span<const double> x, const PhaseEnsemble& ens,
                                      double eps) {
    check_query(x, ens);
    check_positive(eps, "eps");
    check_dim(ens.dim);
    const int64_t m = ens.count();
    const int d = ens.dim;
    const double cf = -(d - 2) * newtonian_constant(d);
    std::vector<double> out(d, 0.0);
    for (int64_t j = 0; j < m; ++j) {
        double r2 = 0.0;
        for (int c = 0; c < d; ++c) {
            const double dc = x[c] - ens.pos[j * d + c];
            r2 += dc * dc;
        }
        const double s = cf * std::pow(eps + r2, -0.5 * d);
        for (int c = 0; c < d; ++c) out[c] += s * (x[c] - ens.pos[j * d + c]);
    }
    const double inv_m = 1.0 / static_cast<double>(m);
    for (int c = 0; c < d; ++c) out[c] *= inv_m;
    return out;
}

void reference_drift(std::span<const double> x, std::span<const double> v,
                     const PhaseEnsemble& flow_step, const Params& p, std::span<double> dx,
                     std::span<double> dv) {
    p.validate();
    check_query(x, flow_step);
    if (x.size() != v.size() || dx.size() != x.size() || dv.size() != x.size())
        throw std::invalid_argument("reference_drift: size mismatch");
    const int d = flow_step.dim;

    std::copy(v.begin(), v.end(), dx.begin());
    std::vector<double> ub, fi;
    if (p.beta != 0.0) ub = field_alignment(x, flow_step, p.xi);
    if (p.lambda != 0.0) fi = field_interaction(x, flow_step, p.xi.eps);
    for (int c = 0; c < d; ++c) {
        double a = -p.gamma * v[c];
        if (p.beta != 0.0) a -= p.beta * (v[c] - ub[c]);
        if (p.lambda != 0.0) a -= p.lambda * (x[c] + fi[c]);
        dv[c] = a;
    }
}

void reference_em_step_inplace(PhaseEnsemble& state, const FrozenFlow& flow, int64_t k,
                               const Params& p, double dt, const NoisePlan& noise) {
    if (k < 0 || k >= static_cast<int64_t>(flow.ensembles.size()))
        throw std::invalid_argument("reference_em_step: flow step out of range");
    if (flow.dt != dt) throw std::invalid_argument("reference_em_step: grid mismatch");
    detail::SampleTable table;
    table.build(flow.ensembles[k], p.xi.delta, p.beta != 0.0);
    advance_against_table(state, table, p, dt, k, noise);
}

std::pair<FrozenFlow, PicardReport> picard_solve(const PhaseEnsemble& init, const Params& p,
                                                 double t_final, double dt, int max_iters,
                                                 double tol, const NoisePlan& noise) {
    init.require_valid();
    p.validate();
    if (init.count() < 2) throw std::invalid_argument("picard_solve: need at least 2 samples");
    if (max_iters < 1) throw std::invalid_argument("picard_solve: max_iters must be >= 1");
    check_positive(tol, "tol");
    const auto steps = static_cast<int64_t>(std::llround(t_final / dt));
    if (steps < 1 || std::abs(steps * dt - t_final) > 1e-9 * std::max(1.0, t_final))
        throw std::invalid_argument("picard_solve: dt must divide t_final within rounding");

    const int64_t m = init.count();
    const int d = init.dim;
    const double inv_m = 1.0 / static_cast<double>(m);

    // Iteration 0: initial ensemble frozen in time.
    FrozenFlow prev;
    prev.dt = dt;
    prev.ensembles.assign(steps + 1, init);
    for (int64_t k = 0; k <= steps; ++k) prev.ensembles[k].time = k * dt;

    PicardReport report;
    for (int iter = 1; iter <= max_iters; ++iter) {
        FrozenFlow cur;
        cur.dt = dt;
        cur.ensembles.reserve(steps + 1);
        PhaseEnsemble state = init;
        state.time = 0.0;
        cur.ensembles.push_back(state);
        detail::SampleTable table;
        for (int64_t k = 0; k < steps; ++k) {
            table.build(prev.ensembles[k], p.xi.delta, p.beta != 0.0);
            advance_against_table(state, table, p, dt, k, noise);
            state.time = (k + 1) * dt;
            if (!state.all_finite())
                throw BlowupError(k, "picard_solve: non-finite flow after step " +
                                         std::to_string(k));
            cur.ensembles.push_back(state);
        }

        double gap = 0.0;
        for (int64_t k = 0; k <= steps; ++k) {
            double ms = 0.0;
            const auto& a = cur.ensembles[k];
            const auto& b = prev.ensembles[k];
            for (size_t t = 0; t < a.pos.size(); ++t) {
                const double dxp = a.pos[t] - b.pos[t];
                const double dxv = a.vel[t] - b.vel[t];
                ms += dxp * dxp + dxv * dxv;
            }
            gap = std::max(gap, ms * inv_m);
        }
        report.gaps.push_back(gap);
        report.iterations = iter;
        prev = std::move(cur);
        if (gap <= tol) {
            report.converged = true;
            break;
        }
    }
    return {std::move(prev), report};
}

}  // namespace flocksim
