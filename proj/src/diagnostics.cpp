#include "flocksim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flocksim/kernels.hpp"
#include "flocksim/noise.hpp"
#include "flocksim/particle_system.hpp"

namespace flocksim {

Moments moments(const PhaseEnsemble& ens) {
    ens.require_valid();
    const int64_t n = ens.count();
    const int d = ens.dim;
    Moments m;
    m.vel_mean.assign(d, 0.0);
    for (int64_t i = 0; i < n; ++i) {
        for (int c = 0; c < d; ++c) {
            const double x = ens.pos[i * d + c];
            const double v = ens.vel[i * d + c];
            m.pos_second += x * x;
            m.vel_second += v * v;
            m.vel_mean[c] += v;
        }
    }
    m.pos_second /= n;
    m.vel_second /= n;
    for (int c = 0; c < d; ++c) m.vel_mean[c] /= n;
    return m;
}

double interaction_energy(const PhaseEnsemble& ens, double eps) {
    ens.require_valid();
    check_positive(eps, "eps");
    check_dim(ens.dim);
    const int64_t n = ens.count();
    const int d = ens.dim;
    const double cd = newtonian_constant(d);

    std::vector<double> partial(n, 0.0);
#pragma omp parallel for schedule(dynamic, 32)
    for (int64_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (int64_t j = i + 1; j < n; ++j) {
            double r2 = 0.0;
            for (int c = 0; c < d; ++c) {
                const double dc = ens.pos[i * d + c] - ens.pos[j * d + c];
                r2 += dc * dc;
            }
            s += detail::upow(1.0 / std::sqrt(eps + r2), d - 2);
        }
        partial[i] = s;
    }
    double sum = 0.0;
    for (int64_t i = 0; i < n; ++i) sum += partial[i];
    return cd * sum / (static_cast<double>(n) * n);
}

namespace {

double digamma_int(int64_t n) {
    constexpr double euler_gamma = 0.57721566490153286;
    double h = 0.0;
    for (int64_t j = 1; j < n; ++j) h += 1.0 / j;
    return -euler_gamma + h;
}

}  // namespace

double entropy_estimate(const PhaseEnsemble& ens, int k) {
    ens.require_valid();
    const int64_t n = ens.count();
    if (k < 1 || k >= n)
        throw std::invalid_argument("entropy_estimate: need N > k >= 1");
    const int d = ens.dim;
    const int dd = 2 * d;

    // log fhat(z_i) = psi(k) - psi(N) - log V_D - D log r_{i,k}, D = 2d
    const double log_ball =
        0.5 * dd * std::log(M_PI) - std::lgamma(0.5 * dd + 1.0);
    const double shift = digamma_int(k) - digamma_int(n) - log_ball;

    std::vector<double> abslog(n, 0.0);
    int degenerate = 0;
#pragma omp parallel
    {
        std::vector<double> dist(n);
#pragma omp for schedule(static)
        for (int64_t i = 0; i < n; ++i) {
            for (int64_t j = 0; j < n; ++j) {
                double r2 = 0.0;
                for (int c = 0; c < d; ++c) {
                    const double dp = ens.pos[i * d + c] - ens.pos[j * d + c];
                    const double dv = ens.vel[i * d + c] - ens.vel[j * d + c];
                    r2 += dp * dp + dv * dv;
                }
                dist[j] = r2;
            }
            dist[i] = std::numeric_limits<double>::infinity();  // exclude self
            std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
            const double rk2 = dist[k - 1];
            if (rk2 <= 0.0) {
#pragma omp atomic
                ++degenerate;
                continue;
            }
            abslog[i] = std::abs(shift - 0.5 * dd * std::log(rk2));
        }
    }
    if (degenerate > 0)
        throw DegenerateSampleError("entropy_estimate: duplicate phase-space points");
    double sum = 0.0;
    for (int64_t i = 0; i < n; ++i) sum += abslog[i];
    return sum / n;
}

double entropy_functional(const PhaseEnsemble& ens, const Params& p, int k) {
    p.validate();
    const auto m = moments(ens);
    const double kinetic = 0.5 * m.vel_second;
    const double half_x2 = 0.5 * m.pos_second;
    const double entropy = p.sigma != 0.0 ? p.sigma * entropy_estimate(ens, k) : 0.0;
    return kinetic + half_x2 + half_x2 + entropy + interaction_energy(ens, p.xi.eps);
}

double flocking_order(const PhaseEnsemble& ens) {
    ens.require_valid();
    if (ens.count() < 2) throw std::invalid_argument("flocking_order: need N >= 2");
    const auto m = moments(ens);
    double mean2 = 0.0;
    for (double c : m.vel_mean) mean2 += c * c;
    const double var = m.vel_second - mean2;
    const double order = 1.0 - var / (m.vel_second + 1e-12);
    return std::clamp(order, 0.0, 1.0);
}

DiagnosticsRecord diagnostics_record(const PhaseEnsemble& ens, const Params& p, int k) {
    DiagnosticsRecord r;
    const auto m = moments(ens);
    r.time = ens.time;
    r.kinetic = 0.5 * m.vel_second;
    r.confinement = 0.5 * m.pos_second;
    r.interaction = interaction_energy(ens, p.xi.eps);
    r.entropy = p.sigma != 0.0 ? p.sigma * entropy_estimate(ens, k) : 0.0;
    r.order = flocking_order(ens);
    return r;
}

OuOracleReport ou_oracle_check(const Params& p, double t_final, double dt, int64_t n,
                               uint64_t seed, double v0_scale) {
    p.validate();
    if (p.lambda != 0.0 || p.beta != 0.0)
        throw std::invalid_argument("ou_oracle_check: requires lambda = beta = 0");
    check_positive(p.gamma, "gamma");
    check_positive(p.sigma, "sigma");
    if (n < 2) throw std::invalid_argument("ou_oracle_check: need N >= 2");

    const int d = p.dim;
    PhaseEnsemble ens(n, d);
    if (v0_scale != 0.0) {
        const NoisePlan init_draws(seed, d, 1.0, NoiseStream::initial_data);
        for (int64_t i = 0; i < n; ++i) {
            init_draws.standard_normals(i, 0, ens.velocity(i));
            for (int c = 0; c < d; ++c) ens.vel[i * d + c] *= v0_scale;
        }
    }
    double v0_second = 0.0;
    for (double v : ens.vel) v0_second += v * v;
    v0_second /= n;

    if (t_final > 0.0) {
        const NoisePlan plan(seed, d, dt);
        integrate(ens, p, step_count(t_final, dt), dt, plan);
    }

    OuOracleReport rep;
    rep.n = n;
    const double decay = std::exp(-2.0 * p.gamma * t_final);
    rep.target = decay * v0_second + (d * p.sigma / p.gamma) * (1.0 - decay);

    std::vector<double> w(n);
    for (int64_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (int c = 0; c < d; ++c) s += ens.vel[i * d + c] * ens.vel[i * d + c];
        w[i] = s;
    }
    double mean = 0.0;
    for (double x : w) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : w) var += (x - mean) * (x - mean);
    var /= (n - 1);
    rep.sample_mean = mean;
    rep.std_err = std::sqrt(var / n);
    rep.z = rep.std_err > 0.0 ? (mean - rep.target) / rep.std_err
                              : (mean == rep.target ? 0.0 : std::numeric_limits<double>::infinity());
    return rep;
}

}  // namespace flocksim
