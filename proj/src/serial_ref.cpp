#include "flocksim/serial_ref.hpp"

#include <cmath>

#include "flocksim/kernels.hpp"

namespace flocksim::serial_ref {

namespace {

std::vector<double> diff(std::span<const double> a, std::span<const double> b) {
    std::vector<double> d(a.size());
    for (size_t c = 0; c < a.size(); ++c) d[c] = a[c] - b[c];
    return d;
}

}  // namespace

std::vector<double> empirical_alignment(int64_t i, const PhaseEnsemble& ens, const Xi& xi) {
    const int64_t n = ens.count();
    const int d = ens.dim;
    std::vector<double> num(d, 0.0);
    double dens = 0.0;
    for (int64_t j = 0; j < n; ++j) {
        const auto dx = diff(ens.position(i), ens.position(j));
        const double phi = mollifier(dx, xi.eps, d);
        const double w = velocity_cutoff(ens.velocity(j), xi.delta);
        dens += phi;
        for (int c = 0; c < d; ++c) num[c] += ens.vel[j * d + c] * w * phi;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> u(d);
    for (int c = 0; c < d; ++c) u[c] = (inv_n * num[c]) / (inv_n * dens + xi.nu);
    return u;
}

std::vector<double> interaction_force(int64_t i, const PhaseEnsemble& ens, double eps) {
    const int64_t n = ens.count();
    const int d = ens.dim;
    std::vector<double> f(d, 0.0), g(d);
    for (int64_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const auto dx = diff(ens.position(i), ens.position(j));
        newtonian_reg_force(dx, eps, d, g);
        for (int c = 0; c < d; ++c) f[c] += g[c];
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (int c = 0; c < d; ++c) f[c] *= inv_n;
    return f;
}

Drift drift(const PhaseEnsemble& ens, const Params& p) {
    const int64_t n = ens.count();
    const int d = ens.dim;
    Drift out;
    out.dx = ens.vel;
    out.dv.assign(size_t(n) * d, 0.0);
    for (int64_t i = 0; i < n; ++i) {
        const auto u = empirical_alignment(i, ens, p.xi);
        const auto f = interaction_force(i, ens, p.xi.eps);
        for (int c = 0; c < d; ++c) {
            const double v = ens.vel[i * d + c];
            out.dv[i * d + c] = -p.gamma * v - p.beta * (v - u[c]) -
                                p.lambda * (ens.pos[i * d + c] + f[c]);
        }
    }
    return out;
}

double mollified_density(std::span<const double> x, const PhaseEnsemble& ens, double eps) {
    const int64_t m = ens.count();
    double sum = 0.0;
    for (int64_t j = 0; j < m; ++j) sum += mollifier(diff(x, ens.position(j)), eps, ens.dim);
    return sum / static_cast<double>(m);
}

std::vector<double> field_alignment(std::span<const double> x, const PhaseEnsemble& ens,
                                    const Xi& xi) {
    const int64_t m = ens.count();
    const int d = ens.dim;
    std::vector<double> num(d, 0.0);
    for (int64_t j = 0; j < m; ++j) {
        const double phi = mollifier(diff(x, ens.position(j)), xi.eps, d);
        const double w = velocity_cutoff(ens.velocity(j), xi.delta);
        for (int c = 0; c < d; ++c) num[c] += ens.vel[j * d + c] * w * phi;
    }
    const double den = mollified_density(x, ens, xi.eps) + xi.nu;
    std::vector<double> u(d);
    for (int c = 0; c < d; ++c) u[c] = (num[c] / static_cast<double>(m)) / den;
    return u;
}

std::vector<double> field_interaction(std::span<const double> x, const PhaseEnsemble& ens,
                                      double eps) {
    const int64_t m = ens.count();
    const int d = ens.dim;
    std::vector<double> f(d, 0.0), g(d);
    for (int64_t j = 0; j < m; ++j) {
        newtonian_reg_force(diff(x, ens.position(j)), eps, d, g);
        for (int c = 0; c < d; ++c) f[c] += g[c];
    }
    for (int c = 0; c < d; ++c) f[c] /= static_cast<double>(m);
    return f;
}

}  // namespace flocksim::serial_ref
