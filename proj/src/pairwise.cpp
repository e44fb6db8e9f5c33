#include "flocksim/detail/pairwise.hpp"

#include <cmath>

#include "flocksim/kernels.hpp"

namespace flocksim::detail {

void SampleTable::build(const PhaseEnsemble& ens, double delta, bool need_alignment,
                        std::span<const int64_t> order) {
    dim = ens.dim;
    m = ens.count();
    coord.resize(size_t(dim) * m);
    has_alignment = need_alignment;
    if (need_alignment) wvel.resize(size_t(dim) * m);

    for (int64_t jj = 0; jj < m; ++jj) {
        const int64_t j = order.empty() ? jj : order[jj];
        const double* p = ens.pos.data() + j * dim;
        const double* v = ens.vel.data() + j * dim;
        double speed2 = 0.0;
        for (int c = 0; c < dim; ++c) {
            coord[size_t(c) * m + jj] = p[c];
            speed2 += v[c] * v[c];
        }
        if (need_alignment) {
            const double w = cutoff_profile(delta * std::sqrt(speed2));
            for (int c = 0; c < dim; ++c) wvel[size_t(c) * m + jj] = w * v[c];
        }
    }
}

namespace {

// d = 3 fast path; the simd reduction fixes a label-free lane pattern, so
// results are bit-reproducible for a given build regardless of thread count.
void force_sum3(const double* xs, const double* ys, const double* zs, int64_t m, const double* q,
                double eps, double cf, double* out) {
    const double qx = q[0], qy = q[1], qz = q[2];
    double fx = 0.0, fy = 0.0, fz = 0.0;
#pragma omp simd reduction(+ : fx, fy, fz)
    for (int64_t j = 0; j < m; ++j) {
        const double dx = qx - xs[j];
        const double dy = qy - ys[j];
        const double dz = qz - zs[j];
        const double t = eps + dx * dx + dy * dy + dz * dz;
        const double u = 1.0 / std::sqrt(t);
        const double s = u * u * u;
        fx += s * dx;
        fy += s * dy;
        fz += s * dz;
    }
    out[0] = cf * fx;
    out[1] = cf * fy;
    out[2] = cf * fz;
}

}  // namespace

void force_sum(const SampleTable& t, const double* q, double eps, double* out) {
    const int64_t m = t.m;
    const int d = t.dim;
    const double cf = -(d - 2) * newtonian_constant(d);
    if (d == 3) {
        force_sum3(t.coord.data(), t.coord.data() + m, t.coord.data() + 2 * m, m, q, eps, cf, out);
        return;
    }
    for (int c = 0; c < d; ++c) out[c] = 0.0;
    for (int64_t j = 0; j < m; ++j) {
        double r2 = 0.0;
        for (int c = 0; c < d; ++c) {
            const double dc = q[c] - t.coord[size_t(c) * m + j];
            r2 += dc * dc;
        }
        const double s = cf * upow(1.0 / std::sqrt(eps + r2), d);
        for (int c = 0; c < d; ++c) out[c] += s * (q[c] - t.coord[size_t(c) * m + j]);
    }
}

double alignment_sums(const SampleTable& t, const double* q, double eps, double* num) {
    const int64_t m = t.m;
    const int d = t.dim;
    const double e2 = eps * eps;
    const double inv_e2 = 1.0 / e2;
    const double scale = 1.0 / (mollifier_norm(d) * upow(eps, d));
    if (num)
        for (int c = 0; c < d; ++c) num[c] = 0.0;
    double dens = 0.0;

    if (d == 3) {
        const double* xs = t.coord.data();
        const double* ys = xs + m;
        const double* zs = ys + m;
        const double qx = q[0], qy = q[1], qz = q[2];
        if (num) {
            const double* wx = t.wvel.data();
            const double* wy = wx + m;
            const double* wz = wy + m;
            double nx = 0.0, ny = 0.0, nz = 0.0;
            for (int64_t j = 0; j < m; ++j) {
                const double dx = qx - xs[j];
                const double dy = qy - ys[j];
                const double dz = qz - zs[j];
                const double r2 = dx * dx + dy * dy + dz * dz;
                if (r2 < e2) {
                    const double phi = scale * std::exp(-1.0 / (1.0 - r2 * inv_e2));
                    dens += phi;
                    nx += phi * wx[j];
                    ny += phi * wy[j];
                    nz += phi * wz[j];
                }
            }
            num[0] = nx;
            num[1] = ny;
            num[2] = nz;
        } else {
            for (int64_t j = 0; j < m; ++j) {
                const double dx = qx - xs[j];
                const double dy = qy - ys[j];
                const double dz = qz - zs[j];
                const double r2 = dx * dx + dy * dy + dz * dz;
                if (r2 < e2) dens += scale * std::exp(-1.0 / (1.0 - r2 * inv_e2));
            }
        }
        return dens;
    }

    for (int64_t j = 0; j < m; ++j) {
        double r2 = 0.0;
        for (int c = 0; c < d; ++c) {
            const double dc = q[c] - t.coord[size_t(c) * m + j];
            r2 += dc * dc;
        }
        if (r2 < e2) {
            const double phi = scale * std::exp(-1.0 / (1.0 - r2 * inv_e2));
            dens += phi;
            if (num)
                for (int c = 0; c < d; ++c) num[c] += phi * t.wvel[size_t(c) * m + j];
        }
    }
    return dens;
}

double potential_pair_sum(const SampleTable& t, double eps) {
    const int64_t m = t.m;
    const int d = t.dim;
    const double cd = newtonian_constant(d);
    std::vector<double> partial(m, 0.0);
#pragma omp parallel for schedule(dynamic, 16)
    for (int64_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (int64_t j = i + 1; j < m; ++j) {
            double r2 = 0.0;
            for (int c = 0; c < d; ++c) {
                const double dc = t.coord[size_t(c) * m + i] - t.coord[size_t(c) * m + j];
                r2 += dc * dc;
            }
            s += upow(1.0 / std::sqrt(eps + r2), d - 2);
        }
        partial[i] = s;
    }
    double sum = 0.0;
    for (int64_t i = 0; i < m; ++i) sum += partial[i];
    return cd * sum;
}

}  // namespace flocksim::detail
