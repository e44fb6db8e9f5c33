#include "flocksim/kernels.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

#include "flocksim/params.hpp"

namespace flocksim {

double unit_ball_volume(int d) {
    if (d < 1) throw std::invalid_argument("unit_ball_volume: d must be >= 1");
    return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double newtonian_constant(int d) {
    check_dim(d);
    return 1.0 / ((d - 2) * unit_ball_volume(d));
}

double newtonian_reg_potential_r2(double r2, double eps, int d) {
    check_dim(d);
    check_positive(eps, "eps");
    return newtonian_constant(d) * std::pow(eps + r2, -0.5 * (d - 2));
}

double newtonian_reg_potential(std::span<const double> x, double eps, int d) {
    return newtonian_reg_potential_r2(detail::sqnorm(x), eps, d);
}

double newtonian_reg_force_scale_r2(double r2, double eps, int d) {
    check_dim(d);
    check_positive(eps, "eps");
    return -(d - 2) * newtonian_constant(d) * std::pow(eps + r2, -0.5 * d);
}

void newtonian_reg_force(std::span<const double> x, double eps, int d, std::span<double> out) {
    const double s = newtonian_reg_force_scale_r2(detail::sqnorm(x), eps, d);
    for (size_t c = 0; c < x.size(); ++c) out[c] = s * x[c];
}

KernelBoundReport verify_kernel_bounds(double eps, int d, int grid) {
    check_dim(d);
    check_positive(eps, "eps");
    if (grid < 1000) throw std::invalid_argument("verify_kernel_bounds: grid must be >= 1000");

    // |grad W_eps|(r) peaks at r = sqrt(eps/(d-1)); bracket it by three decades
    // on each side.
    const double r_star = std::sqrt(eps / (d - 1));
    const double lo = std::log(r_star * 1e-3);
    const double hi = std::log(r_star * 1e3);
    KernelBoundReport rep;
    for (int i = 0; i < grid; ++i) {
        const double r = std::exp(lo + (hi - lo) * i / (grid - 1));
        const double g = -newtonian_reg_force_scale_r2(r * r, eps, d) * r;
        if (g > rep.numeric_max) {
            rep.numeric_max = g;
            rep.argmax_radius = r;
        }
    }
    rep.analytic_max = newtonian_constant(d) * (d - 2) * std::pow(d - 1.0, 0.5 * (d - 1)) *
                       std::pow(double(d), -0.5 * d) * std::pow(eps, -0.5 * (d - 1));
    rep.ratio_to_eps_pow = rep.numeric_max * std::pow(eps, 0.5 * d);
    return rep;
}

namespace {

double bump(double r) {
    const double t = 1.0 - r * r;
    return t > 0.0 ? std::exp(-1.0 / t) : 0.0;
}

double simpson(double (*f)(double, int), double a, double b, int d) {
    const double m = 0.5 * (a + b);
    return (b - a) / 6.0 * (f(a, d) + 4.0 * f(m, d) + f(b, d));
}

double radial_bump(double r, int d) { return std::pow(r, d - 1) * bump(r); }

double adapt(double (*f)(double, int), double a, double b, double whole, double tol, int d,
             int depth) {
    const double m = 0.5 * (a + b);
    const double left = simpson(f, a, m, d);
    const double right = simpson(f, m, b, d);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adapt(f, a, m, left, 0.5 * tol, d, depth - 1) +
           adapt(f, m, b, right, 0.5 * tol, d, depth - 1);
}

}  // namespace

double mollifier_norm(int d) {
    if (d < 1) throw std::invalid_argument("mollifier_norm: d must be >= 1");
    static std::map<int, double> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(d);
    if (it != cache.end()) return it->second;
    // Z_d = |S^{d-1}| int_0^1 r^{d-1} exp(-1/(1-r^2)) dr, with |S^{d-1}| = d |B(0,1)|.
    const double radial =
        adapt(radial_bump, 0.0, 1.0, simpson(radial_bump, 0.0, 1.0, d), 1e-12, d, 48);
    const double z = d * unit_ball_volume(d) * radial;
    cache.emplace(d, z);
    return z;
}

double mollifier_r2(double r2, double eps, int d) {
    check_positive(eps, "eps");
    const double e2 = eps * eps;
    if (r2 >= e2) return 0.0;
    const double s2 = r2 / e2;
    return std::exp(-1.0 / (1.0 - s2)) / (mollifier_norm(d) * std::pow(eps, d));
}

double mollifier(std::span<const double> x, double eps, int d) {
    return mollifier_r2(detail::sqnorm(x), eps, d);
}

double cutoff_profile(double s) {
    if (s <= 1.0) return 1.0;
    if (s >= 2.0) return 0.0;
    const double t = s - 1.0;
    return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double velocity_cutoff_speed(double speed, double delta) {
    check_positive(delta, "delta");
    return cutoff_profile(delta * speed);
}

double velocity_cutoff(std::span<const double> v, double delta) {
    return velocity_cutoff_speed(std::sqrt(detail::sqnorm(v)), delta);
}

void confinement_gradient(std::span<const double> x, std::span<double> out) {
    std::copy(x.begin(), x.end(), out.begin());
}

}  // namespace flocksim
