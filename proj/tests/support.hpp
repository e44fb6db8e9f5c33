#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "flocksim/ensemble.hpp"

// Test-side helpers. The quadrature here is the tests' own oracle and stays
// independent of the library's internals.
namespace testsup {

inline double simpson(const std::function<double(double)>& f, double a, double b) {
    return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = simpson(f, a, m);
    const double right = simpson(f, m, b);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10) {
    return adaptive_simpson(f, a, b, simpson(f, a, b), tol, 40);
}

// Random phase ensemble with positions ~ N(0, xscale^2), velocities ~ N(0, vscale^2).
inline flocksim::PhaseEnsemble random_ensemble(int64_t n, int dim, uint64_t seed,
                                               double xscale = 1.0, double vscale = 1.0) {
    flocksim::PhaseEnsemble ens(n, dim);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    for (auto& x : ens.pos) x = xscale * g(rng);
    for (auto& v : ens.vel) v = vscale * g(rng);
    return ens;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double w = 0.0;
    for (size_t i = 0; i < a.size(); ++i) w = std::max(w, std::abs(a[i] - b[i]));
    return w;
}

}  // namespace testsup
