#pragma once

#include <cmath>
#include <span>

namespace flocksim {

namespace detail {

// u^k for small nonnegative integer k by binary exponentiation.
inline double upow(double u, int k) {
    double r = 1.0;
    while (k > 0) {
        if (k & 1) r *= u;
        u *= u;
        k >>= 1;
    }
    return r;
}

inline double sqnorm(std::span<const double> x) {
    double s = 0.0;
    for (double c : x) s += c * c;
    return s;
}

}  // namespace detail

// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

// C_d = 1/((d-2)|B(0,1)|), the Newtonian normalization.
double newtonian_constant(int d);

// W_eps(x) = C_d (eps + |x|^2)^{-(d-2)/2}, radial form in r^2.
double newtonian_reg_potential_r2(double r2, double eps, int d);
double newtonian_reg_potential(std::span<const double> x, double eps, int d);

// grad W_eps(x) = -(d-2) C_d x (eps + |x|^2)^{-d/2}
void newtonian_reg_force(std::span<const double> x, double eps, int d, std::span<double> out);

// Scalar s with grad W_eps(x) = s * x, radial form.
double newtonian_reg_force_scale_r2(double r2, double eps, int d);

struct KernelBoundReport {
    double numeric_max = 0.0;       // grid-searched max |grad W_eps|
    double analytic_max = 0.0;      // C_d (d-2)(d-1)^{(d-1)/2} d^{-d/2} eps^{-(d-1)/2}
    double ratio_to_eps_pow = 0.0;  // numeric_max / eps^{-d/2}
    double argmax_radius = 0.0;
};

// Maximize |grad W_eps| over a logarithmic radial grid and compare with the
// closed-form critical point at r^2 = eps/(d-1). grid >= 1000.
KernelBoundReport verify_kernel_bounds(double eps, int d, int grid);

// Normalization Z_d of the bump exp(-1/(1-|y|^2)) on B(0,1); cached per d.
// Valid for d >= 1 (the d=1,2 cases are used by quadrature checks).
double mollifier_norm(int d);

// phi1^eps(x) = eps^{-d} Z_d^{-1} exp(-1/(1-|x/eps|^2)) on |x| < eps, else 0.
double mollifier_r2(double r2, double eps, int d);
double mollifier(std::span<const double> x, double eps, int d);

// phi2(s): 1 on [0,1], quintic smoothstep bridge on (1,2), 0 on [2,inf).
double cutoff_profile(double s);
// phi2^delta(v) = phi2(delta |v|)
double velocity_cutoff_speed(double speed, double delta);
double velocity_cutoff(std::span<const double> v, double delta);

// grad V with V(x) = |x|^2/2, i.e. the identity.
void confinement_gradient(std::span<const double> x, std::span<double> out);

}  // namespace flocksim
