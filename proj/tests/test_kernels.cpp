#include <doctest.h>

#include <cmath>
#include <random>

#include "flocksim/kernels.hpp"
#include "support.hpp"

using namespace flocksim;

namespace {
constexpr double kC3 = 0.23873241463784300;  // 3/(4 pi)
}

TEST_CASE("newtonian potential closed form") {
    SUBCASE("center value d=3 eps=1") {
        std::vector<double> x{0.0, 0.0, 0.0};
        CHECK(newtonian_reg_potential(x, 1.0, 3) == doctest::Approx(kC3).epsilon(1e-14));
    }
    SUBCASE("evaluated off-center") {
        std::vector<double> x{1.0, 0.0, 0.0};
        // C3 (0.25 + 1)^{-1/2}
        CHECK(newtonian_reg_potential(x, 0.25, 3) ==
              doctest::Approx(0.21352876302515312).epsilon(1e-14));
    }
    SUBCASE("even function") {
        std::mt19937_64 rng(1);
        std::normal_distribution<double> g;
        for (int t = 0; t < 50; ++t) {
            std::vector<double> x{g(rng), g(rng), g(rng)};
            std::vector<double> nx{-x[0], -x[1], -x[2]};
            CHECK(newtonian_reg_potential(x, 0.4, 3) == newtonian_reg_potential(nx, 0.4, 3));
        }
    }
    SUBCASE("decreasing in |x| and positive") {
        double prev = newtonian_reg_potential_r2(0.0, 0.3, 3);
        for (double r = 0.1; r < 5.0; r += 0.1) {
            const double w = newtonian_reg_potential_r2(r * r, 0.3, 3);
            CHECK(w > 0.0);
            CHECK(w < prev);
            prev = w;
        }
    }
    SUBCASE("parameter validation") {
        std::vector<double> x{0.0, 0.0, 0.0};
        CHECK_THROWS_AS(newtonian_reg_potential(x, 0.0, 3), std::invalid_argument);
        CHECK_THROWS_AS(newtonian_reg_potential(x, -1.0, 3), std::invalid_argument);
        CHECK_THROWS_AS(newtonian_reg_potential(x, 1.0, 2), std::invalid_argument);
    }
}

TEST_CASE("newtonian force") {
    SUBCASE("zero at the origin") {
        std::vector<double> x{0.0, 0.0, 0.0}, f(3);
        newtonian_reg_force(x, 1.0, 3, f);
        for (double c : f) CHECK(c == 0.0);
    }
    SUBCASE("frozen value d=3 eps=1 x=e1") {
        std::vector<double> x{1.0, 0.0, 0.0}, f(3);
        newtonian_reg_force(x, 1.0, 3, f);
        CHECK(f[0] == doctest::Approx(-0.08440465463972869).epsilon(1e-14));
        CHECK(f[1] == 0.0);
        CHECK(f[2] == 0.0);
    }
    SUBCASE("odd symmetry") {
        std::mt19937_64 rng(2);
        std::normal_distribution<double> g;
        for (int t = 0; t < 50; ++t) {
            std::vector<double> x{g(rng), g(rng), g(rng)}, nx{-x[0], -x[1], -x[2]};
            std::vector<double> f(3), nf(3);
            newtonian_reg_force(x, 0.6, 3, f);
            newtonian_reg_force(nx, 0.6, 3, nf);
            for (int c = 0; c < 3; ++c) CHECK(f[c] == -nf[c]);
        }
    }
    SUBCASE("agrees with central differences of the potential") {
        // independent oracle: finite differences, step 1e-6
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        const double eps = 0.7, h = 1e-6;
        int tested = 0;
        while (tested < 1000) {
            std::vector<double> x{u(rng), u(rng), u(rng)};
            if (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] < 0.01) continue;
            ++tested;
            std::vector<double> f(3), fd(3);
            newtonian_reg_force(x, eps, 3, f);
            double norm = 0.0;
            for (int c = 0; c < 3; ++c) {
                auto xp = x, xm = x;
                xp[c] += h;
                xm[c] -= h;
                fd[c] = (newtonian_reg_potential(xp, eps, 3) -
                         newtonian_reg_potential(xm, eps, 3)) /
                        (2 * h);
                norm += f[c] * f[c];
            }
            norm = std::sqrt(norm);
            for (int c = 0; c < 3; ++c) CHECK(std::abs(fd[c] - f[c]) <= 1e-6 * norm);
        }
    }
    SUBCASE("magnitude peaks at r^2 = eps/(d-1)") {
        const double eps = 0.8;
        const double rs = std::sqrt(eps / 2.0);
        auto mag = [&](double r) { return -newtonian_reg_force_scale_r2(r * r, eps, 3) * r; };
        CHECK(mag(rs) > mag(rs * 1.001));
        CHECK(mag(rs) > mag(rs * 0.999));
    }
}

TEST_CASE("verify_kernel_bounds") {
    SUBCASE("numeric max matches the analytic maximum within 1%") {
        for (double eps : {0.1, 0.5, 1.0}) {
            const auto rep = verify_kernel_bounds(eps, 3, 2000);
            CHECK(std::abs(rep.numeric_max / rep.analytic_max - 1.0) < 0.01);
        }
        // frozen analytic value for d=3, eps=1: C3 * 2 * 3^{-3/2}
        const auto rep = verify_kernel_bounds(1.0, 3, 2000);
        CHECK(rep.analytic_max == doctest::Approx(0.09188814923696534).epsilon(1e-13));
    }
    SUBCASE("halving eps scales the max by 2^{(d-1)/2}") {
        for (int d : {3, 4, 5}) {
            const auto a = verify_kernel_bounds(0.5, d, 2000);
            const auto b = verify_kernel_bounds(0.25, d, 2000);
            CHECK(b.numeric_max / a.numeric_max ==
                  doctest::Approx(std::pow(2.0, 0.5 * (d - 1))).epsilon(2e-2));
        }
    }
    SUBCASE("numeric max stays below the eps^{-d/2} envelope") {
        // the constant of the envelope is the analytic ratio at its largest
        const double envelope = 0.09188814923696534;  // analytic max at eps=1, d=3
        for (double eps : {0.1, 0.5, 1.0}) {
            const auto rep = verify_kernel_bounds(eps, 3, 2000);
            CHECK(rep.numeric_max <= envelope * std::pow(eps, -1.5) * (1 + 1e-12));
            CHECK(rep.ratio_to_eps_pow <= envelope * (1 + 1e-12));
        }
    }
    SUBCASE("grid precondition") {
        CHECK_THROWS_AS(verify_kernel_bounds(1.0, 3, 999), std::invalid_argument);
    }
}

TEST_CASE("mollifier") {
    SUBCASE("compact support") {
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> u(1.0, 3.0);
        const double eps = 0.5;
        for (int t = 0; t < 2000; ++t) {
            std::vector<double> x{u(rng), u(rng), u(rng)};
            double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
            const double target = eps * u(rng) / r;  // rescale to |x| in [eps, 3eps)
            for (auto& c : x) c *= target;
            CHECK(mollifier(x, eps, 3) == 0.0);
        }
        std::vector<double> edge{eps, 0.0, 0.0};
        CHECK(mollifier(edge, eps, 3) == 0.0);
    }
    SUBCASE("d=1 center value vs quadrature oracle") {
        // Z_1 from the tests' own adaptive quadrature
        const double z1 =
            2.0 * testsup::integrate([](double x) { return std::exp(-1.0 / (1.0 - x * x)); }, 0.0,
                                     1.0 - 1e-14);
        CHECK(z1 == doctest::Approx(0.44399381616807944).epsilon(1e-8));
        std::vector<double> x{0.0};
        CHECK(mollifier(x, 1.0, 1) == doctest::Approx(std::exp(-1.0) / z1).epsilon(1e-8));
    }
    SUBCASE("unit mass for d = 1, 2, 3 under test-side quadrature") {
        for (int d : {1, 2, 3}) {
            for (double eps : {0.3, 1.0}) {
                const double surf = d * unit_ball_volume(d);
                auto radial = [&](double r) {
                    std::vector<double> x(d, 0.0);
                    x[0] = r;
                    return surf * std::pow(r, d - 1) * mollifier(x, eps, d);
                };
                const double mass = testsup::integrate(radial, 0.0, eps, 1e-9);
                CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));
            }
        }
    }
    SUBCASE("nonnegative and radially decreasing inside the support") {
        const double eps = 0.9;
        double prev = mollifier_r2(0.0, eps, 3);
        for (double r = 0.02; r < eps; r += 0.02) {
            const double v = mollifier_r2(r * r, eps, 3);
            CHECK(v >= 0.0);
            CHECK(v <= prev);
            prev = v;
        }
    }
}

TEST_CASE("velocity cutoff") {
    SUBCASE("plateau, decay, and midpoint") {
        std::vector<double> v{2.0, 0.0, 0.0};
        CHECK(velocity_cutoff(v, 0.5) == 1.0);  // s = 1
        v[0] = 5.0;
        CHECK(velocity_cutoff(v, 0.5) == 0.0);  // s = 2.5
        v[0] = 3.0;
        CHECK(velocity_cutoff(v, 0.5) == doctest::Approx(0.5).epsilon(1e-15));  // s = 1.5
    }
    SUBCASE("C2 at the junctions: one-sided second differences match") {
        for (double s0 : {1.0, 2.0}) {
            for (double h : {1e-4, 1e-5}) {
                const double d2m =
                    (cutoff_profile(s0 - 2 * h) - 2 * cutoff_profile(s0 - h) + cutoff_profile(s0)) /
                    (h * h);
                const double d2p =
                    (cutoff_profile(s0) - 2 * cutoff_profile(s0 + h) + cutoff_profile(s0 + 2 * h)) /
                    (h * h);
                CHECK(std::abs(d2m - d2p) <= 60.0 * h + 1e-7);  // O(h)
            }
        }
    }
    SUBCASE("|v phi2^delta(v)| <= 2/delta by sampling") {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> g(0.0, 4.0);
        for (int t = 0; t < 5000; ++t) {
            std::vector<double> v{g(rng), g(rng), g(rng)};
            const double delta = 0.1 + 0.9 * std::abs(g(rng)) / 4.0;
            const double speed = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
            CHECK(speed * velocity_cutoff(v, delta) <= 2.0 / delta);
        }
    }
    SUBCASE("value in [0,1] everywhere") {
        for (double s = 0.0; s < 3.0; s += 0.01) {
            CHECK(cutoff_profile(s) >= 0.0);
            CHECK(cutoff_profile(s) <= 1.0);
        }
    }
}

TEST_CASE("confinement gradient is the identity") {
    std::vector<double> x{1.0, 2.0, 3.0}, g(3);
    confinement_gradient(x, g);
    CHECK(g == x);
    std::vector<double> zero{0.0, 0.0, 0.0};
    confinement_gradient(zero, g);
    CHECK(g == zero);
    // linearity under scaling
    std::vector<double> cx{2.5, 5.0, 7.5};
    confinement_gradient(cx, g);
    for (int c = 0; c < 3; ++c) CHECK(g[c] == 2.5 * x[c]);
}
