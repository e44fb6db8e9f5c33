#include "flocksim/validate.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "flocksim/coupling.hpp"
#include "flocksim/diagnostics.hpp"
#include "flocksim/initial.hpp"
#include "flocksim/kernels.hpp"
#include "flocksim/particle_system.hpp"
#include "flocksim/serial_ref.hpp"

namespace flocksim {

namespace {

struct Suite {
    std::vector<CheckResult> results;
    std::mt19937_64 rng;

    explicit Suite(uint64_t seed) : rng(seed) {}

    void check(const std::string& name, bool pass, const std::string& detail) {
        results.push_back({name, pass, detail});
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void kernel_bounds(Suite& s) {
    double worst = 0.0;
    for (double eps : {0.1, 0.5, 1.0}) {
        const auto rep = verify_kernel_bounds(eps, 3, 4000);
        worst = std::max(worst, std::abs(rep.numeric_max / rep.analytic_max - 1.0));
    }
    s.check("kernel_gradient_bound", worst < 0.01, "max rel dev " + fmt(worst));
}

void mollifier_checks(Suite& s) {
    // midpoint rule on the radial profile; the integrand is smooth and
    // compactly supported
    double worst = 0.0;
    for (int d : {1, 3}) {
        const double eps = 0.7;
        const int nq = 20000;
        double integral = 0.0;
        const double surf = d * unit_ball_volume(d);
        for (int i = 0; i < nq; ++i) {
            const double r = (i + 0.5) * eps / nq;
            std::vector<double> x(d, 0.0);
            x[0] = r;
            integral += surf * std::pow(r, d - 1) * mollifier(x, eps, d) * (eps / nq);
        }
        worst = std::max(worst, std::abs(integral - 1.0));
    }
    s.check("mollifier_unit_mass", worst < 1e-4, "max |mass - 1| = " + fmt(worst));

    std::uniform_real_distribution<double> u(1.0, 4.0);
    int violations = 0;
    for (int t = 0; t < 100000; ++t) {
        const double eps = 0.5;
        std::vector<double> x(3);
        double r2 = 0.0;
        for (auto& c : x) {
            c = u(s.rng);
            r2 += c * c;
        }
        const double scale = eps * u(s.rng) / std::sqrt(r2);  // |x| in [eps, 4 eps)
        for (auto& c : x) c *= scale;
        if (mollifier(x, eps, 3) != 0.0) ++violations;
    }
    s.check("mollifier_support", violations == 0, fmt(violations) + " violations");
}

void cutoff_checks(Suite& s) {
    bool ok = cutoff_profile(0.3) == 1.0 && cutoff_profile(2.5) == 0.0 &&
              std::abs(cutoff_profile(1.5) - 0.5) < 1e-15;
    // C2 junctions: one-sided second differences agree to O(h)
    const double h = 1e-5;
    for (double s0 : {1.0, 2.0}) {
        const auto d2m = (cutoff_profile(s0 - 2 * h) - 2 * cutoff_profile(s0 - h) + cutoff_profile(s0)) / (h * h);
        const auto d2p = (cutoff_profile(s0) - 2 * cutoff_profile(s0 + h) + cutoff_profile(s0 + 2 * h)) / (h * h);
        if (std::abs(d2m - d2p) > 1e-3) ok = false;
    }
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    for (int t = 0; t < 20000; ++t) {
        std::vector<double> v{u(s.rng), u(s.rng), u(s.rng)};
        const double delta = 0.25 + 0.5 * std::abs(u(s.rng));
        const double speed = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        if (speed * velocity_cutoff(v, delta) > 2.0 / delta + 1e-12) ok = false;
    }
    s.check("velocity_cutoff", ok, "profile, C2 junctions, |v phi2| <= 2/delta");
}

void schedule_identity(Suite& s) {
    std::uniform_real_distribution<double> ua(0.01, 1.0);
    std::uniform_int_distribution<int64_t> un(2, 1000000000);
    std::uniform_int_distribution<int> ud(3, 6);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        ScheduleCaps caps;
        if (t % 2 == 0) caps = ScheduleCaps{0.5, 0.5};
        const auto sch = xi_schedule(un(s.rng), ua(s.rng), ud(s.rng), caps);
        worst = std::max(worst, sch.identity_residual());
    }
    s.check("schedule_identity", worst <= 1e-12, "max residual " + fmt(worst));
}

void free_transport(Suite& s) {
    Params p;
    p.gamma = p.lambda = p.beta = p.sigma = 0.0;
    const auto init = sample_initial({}, 100, 3, 7);
    const NoisePlan plan(7, 3, 1e-2);
    const auto traj = simulate(init, p, 1.0, 1e-2, plan);
    double worst = 0.0;
    const auto& last = traj.snapshots.back();
    for (size_t t = 0; t < init.pos.size(); ++t) {
        const double expect = init.pos[t] + 1.0 * init.vel[t];
        worst = std::max(worst, std::abs(last.pos[t] - expect) /
                                    std::max(1.0, std::abs(expect)));
    }
    s.check("free_transport", worst <= 1e-12, "max rel dev " + fmt(worst));
}

void determinism(Suite& s) {
    Params p;
    p.xi = Xi{0.8, 0.5, 1e-2};
    const auto init = sample_initial({}, 64, 3, 11);
    const NoisePlan plan(11, 3, 1e-2);
    const auto a = simulate(init, p, 0.1, 1e-2, plan);
    const auto b = simulate(init, p, 0.1, 1e-2, plan);
    bool same = true;
    for (size_t k = 0; k < a.snapshots.size(); ++k)
        if (a.snapshots[k].pos != b.snapshots[k].pos || a.snapshots[k].vel != b.snapshots[k].vel)
            same = false;
    s.check("determinism_replay", same, "two runs bit-identical");
}

void cancellation_and_bound(Suite& s) {
    const auto ens = sample_initial({}, 128, 3, 23);
    double sum[3] = {0, 0, 0};
    for (int64_t i = 0; i < 128; ++i) {
        const auto f = interaction_force(i, ens, 0.3);
        for (int c = 0; c < 3; ++c) sum[c] += 128.0 * f[c];
    }
    const double worst = std::max({std::abs(sum[0]), std::abs(sum[1]), std::abs(sum[2])});
    s.check("force_cancellation", worst <= 1e-10, "max |sum| " + fmt(worst));

    const Xi xi{0.6, 0.4, 1e-3};
    const auto u_all = empirical_alignment_all(ens, xi);
    double umax = 0.0;
    for (int64_t i = 0; i < 128; ++i) {
        double g = 0.0;
        for (int c = 0; c < 3; ++c) g += u_all[i * 3 + c] * u_all[i * 3 + c];
        umax = std::max(umax, std::sqrt(g));
    }
    s.check("alignment_bound", umax <= 2.0 / xi.delta, "max |u| " + fmt(umax) + " <= " + fmt(2.0 / xi.delta));

    const auto u3 = empirical_alignment(3, ens, xi);
    const auto u3_ref = serial_ref::empirical_alignment(3, ens, xi);
    double dev = 0.0;
    for (int c = 0; c < 3; ++c) dev = std::max(dev, std::abs(u3[c] - u3_ref[c]));
    s.check("alignment_vs_serial_ref", dev <= 1e-12, "max dev " + fmt(dev));
}

void coupling_degeneracy(Suite& s) {
    Params p;
    p.beta = p.lambda = 0.0;
    p.xi = Xi{0.5, 0.5, 0.1};
    const auto res = coupled_run(24, 48, p, 0.1, 1e-2, 31);
    s.check("coupling_degeneracy", res.report.sup_error == 0.0,
            "beta=lambda=0 sup error " + fmt(res.report.sup_error));
}

void ou_quick(Suite& s) {
    Params p;
    p.lambda = p.beta = 0.0;
    const auto rep = ou_oracle_check(p, 1.0, 1e-3, 4000, 101);
    s.check("ou_oracle", std::abs(rep.z) < 4.0,
            "z " + fmt(rep.z) + " (sample " + fmt(rep.sample_mean) + ", target " + fmt(rep.target) + ")");
}

}  // namespace

std::vector<CheckResult> run_validation(uint64_t seed) {
    Suite s(seed);
    kernel_bounds(s);
    mollifier_checks(s);
    cutoff_checks(s);
    schedule_identity(s);
    free_transport(s);
    determinism(s);
    cancellation_and_bound(s);
    coupling_degeneracy(s);
    ou_quick(s);
    return s.results;
}

}  // namespace flocksim
