#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "flocksim/kernels.hpp"
#include "flocksim/particle_system.hpp"
#include "flocksim/serial_ref.hpp"
#include "support.hpp"

using namespace flocksim;

namespace {

PhaseEnsemble permuted(const PhaseEnsemble& ens, const std::vector<int64_t>& perm) {
    PhaseEnsemble out(ens.count(), ens.dim);
    out.time = ens.time;
    const int d = ens.dim;
    for (int64_t i = 0; i < ens.count(); ++i)
        for (int c = 0; c < d; ++c) {
            out.pos[perm[i] * d + c] = ens.pos[i * d + c];
            out.vel[perm[i] * d + c] = ens.vel[i * d + c];
        }
    return out;
}

}  // namespace

TEST_CASE("empirical alignment") {
    const Xi xi{0.8, 0.5, 1e-2};

    SUBCASE("N=1 single-term reduction") {
        PhaseEnsemble ens(1, 3);
        ens.vel = {0.4, -0.2, 1.1};
        const auto u = empirical_alignment(0, ens, xi);
        const double phi0 = mollifier_r2(0.0, xi.eps, 3);
        const double w = velocity_cutoff(ens.velocity(0), xi.delta);
        for (int c = 0; c < 3; ++c)
            CHECK(u[c] == doctest::Approx(ens.vel[c] * w * phi0 / (phi0 + xi.nu)).epsilon(1e-14));
    }

    SUBCASE("all fast velocities annihilate the numerator") {
        auto ens = testsup::random_ensemble(12, 3, 77, 0.2, 0.0);
        for (int64_t i = 0; i < 12; ++i) ens.vel[i * 3] = 5.0 + i;  // |v| >= 2/delta = 4
        for (int64_t i = 0; i < 12; ++i) {
            const auto u = empirical_alignment(i, ens, xi);
            for (double c : u) CHECK(c == 0.0);
        }
    }

    SUBCASE("matches the serial direct-sum oracle") {
        for (uint64_t seed : {1u, 2u, 3u}) {
            const auto ens = testsup::random_ensemble(3, 3, seed, 0.4, 1.0);
            for (int64_t i = 0; i < 3; ++i) {
                const auto u = empirical_alignment(i, ens, xi);
                const auto ref = serial_ref::empirical_alignment(i, ens, xi);
                CHECK(testsup::max_abs_diff(u, ref) <= 1e-12);
            }
        }
        const auto big = testsup::random_ensemble(64, 3, 9, 0.5, 1.0);
        for (int64_t i : {0, 13, 63}) {
            const auto u = empirical_alignment(i, big, xi);
            const auto ref = serial_ref::empirical_alignment(i, big, xi);
            CHECK(testsup::max_abs_diff(u, ref) <= 1e-12);
        }
    }

    SUBCASE("bounded by 2/delta") {
        const auto ens = testsup::random_ensemble(128, 3, 10, 0.3, 3.0);
        const auto all = empirical_alignment_all(ens, xi);
        for (int64_t i = 0; i < 128; ++i) {
            double n2 = 0.0;
            for (int c = 0; c < 3; ++c) n2 += all[i * 3 + c] * all[i * 3 + c];
            CHECK(std::sqrt(n2) <= 2.0 / xi.delta);
        }
    }

    SUBCASE("index range") {
        const auto ens = testsup::random_ensemble(4, 3, 11);
        CHECK_THROWS_AS(empirical_alignment(4, ens, xi), std::out_of_range);
        CHECK_THROWS_AS(empirical_alignment(-1, ens, xi), std::out_of_range);
    }
}

TEST_CASE("interaction force") {
    SUBCASE("N=1 empty sum") {
        PhaseEnsemble ens(1, 3);
        ens.pos = {0.3, -0.1, 2.0};
        const auto f = interaction_force(0, ens, 0.5);
        for (double c : f) CHECK(c == 0.0);
    }
    SUBCASE("two particles: equal and opposite") {
        PhaseEnsemble ens(2, 3);
        ens.pos = {0.7, 0.2, -0.3, -0.7, -0.2, 0.3};
        const auto f0 = interaction_force(0, ens, 0.4);
        const auto f1 = interaction_force(1, ens, 0.4);
        for (int c = 0; c < 3; ++c) CHECK(f0[c] == -f1[c]);
    }
    SUBCASE("global cancellation at N=64") {
        const auto ens = testsup::random_ensemble(64, 3, 12, 1.0, 1.0);
        double sum[3] = {0, 0, 0};
        for (int64_t i = 0; i < 64; ++i) {
            const auto f = interaction_force(i, ens, 0.3);
            for (int c = 0; c < 3; ++c) sum[c] += 64.0 * f[c];
        }
        for (int c = 0; c < 3; ++c) CHECK(std::abs(sum[c]) <= 1e-10);
    }
    SUBCASE("matches serial oracle") {
        const auto ens = testsup::random_ensemble(48, 3, 13, 0.8, 1.0);
        for (int64_t i : {0, 7, 47}) {
            const auto f = interaction_force(i, ens, 0.25);
            const auto ref = serial_ref::interaction_force(i, ens, 0.25);
            CHECK(testsup::max_abs_diff(f, ref) <= 1e-12);
        }
    }
}

TEST_CASE("drift") {
    SUBCASE("lambda=beta=0 reduces to pure damping, exactly") {
        Params p;
        p.lambda = p.beta = 0.0;
        p.gamma = 1.7;
        const auto ens = testsup::random_ensemble(16, 3, 14);
        const auto dr = drift(ens, p);
        CHECK(dr.dx == ens.vel);
        for (size_t t = 0; t < ens.vel.size(); ++t) CHECK(dr.dv[t] == -1.7 * ens.vel[t]);
    }
    SUBCASE("free transport drift") {
        Params p;
        p.gamma = p.lambda = p.beta = 0.0;
        const auto ens = testsup::random_ensemble(8, 3, 15);
        const auto dr = drift(ens, p);
        CHECK(dr.dx == ens.vel);
        for (double v : dr.dv) CHECK(v == 0.0);
    }
    SUBCASE("matches the serial oracle with all terms on") {
        Params p;
        p.gamma = 0.5;
        p.lambda = 1.5;
        p.beta = 2.0;
        p.xi = Xi{0.9, 0.4, 5e-3};
        const auto ens = testsup::random_ensemble(40, 3, 16, 0.5, 1.0);
        const auto a = drift(ens, p);
        const auto b = serial_ref::drift(ens, p);
        CHECK(testsup::max_abs_diff(a.dv, b.dv) <= 1e-12);
    }
    SUBCASE("label permutation commutes with the drift exactly") {
        Params p;
        p.xi = Xi{0.7, 0.5, 1e-2};
        auto ens = testsup::random_ensemble(96, 3, 17, 0.4, 1.0);
        // duplicated state stresses the tie handling
        for (int c = 0; c < 3; ++c) {
            ens.pos[5 * 3 + c] = ens.pos[41 * 3 + c];
            ens.vel[5 * 3 + c] = ens.vel[41 * 3 + c];
        }
        std::vector<int64_t> perm(96);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), std::mt19937_64(18));

        const auto base = drift(ens, p);
        const auto shuf = drift(permuted(ens, perm), p);
        for (int64_t i = 0; i < 96; ++i)
            for (int c = 0; c < 3; ++c) {
                CHECK(shuf.dv[perm[i] * 3 + c] == base.dv[i * 3 + c]);
                CHECK(shuf.dx[perm[i] * 3 + c] == base.dx[i * 3 + c]);
            }
    }
    SUBCASE("non-finite state is rejected") {
        Params p;
        auto ens = testsup::random_ensemble(4, 3, 19);
        ens.vel[5] = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(drift(ens, p), std::invalid_argument);
    }
}

TEST_CASE("em_step") {
    SUBCASE("free transport single step is exact") {
        Params p;
        p.gamma = p.lambda = p.beta = p.sigma = 0.0;
        const auto ens = testsup::random_ensemble(8, 3, 20);
        const NoisePlan plan(20, 3, 0.125);
        const auto next = em_step(ens, p, 0.125, 0, plan);
        for (size_t t = 0; t < ens.pos.size(); ++t) {
            CHECK(next.pos[t] == ens.pos[t] + 0.125 * ens.vel[t]);
            CHECK(next.vel[t] == ens.vel[t]);
        }
        CHECK(next.time == ens.time + 0.125);
    }
    SUBCASE("same seed, same inputs: bit-identical") {
        Params p;
        p.xi = Xi{0.6, 0.5, 1e-2};
        const auto ens = testsup::random_ensemble(32, 3, 21);
        const NoisePlan plan(21, 3, 1e-2);
        const auto a = em_step(ens, p, 1e-2, 3, plan);
        const auto b = em_step(ens, p, 1e-2, 3, plan);
        CHECK(a.pos == b.pos);
        CHECK(a.vel == b.vel);
    }
    SUBCASE("two half-steps vs one full step differ at O(dt^2)") {
        Params p;
        p.sigma = 0.0;
        p.lambda = p.beta = 0.0;
        p.gamma = 1.0;
        const auto ens = testsup::random_ensemble(8, 3, 22);
        auto err_for = [&](double dt) {
            const NoisePlan full(22, 3, dt), half(22, 3, dt / 2);
            const auto one = em_step(ens, p, dt, 0, full);
            const auto two = em_step(em_step(ens, p, dt / 2, 0, half), p, dt / 2, 1, half);
            double w = 0.0;
            for (size_t t = 0; t < one.pos.size(); ++t)
                w = std::max(w, std::abs(one.pos[t] - two.pos[t]));
            return w;
        };
        // for pure damping the defect is exactly gamma dt^2 |v|/4, so the
        // ratio under halving is exactly 4
        const double e1 = err_for(0.2), e2 = err_for(0.1);
        CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(1e-9));
    }
    SUBCASE("nonpositive dt") {
        Params p;
        const auto ens = testsup::random_ensemble(4, 3, 23);
        const NoisePlan plan(23, 3, 1e-2);
        CHECK_THROWS_AS(em_step(ens, p, 0.0, 0, plan), std::invalid_argument);
    }
}

TEST_CASE("simulate") {
    SUBCASE("T = dt gives exactly two snapshots") {
        Params p;
        p.xi = Xi{0.5, 0.5, 1e-2};
        const auto ens = testsup::random_ensemble(8, 3, 24);
        const NoisePlan plan(24, 3, 0.01);
        const auto traj = simulate(ens, p, 0.01, 0.01, plan);
        CHECK(traj.snapshots.size() == 2);
        CHECK(traj.snapshots[0].time == 0.0);
        CHECK(traj.snapshots[1].time == doctest::Approx(0.01));
    }
    SUBCASE("free transport over a horizon") {
        Params p;
        p.gamma = p.lambda = p.beta = p.sigma = 0.0;
        const auto ens = testsup::random_ensemble(100, 3, 25);
        const NoisePlan plan(25, 3, 1e-2);
        const auto traj = simulate(ens, p, 1.0, 1e-2, plan);
        CHECK(traj.snapshots.size() == 101);
        const auto& last = traj.snapshots.back();
        for (size_t t = 0; t < ens.pos.size(); ++t) {
            const double expect = ens.pos[t] + 1.0 * ens.vel[t];
            CHECK(std::abs(last.pos[t] - expect) <= 1e-12 * std::max(1.0, std::abs(expect)));
            CHECK(last.vel[t] == ens.vel[t]);
        }
    }
    SUBCASE("OU second moment at T=1 within 3 standard errors") {
        Params p;
        p.lambda = p.beta = 0.0;  // gamma = sigma = 1
        PhaseEnsemble ens(10000, 3);
        const NoisePlan plan(26, 3, 1e-3);
        const auto traj = simulate(ens, p, 1.0, 1e-3, plan);
        const auto& vel = traj.snapshots.back().vel;
        std::vector<double> w(10000, 0.0);
        for (int64_t i = 0; i < 10000; ++i)
            for (int c = 0; c < 3; ++c) w[i] += vel[i * 3 + c] * vel[i * 3 + c];
        double mean = std::accumulate(w.begin(), w.end(), 0.0) / w.size();
        double var = 0.0;
        for (double x : w) var += (x - mean) * (x - mean);
        var /= (w.size() - 1);
        const double target = 2.5939941502901616;  // 3 (1 - e^{-2})
        CHECK(std::abs(mean - target) <= 3.0 * std::sqrt(var / w.size()));
    }
    SUBCASE("dt must divide T") {
        Params p;
        const auto ens = testsup::random_ensemble(4, 3, 27);
        const NoisePlan plan(27, 3, 0.3);
        CHECK_THROWS_AS(simulate(ens, p, 1.0, 0.3, plan), std::invalid_argument);
    }
    SUBCASE("blowup aborts with the offending step") {
        Params p;
        p.sigma = 0.0;
        p.gamma = p.beta = 0.0;
        p.lambda = 1.0;  // explicit Euler on an oscillator with dt >> 1 explodes
        auto ens = testsup::random_ensemble(4, 3, 28);
        const NoisePlan plan(28, 3, 10.0);
        CHECK_THROWS_AS(simulate(ens, p, 10000.0, 10.0, plan), BlowupError);
        try {
            simulate(ens, p, 10000.0, 10.0, plan);
        } catch (const BlowupError& e) {
            CHECK(e.step() >= 0);
            CHECK(std::string(e.what()).find("step") != std::string::npos);
        }
    }
    SUBCASE("second moments stay bounded at default parameters") {
        Params p;
        p.xi = Xi{0.5, 0.5, 0.0803};
        const auto ens = testsup::random_ensemble(128, 3, 29);
        const NoisePlan plan(29, 3, 2e-3);
        const auto traj = simulate(ens, p, 0.5, 2e-3, plan);
        auto m2 = [](const PhaseEnsemble& e) {
            double s = 0.0;
            for (double x : e.pos) s += x * x;
            for (double v : e.vel) s += v * v;
            return s / e.count();
        };
        const double init = m2(traj.snapshots.front());
        for (const auto& snap : traj.snapshots) CHECK(m2(snap) < 10.0 * init);
    }
}
