// Timing comparison of the optimized pairwise kernels against the serial
// direct-sum reference, with a cross-check of the results while at it.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "flocksim/initial.hpp"
#include "flocksim/mckean_vlasov.hpp"
#include "flocksim/particle_system.hpp"
#include "flocksim/serial_ref.hpp"

using namespace flocksim;
using clk = std::chrono::steady_clock;

namespace {

double seconds(clk::time_point a, clk::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double w = 0.0;
    for (size_t i = 0; i < a.size(); ++i) w = std::max(w, std::abs(a[i] - b[i]));
    return w;
}

}  // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
    Params p;
    p.xi = Xi{0.5, 0.5, 1e-2};

    std::printf("%8s %12s %12s %9s %12s\n", "N", "drift[s]", "serial[s]", "speedup", "max|diff|");
    for (int64_t n : {512, 1024, 2048, 4096}) {
        const auto ens = sample_initial({}, n, 3, 42);

        drift(ens, p);  // warm up
        auto t0 = clk::now();
        Drift fast{};
        for (int r = 0; r < repeats; ++r) fast = drift(ens, p);
        auto t1 = clk::now();
        const auto slow = serial_ref::drift(ens, p);
        auto t2 = clk::now();

        const double tf = seconds(t0, t1) / repeats;
        const double ts = seconds(t1, t2);
        std::printf("%8lld %12.4f %12.4f %8.1fx %12.3e\n", static_cast<long long>(n), tf, ts,
                    ts / tf, max_abs_diff(fast.dv, slow.dv));
    }

    // field evaluation throughput (reference-flow inner loop)
    std::printf("\n%8s %12s %14s\n", "M", "fields[s]", "pairs/s");
    for (int64_t m : {2048, 8192}) {
        const auto ens = sample_initial({}, m, 3, 43);
        FrozenFlow flow;
        flow.dt = 1e-2;
        flow.ensembles = {ens, ens};
        PhaseEnsemble paths = ens;
        const NoisePlan plan(43, 3, 1e-2);
        reference_em_step_inplace(paths, flow, 0, p, 1e-2, plan);  // warm up
        auto t0 = clk::now();
        for (int r = 0; r < repeats; ++r) {
            PhaseEnsemble st = ens;
            reference_em_step_inplace(st, flow, 0, p, 1e-2, plan);
        }
        auto t1 = clk::now();
        const double dt = seconds(t0, t1) / repeats;
        std::printf("%8lld %12.4f %14.3e\n", static_cast<long long>(m), dt,
                    static_cast<double>(m) * m / dt);
    }
    return 0;
}
