#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "flocksim/config.hpp"
#include "flocksim/diagnostics.hpp"
#include "flocksim/io.hpp"
#include "flocksim/particle_system.hpp"
#include "flocksim/validate.hpp"

namespace fs = std::filesystem;
using namespace flocksim;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::optional<uint64_t> seed;
    int threads = 0;
};

Config resolve_config(const CommonOpts& opts) {
    Config cfg = opts.config_path.empty() ? parse_config("") : load_config(opts.config_path);
    if (opts.seed) cfg.seed = *opts.seed;
    // Precedence for the output directory: --out, FLOCKSIM_OUT, config, "out".
    if (!opts.out_dir.empty()) {
        cfg.out_dir = opts.out_dir;
    } else if (const char* env = std::getenv("FLOCKSIM_OUT")) {
        cfg.out_dir = env;
    }
    return cfg;
}

struct OutputSet {
    fs::path dir;
    std::vector<std::string> names;

    explicit OutputSet(const std::string& d) : dir(d) { fs::create_directories(dir); }
    std::string path(const std::string& name) {
        names.push_back(name);
        return (dir / name).string();
    }
};

void finish_manifest(OutputSet& out, const Config& cfg, const std::string& command,
                     std::optional<Schedule> schedule, double wallclock) {
    RunManifest m;
    m.command = command;
    m.config_echo = to_json(cfg);
    m.schedule = std::move(schedule);
    m.wallclock_sec = wallclock;
    for (const auto& name : out.names) {
        const auto p = (out.dir / name).string();
        m.files.push_back({name, fs::file_size(p), fnv1a64_file(p)});
    }
    write_manifest(m, (out.dir / "manifest.json").string());
}

int cmd_simulate(const Config& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const Params p = cfg.params_for(cfg.n);
    const auto init = sample_initial(cfg.initial, cfg.n, cfg.dim, cfg.seed);
    const NoisePlan plan(cfg.seed, cfg.dim, cfg.dt);
    const auto traj = simulate(init, p, cfg.t_final, cfg.dt, plan);

    std::vector<DiagnosticsRecord> diags;
    diags.reserve(traj.snapshots.size());
    for (const auto& snap : traj.snapshots) {
        DiagnosticsRecord r;
        try {
            r = diagnostics_record(snap, p, cfg.entropy_k);
        } catch (const DegenerateSampleError&) {
            r.time = snap.time;
            r.entropy = std::numeric_limits<double>::quiet_NaN();
        }
        diags.push_back(r);
    }

    OutputSet out(cfg.out_dir);
    write_trajectory_file(traj, out.path("trajectory.tsv"));
    {
        std::ostringstream os;
        write_diagnostics(diags, os);
        write_text_file((out.dir / "diagnostics.tsv").string(), os.str());
        out.names.push_back("diagnostics.tsv");
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    finish_manifest(out, cfg, "simulate",
                    cfg.use_schedule ? std::optional(cfg.schedule_for(cfg.n)) : std::nullopt, wall);
    std::cout << "simulate: " << traj.snapshots.size() << " snapshots of N=" << cfg.n
              << " written to " << cfg.out_dir << "\n";
    return 0;
}

int cmd_couple(const Config& cfg, bool keep_trajectories) {
    const auto t0 = std::chrono::steady_clock::now();
    const Params p = cfg.params_for(cfg.n);
    CoupledRunOptions opts;
    opts.picard_max_iters = cfg.picard_max_iters;
    opts.picard_tol = cfg.picard_tol;
    opts.init = cfg.initial;
    opts.keep_trajectories = keep_trajectories;
    if (cfg.use_schedule) opts.schedule = cfg.schedule_for(cfg.n);

    const auto res = coupled_run(cfg.n, cfg.m(), p, cfg.t_final, cfg.dt, cfg.seed, opts);

    OutputSet out(cfg.out_dir);
    nlohmann::json j = to_json(res.report);
    if (keep_trajectories) {
        const auto gap = alignment_gap(res.interacting, res.reference, res.flow, p.xi);
        j["alignment_gap"] = {{"per_particle", gap.per_particle},
                              {"max_integral", gap.max_integral},
                              {"gap_curve", gap.gap_curve}};
        write_trajectory_file(res.interacting, out.path("interacting.tsv"));
        write_trajectory_file(res.reference, out.path("reference.tsv"));
    }
    write_text_file((out.dir / "coupling_report.json").string(), j.dump(2) + "\n");
    out.names.push_back("coupling_report.json");
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    finish_manifest(out, cfg, "couple", opts.schedule, wall);
    std::cout << "couple: N=" << cfg.n << " M=" << cfg.m() << " sup_error=" << res.report.sup_error
              << " picard_iters=" << res.report.picard_iterations << "\n";
    return 0;
}

int cmd_sweep(const Config& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    Params base;
    base.gamma = cfg.gamma;
    base.lambda = cfg.lambda;
    base.beta = cfg.beta;
    base.sigma = cfg.sigma;
    base.dim = cfg.dim;
    base.xi = Xi{1.0, 1.0, 1.0};  // replaced per N by the schedule

    SweepOptions opts;
    opts.m_multiplier = cfg.m_multiplier;
    opts.m_max = cfg.m_max;
    opts.caps = cfg.caps();
    opts.picard_max_iters = cfg.picard_max_iters;
    opts.picard_tol = cfg.picard_tol;
    opts.init = cfg.initial;
    opts.seed0 = cfg.seed;

    const auto rep = sweep(cfg.n_list, cfg.alpha, cfg.reps, base, cfg.t_final, cfg.dt, opts);

    OutputSet out(cfg.out_dir);
    write_text_file((out.dir / "sweep_report.json").string(), to_json(rep).dump(2) + "\n");
    out.names.push_back("sweep_report.json");
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    finish_manifest(out, cfg, "sweep", std::nullopt, wall);
    if (rep.degenerate)
        std::cout << "sweep: degenerate (zero error); no rate fitted\n";
    else
        std::cout << "sweep: slope=" << rep.slope << " +- " << rep.half_width
                  << " over N=" << cfg.n_list.size() << " values, reps=" << cfg.reps << "\n";
    return 0;
}

int cmd_validate(const Config& cfg) {
    const auto results = run_validation(cfg.seed);
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
        all = all && r.pass;
    }
    std::cout << (all ? "validation OK" : "validation FAILED") << "\n";
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moderately interacting flocking simulator and mean-field error study"};
    app.require_subcommand(1);

    CommonOpts opts;
    bool keep_trajectories = false;
    for (auto* sub : {app.add_subcommand("simulate", "integrate one interacting system"),
                      app.add_subcommand("couple", "one shared-noise coupled run"),
                      app.add_subcommand("sweep", "convergence sweep over N"),
                      app.add_subcommand("validate", "run the oracle/invariant suite")}) {
        sub->add_option("--config", opts.config_path, "config file (key = value lines)");
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_option("--seed", opts.seed, "seed override");
        sub->add_option("--threads", opts.threads, "worker thread count");
    }
    app.get_subcommand("couple")->add_flag("--keep-trajectories", keep_trajectories,
                                           "write both trajectories and the alignment gap");

    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (opts.threads > 0) omp_set_num_threads(opts.threads);
#endif

    try {
        const Config cfg = resolve_config(opts);
        if (app.got_subcommand("simulate")) return cmd_simulate(cfg);
        if (app.got_subcommand("couple")) return cmd_couple(cfg, keep_trajectories);
        if (app.got_subcommand("sweep")) return cmd_sweep(cfg);
        return cmd_validate(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const BlowupError& e) {
        std::cerr << "blowup: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
