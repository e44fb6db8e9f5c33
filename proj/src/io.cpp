#include "flocksim/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace flocksim {

namespace {

void append_g17(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

}  // namespace

void write_trajectory(const Trajectory& traj, std::ostream& os) {
    if (traj.snapshots.empty()) throw std::invalid_argument("write_trajectory: empty trajectory");
    const int d = traj.snapshots.front().dim;
    std::string line = "time\tindex";
    for (int c = 1; c <= d; ++c) line += "\tx" + std::to_string(c);
    for (int c = 1; c <= d; ++c) line += "\tv" + std::to_string(c);
    os << line << '\n';
    for (const auto& snap : traj.snapshots) {
        const int64_t n = snap.count();
        for (int64_t i = 0; i < n; ++i) {
            line.clear();
            append_g17(line, snap.time);
            line += '\t';
            line += std::to_string(i);
            for (int c = 0; c < d; ++c) {
                line += '\t';
                append_g17(line, snap.pos[i * d + c]);
            }
            for (int c = 0; c < d; ++c) {
                line += '\t';
                append_g17(line, snap.vel[i * d + c]);
            }
            os << line << '\n';
        }
    }
    if (!os) throw std::runtime_error("write_trajectory: stream failure");
}

void write_trajectory_file(const Trajectory& traj, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_trajectory(traj, os);
    if (!os) throw std::runtime_error("failed writing trajectory to '" + path + "'");
}

Trajectory read_trajectory(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("read_trajectory: missing header");
    int cols = 0;
    {
        std::istringstream hs(header);
        std::string tok;
        while (hs >> tok) ++cols;
    }
    const int d = (cols - 2) / 2;
    if (d < 1 || cols != 2 + 2 * d) throw std::runtime_error("read_trajectory: malformed header");

    Trajectory traj;
    PhaseEnsemble snap;
    snap.dim = d;
    bool have_time = false;
    double cur_time = 0.0;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        double t;
        int64_t idx;
        if (!(ls >> t >> idx)) throw std::runtime_error("read_trajectory: malformed row");
        if (!have_time || t != cur_time) {
            if (have_time) traj.snapshots.push_back(std::move(snap));
            snap = PhaseEnsemble();
            snap.dim = d;
            snap.time = t;
            cur_time = t;
            have_time = true;
        }
        double v;
        for (int c = 0; c < d; ++c) {
            ls >> v;
            snap.pos.push_back(v);
        }
        for (int c = 0; c < d; ++c) {
            ls >> v;
            snap.vel.push_back(v);
        }
        if (!ls) throw std::runtime_error("read_trajectory: malformed row");
    }
    if (have_time) traj.snapshots.push_back(std::move(snap));
    if (traj.snapshots.size() > 1)
        traj.dt = traj.snapshots[1].time - traj.snapshots[0].time;
    return traj;
}

Trajectory read_trajectory_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
    return read_trajectory(is);
}

void write_diagnostics(const std::vector<DiagnosticsRecord>& recs, std::ostream& os) {
    os << "time\tkinetic\tconfinement\tinteraction\tentropy\torder\n";
    for (const auto& r : recs) {
        std::string line;
        append_g17(line, r.time);
        for (double v : {r.kinetic, r.confinement, r.interaction, r.entropy, r.order}) {
            line += '\t';
            append_g17(line, v);
        }
        os << line << '\n';
    }
    if (!os) throw std::runtime_error("write_diagnostics: stream failure");
}

nlohmann::json to_json(const Xi& xi) {
    return {{"eps", xi.eps}, {"delta", xi.delta}, {"nu", xi.nu}};
}

nlohmann::json to_json(const Params& p) {
    return {{"gamma", p.gamma}, {"lambda", p.lambda}, {"beta", p.beta},
            {"sigma", p.sigma}, {"dim", p.dim},       {"xi", to_json(p.xi)}};
}

nlohmann::json to_json(const Schedule& s) {
    return {{"alpha", s.alpha},
            {"n", s.n},
            {"dim", s.dim},
            {"budget", s.budget},
            {"xi", to_json(s.xi)},
            {"eps_capped", s.eps_capped},
            {"delta_capped", s.delta_capped},
            {"identity_residual", s.identity_residual()}};
}

nlohmann::json to_json(const CouplingReport& r) {
    nlohmann::json j{{"n", r.n},
                     {"m", r.m},
                     {"seeds", r.seeds},
                     {"times", r.times},
                     {"err_x", r.err_x},
                     {"err_v", r.err_v},
                     {"err_total", r.err_total},
                     {"sup_error", r.sup_error},
                     {"params", to_json(r.params)},
                     {"picard_iterations", r.picard_iterations},
                     {"picard_converged", r.picard_converged}};
    if (r.schedule) j["schedule"] = to_json(*r.schedule);
    return j;
}

nlohmann::json to_json(const SweepReport& r) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : r.cells) {
        cells.push_back({{"n", c.n},
                         {"m", c.m},
                         {"schedule", to_json(c.schedule)},
                         {"sup_errors", c.sup_errors},
                         {"mean_sup_error", c.mean_sup_error}});
    }
    return {{"alpha", r.alpha},
            {"reps", r.reps},
            {"t_final", r.t_final},
            {"dt", r.dt},
            {"base_params", to_json(r.base)},
            {"cells", cells},
            {"slope", r.degenerate ? nlohmann::json() : nlohmann::json(r.slope)},
            {"intercept", r.degenerate ? nlohmann::json() : nlohmann::json(r.intercept)},
            {"half_width", r.degenerate ? nlohmann::json() : nlohmann::json(r.half_width)},
            {"degenerate", r.degenerate}};
}

nlohmann::json to_json(const Config& c) {
    nlohmann::json j{{"dim", c.dim},
                     {"n", c.n},
                     {"m_multiplier", c.m_multiplier},
                     {"m_max", c.m_max},
                     {"t_final", c.t_final},
                     {"dt", c.dt},
                     {"gamma", c.gamma},
                     {"lambda", c.lambda},
                     {"beta", c.beta},
                     {"sigma", c.sigma},
                     {"use_schedule", c.use_schedule},
                     {"eps_cap", c.eps_cap},
                     {"delta_cap", c.delta_cap},
                     {"seed", c.seed},
                     {"reps", c.reps},
                     {"picard_max_iters", c.picard_max_iters},
                     {"picard_tol", c.picard_tol},
                     {"entropy_k", c.entropy_k},
                     {"initial", c.initial.describe()},
                     {"out_dir", c.out_dir},
                     {"n_list", c.n_list}};
    if (c.use_schedule) {
        j["alpha"] = c.alpha;
    } else {
        j["eps"] = *c.eps;
        j["delta"] = *c.delta;
        j["nu"] = *c.nu;
    }
    return j;
}

uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "' for checksum");
    uint64_t h = 1469598103934665603ull;
    char buf[65536];
    while (is.read(buf, sizeof(buf)) || is.gcount() > 0) {
        const auto got = is.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (!is) break;
    }
    return h;
}

void write_manifest(const RunManifest& m, const std::string& path) {
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : m.files)
        files.push_back({{"name", f.name}, {"bytes", f.bytes}, {"fnv1a64", f.fnv1a64}});
    nlohmann::json j{{"version", m.version},
                     {"command", m.command},
                     {"config", m.config_echo},
                     {"wallclock_sec", m.wallclock_sec},
                     {"files", files}};
    if (m.schedule) j["schedule"] = to_json(*m.schedule);
    write_text_file(path, j.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    os << content;
    if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace flocksim
