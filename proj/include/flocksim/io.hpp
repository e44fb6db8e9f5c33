#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "flocksim/config.hpp"
#include "flocksim/coupling.hpp"
#include "flocksim/diagnostics.hpp"
#include "flocksim/ensemble.hpp"

namespace flocksim {

inline constexpr const char* kArtifactVersion = "flocksim 1.0.0";

// Tab-delimited trajectory: header, then one row per (time, particle) with
// columns time, index, x_1..x_d, v_1..v_d at 17 significant digits, which
// round-trips doubles bit-exactly.
void write_trajectory(const Trajectory& traj, std::ostream& os);
void write_trajectory_file(const Trajectory& traj, const std::string& path);

// Reads the data back; params are not stored in the text format.
Trajectory read_trajectory(std::istream& is);
Trajectory read_trajectory_file(const std::string& path);

void write_diagnostics(const std::vector<DiagnosticsRecord>& recs, std::ostream& os);

nlohmann::json to_json(const Xi& xi);
nlohmann::json to_json(const Params& p);
nlohmann::json to_json(const Schedule& s);
nlohmann::json to_json(const CouplingReport& r);
nlohmann::json to_json(const SweepReport& r);
nlohmann::json to_json(const Config& c);

struct FileRecord {
    std::string name;
    uint64_t bytes = 0;
    uint64_t fnv1a64 = 0;
};

// Everything needed to bit-reproduce a run given the same build: config echo,
// the schedule actually used, version, wall clock and per-file checksums.
struct RunManifest {
    std::string version = kArtifactVersion;
    std::string command;
    nlohmann::json config_echo;
    std::optional<Schedule> schedule;
    double wallclock_sec = 0.0;
    std::vector<FileRecord> files;
};

uint64_t fnv1a64_file(const std::string& path);
void write_manifest(const RunManifest& m, const std::string& path);

// Writes text and raises with path context on failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace flocksim
