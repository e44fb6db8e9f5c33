#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flocksim/coupling.hpp"
#include "flocksim/initial.hpp"
#include "flocksim/params.hpp"

namespace flocksim {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parsed `key = value` run configuration. Exactly one of explicit (eps,
// delta, nu) or schedule mode (alpha) is active.
struct Config {
    int dim = 3;
    int64_t n = 256;
    int m_multiplier = 8;
    int64_t m_max = 32768;
    double t_final = 0.5;
    double dt = 1e-3;
    double gamma = 1.0, lambda = 1.0, beta = 1.0, sigma = 1.0;

    bool use_schedule = true;
    double alpha = 0.05;
    std::optional<double> eps, delta, nu;
    double eps_cap = 0.5, delta_cap = 0.5;

    uint64_t seed = 1;
    int reps = 10;
    int picard_max_iters = 30;
    double picard_tol = 1e-9;
    int entropy_k = 4;
    InitialCondition initial{};
    std::string out_dir = "out";
    std::vector<int64_t> n_list{64, 128, 256, 512};

    int64_t m() const;                        // m_multiplier * n, capped by m_max
    ScheduleCaps caps() const;                // schedule caps from eps_cap/delta_cap
    Schedule schedule_for(int64_t n_val) const;
    Xi xi_for(int64_t n_val) const;           // explicit xi or schedule(n_val)
    Params params_for(int64_t n_val) const;
};

// Parses a human-readable key-value document ('#' comments, blank lines
// allowed). Unknown keys, type mismatches and constraint violations raise
// ConfigError naming the key.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

}  // namespace flocksim
