#include "flocksim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace flocksim {

int64_t Config::m() const { return std::min<int64_t>(n * m_multiplier, m_max); }

ScheduleCaps Config::caps() const { return ScheduleCaps{eps_cap, delta_cap}; }

Schedule Config::schedule_for(int64_t n_val) const { return xi_schedule(n_val, alpha, dim, caps()); }

Xi Config::xi_for(int64_t n_val) const {
    if (use_schedule) return schedule_for(n_val).xi;
    return Xi{*eps, *delta, *nu};
}

Params Config::params_for(int64_t n_val) const {
    Params p;
    p.gamma = gamma;
    p.lambda = lambda;
    p.beta = beta;
    p.sigma = sigma;
    p.dim = dim;
    p.xi = xi_for(n_val);
    p.validate();
    return p;
}

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw ConfigError("config key '" + key + "': " + what);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
        if (pos != value.size()) fail(key, "trailing characters in '" + value + "'");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(key, "expected a number, got '" + value + "'");
    }
}

int64_t parse_int(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
        if (pos != value.size()) fail(key, "trailing characters in '" + value + "'");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(key, "expected an integer, got '" + value + "'");
    }
}

uint64_t parse_uint(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
        if (pos != value.size()) fail(key, "trailing characters in '" + value + "'");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(key, "expected an unsigned integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    fail(key, "expected true/false, got '" + value + "'");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

Config parse_config(const std::string& text) {
    Config cfg;
    bool saw_alpha = false, saw_use_schedule = false;
    bool explicit_use_schedule = true;

    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value', got '" +
                              line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (value.empty()) fail(key, "empty value");

        if (key == "dim") {
            cfg.dim = static_cast<int>(parse_int(key, value));
            if (cfg.dim < 3) fail(key, "constraint d >= 3 violated");
        } else if (key == "n") {
            cfg.n = parse_int(key, value);
            if (cfg.n < 1) fail(key, "constraint n >= 1 violated");
        } else if (key == "m_multiplier") {
            cfg.m_multiplier = static_cast<int>(parse_int(key, value));
            if (cfg.m_multiplier < 1) fail(key, "constraint m_multiplier >= 1 violated");
        } else if (key == "m_max") {
            cfg.m_max = parse_int(key, value);
            if (cfg.m_max < 2) fail(key, "constraint m_max >= 2 violated");
        } else if (key == "t_final") {
            cfg.t_final = parse_double(key, value);
            if (!(cfg.t_final > 0)) fail(key, "constraint t_final > 0 violated");
        } else if (key == "dt") {
            cfg.dt = parse_double(key, value);
            if (!(cfg.dt > 0)) fail(key, "constraint dt > 0 violated");
        } else if (key == "gamma") {
            cfg.gamma = parse_double(key, value);
            if (!(cfg.gamma >= 0)) fail(key, "constraint gamma >= 0 violated");
        } else if (key == "lambda") {
            cfg.lambda = parse_double(key, value);
            if (!(cfg.lambda >= 0)) fail(key, "constraint lambda >= 0 violated");
        } else if (key == "beta") {
            cfg.beta = parse_double(key, value);
            if (!(cfg.beta >= 0)) fail(key, "constraint beta >= 0 violated");
        } else if (key == "sigma") {
            cfg.sigma = parse_double(key, value);
            if (!(cfg.sigma >= 0)) fail(key, "constraint sigma >= 0 violated");
        } else if (key == "alpha") {
            cfg.alpha = parse_double(key, value);
            saw_alpha = true;
            if (!(cfg.alpha > 0 && cfg.alpha <= 1)) fail(key, "constraint 0 < alpha <= 1 violated");
        } else if (key == "use_schedule") {
            explicit_use_schedule = parse_bool(key, value);
            saw_use_schedule = true;
        } else if (key == "eps") {
            cfg.eps = parse_double(key, value);
            if (!(*cfg.eps > 0)) fail(key, "constraint eps > 0 violated");
        } else if (key == "delta") {
            cfg.delta = parse_double(key, value);
            if (!(*cfg.delta > 0)) fail(key, "constraint delta > 0 violated");
        } else if (key == "nu") {
            cfg.nu = parse_double(key, value);
            if (!(*cfg.nu > 0)) fail(key, "constraint nu > 0 violated");
        } else if (key == "eps_cap") {
            cfg.eps_cap = parse_double(key, value);
            if (!(cfg.eps_cap > 0)) fail(key, "constraint eps_cap > 0 violated");
        } else if (key == "delta_cap") {
            cfg.delta_cap = parse_double(key, value);
            if (!(cfg.delta_cap > 0)) fail(key, "constraint delta_cap > 0 violated");
        } else if (key == "seed") {
            cfg.seed = parse_uint(key, value);
        } else if (key == "reps") {
            cfg.reps = static_cast<int>(parse_int(key, value));
            if (cfg.reps < 1) fail(key, "constraint reps >= 1 violated");
        } else if (key == "picard_max_iters") {
            cfg.picard_max_iters = static_cast<int>(parse_int(key, value));
            if (cfg.picard_max_iters < 1) fail(key, "constraint picard_max_iters >= 1 violated");
        } else if (key == "picard_tol") {
            cfg.picard_tol = parse_double(key, value);
            if (!(cfg.picard_tol > 0)) fail(key, "constraint picard_tol > 0 violated");
        } else if (key == "entropy_k") {
            cfg.entropy_k = static_cast<int>(parse_int(key, value));
            if (cfg.entropy_k < 1) fail(key, "constraint entropy_k >= 1 violated");
        } else if (key == "initial") {
            try {
                cfg.initial = parse_initial(value);
            } catch (const std::exception& e) {
                fail(key, e.what());
            }
        } else if (key == "out_dir") {
            cfg.out_dir = value;
        } else if (key == "n_list") {
            cfg.n_list.clear();
            std::istringstream ls(value);
            std::string tok;
            while (std::getline(ls, tok, ',')) {
                tok = trim(tok);
                if (tok.empty()) continue;
                const int64_t v = parse_int(key, tok);
                if (v < 2) fail(key, "every N must be >= 2");
                cfg.n_list.push_back(v);
            }
            if (cfg.n_list.empty()) fail(key, "empty list");
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }

    const bool any_explicit = cfg.eps || cfg.delta || cfg.nu;
    if (any_explicit) {
        if (saw_alpha)
            throw ConfigError(
                "config keys 'alpha' and 'eps/delta/nu' are mutually exclusive: set either the "
                "schedule or an explicit xi");
        if (saw_use_schedule && explicit_use_schedule)
            throw ConfigError(
                "config key 'use_schedule': true conflicts with explicit eps/delta/nu");
        if (!(cfg.eps && cfg.delta && cfg.nu))
            throw ConfigError("explicit xi needs all three of eps, delta, nu");
        cfg.use_schedule = false;
    } else {
        if (saw_use_schedule && !explicit_use_schedule)
            throw ConfigError("config key 'use_schedule': false requires explicit eps, delta, nu");
        cfg.use_schedule = true;
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace flocksim
