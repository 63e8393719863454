#pragma once

// Flat key = value configuration: physical constants plus run parameters.
// Precedence: built-in defaults < config file < explicit overrides.  The
// default config path can be supplied through SELFSPIN_CONFIG.

#include "selfspin/potentials.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace selfspin {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    PhysicalConstants constants;

    int series_order = 3;
    double quad_abs_tol = 1e-12;
    double quad_rel_tol = 1e-10;
    double bracket_lo = 1e-6;
    double bracket_hi = 1e-1;
    double c0_paper = -0.51;
    std::string c0_mode = "paper";  // "paper" or "exact"

    int grid_log_points = 300;
    int grid_linear_points = 100;
    double grid_s_min = 1e-4;
    double grid_s_max = 3.0;

    double proton_n_min = 1.0 / 14.0;
    double proton_n_max = 1.0 / 7.0;
    int proton_n_steps = 25;
    double proton_s_max = 100.0;

    std::string output_dir = "out";
    std::string golden_dir = "tests/golden";

    double c0_value() const { return c0_mode == "exact" ? -kEulerGammaConfig : c0_paper; }

    void validate() const {
        try {
            constants.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (series_order < 1) throw ConfigError("series_order must be >= 1");
        if (!(quad_abs_tol > 0.0) || !(quad_rel_tol > 0.0))
            throw ConfigError("quadrature tolerances must be positive");
        if (!(bracket_lo > 0.0) || !(bracket_hi > bracket_lo))
            throw ConfigError("bracket must satisfy 0 < lo < hi");
        if (c0_mode != "paper" && c0_mode != "exact")
            throw ConfigError("c0_mode must be 'paper' or 'exact'");
        if (grid_log_points < 2 || grid_linear_points < 2)
            throw ConfigError("grid needs at least two points per stretch");
        if (!(grid_s_min > 0.0) || !(grid_s_max > 1.0))
            throw ConfigError("grid range must satisfy 0 < s_min and s_max > 1");
        if (!(proton_n_min >= 0.0) || !(proton_n_max > proton_n_min) || proton_n_steps < 1)
            throw ConfigError("proton scan range must satisfy 0 <= n_min < n_max, steps >= 1");
        if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
    }

private:
    static constexpr double kEulerGammaConfig = 0.57721566490153286;
};

inline std::map<std::string, std::string> parse_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto trim = [](std::string s) {
            const auto is_space = [](unsigned char c) { return std::isspace(c); };
            while (!s.empty() && is_space(s.front())) s.erase(s.begin());
            while (!s.empty() && is_space(s.back())) s.pop_back();
            return s;
        };
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key or value");
        out[key] = value;
    }
    return out;
}

inline void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value) {
    const auto as_double = [&](const char* name) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            throw ConfigError(std::string("bad numeric value for ") + name + ": '" + value + "'");
        }
        if (used != value.size())
            throw ConfigError(std::string("bad numeric value for ") + name + ": '" + value + "'");
        return v;
    };
    const auto as_int = [&](const char* name) {
        const double v = as_double(name);
        if (v != static_cast<int>(v))
            throw ConfigError(std::string("expected integer for ") + name);
        return static_cast<int>(v);
    };

    if (key == "m_e_eV") cfg.constants.m_e_eV = as_double("m_e_eV");
    else if (key == "m_p_eV") cfg.constants.m_p_eV = as_double("m_p_eV");
    else if (key == "m_pi0_eV") cfg.constants.m_pi0_eV = as_double("m_pi0_eV");
    else if (key == "alpha") cfg.constants.alpha = as_double("alpha");
    else if (key == "series_order") cfg.series_order = as_int("series_order");
    else if (key == "quad_abs_tol") cfg.quad_abs_tol = as_double("quad_abs_tol");
    else if (key == "quad_rel_tol") cfg.quad_rel_tol = as_double("quad_rel_tol");
    else if (key == "bracket_lo") cfg.bracket_lo = as_double("bracket_lo");
    else if (key == "bracket_hi") cfg.bracket_hi = as_double("bracket_hi");
    else if (key == "c0_paper") cfg.c0_paper = as_double("c0_paper");
    else if (key == "c0_mode") cfg.c0_mode = value;
    else if (key == "grid_log_points") cfg.grid_log_points = as_int("grid_log_points");
    else if (key == "grid_linear_points") cfg.grid_linear_points = as_int("grid_linear_points");
    else if (key == "grid_s_min") cfg.grid_s_min = as_double("grid_s_min");
    else if (key == "grid_s_max") cfg.grid_s_max = as_double("grid_s_max");
    else if (key == "proton_n_min") cfg.proton_n_min = as_double("proton_n_min");
    else if (key == "proton_n_max") cfg.proton_n_max = as_double("proton_n_max");
    else if (key == "proton_n_steps") cfg.proton_n_steps = as_int("proton_n_steps");
    else if (key == "proton_s_max") cfg.proton_s_max = as_double("proton_s_max");
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "golden_dir") cfg.golden_dir = value;
    else throw ConfigError("unknown config key '" + key + "'");
}

/// Defaults, then the config file (explicit path, else SELFSPIN_CONFIG when
/// set), then nothing else; flag overrides are applied by the caller.
inline RunConfig load_config(const std::string& explicit_path = "") {
    RunConfig cfg;
    std::string path = explicit_path;
    if (path.empty()) {
        if (const char* env = std::getenv("SELFSPIN_CONFIG")) path = env;
    }
    if (!path.empty())
        for (const auto& [key, value] : parse_key_value_file(path)) apply_key_value(cfg, key, value);
    return cfg;
}

}  // namespace selfspin
