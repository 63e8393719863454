// Command-line front end: electron series pipeline, mass-condition solvers,
// meson-dressed coupling scan, and the acceptance suite.

#include "selfspin/acceptance.hpp"
#include "selfspin/cli.hpp"
#include "selfspin/config.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <map>
#include <string>

namespace {

const std::vector<std::string> kConfigKeys = {
    "m_e_eV",          "m_p_eV",           "m_pi0_eV",        "alpha",
    "series_order",    "quad_abs_tol",     "quad_rel_tol",    "bracket_lo",
    "bracket_hi",      "c0_paper",         "c0_mode",         "grid_log_points",
    "grid_linear_points", "grid_s_min",    "grid_s_max",      "proton_n_min",
    "proton_n_max",    "proton_n_steps",   "proton_s_max",    "output_dir",
    "golden_dir"};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"self-action spin-1/2 radial solver"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path,
                   "key = value config file (default: $SELFSPIN_CONFIG when set)");

    std::map<std::string, std::string> overrides;
    for (const auto& key : kConfigKeys)
        app.add_option_function<std::string>(
            "--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; },
            "override config key " + key);

    auto* electron = app.add_subcommand("electron", "series forms, figure data, join report");
    auto* mass = app.add_subcommand("neutrino-mass", "mass condition, both routes, audit table");
    auto* proton = app.add_subcommand("proton-scan", "Yukawa coupling scan, both branches");
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    bool list_only = false;
    verify->add_flag("--list", list_only, "list criteria without running them");
    for (auto* sub : {electron, mass, proton, verify}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : selfspin::cli::kExitConfigError;
    }

    return selfspin::cli::dispatch([&]() -> int {
        selfspin::RunConfig cfg = selfspin::load_config(config_path);
        for (const auto& [key, value] : overrides) selfspin::apply_key_value(cfg, key, value);
        cfg.validate();

        if (electron->parsed()) return selfspin::cli::run_electron(cfg);
        if (mass->parsed()) return selfspin::cli::run_neutrino_mass(cfg);
        if (proton->parsed()) return selfspin::cli::run_proton_scan(cfg);
        if (verify->parsed()) {
            if (list_only) {
                for (const auto& [id, name] : selfspin::acceptance::criteria_list())
                    std::cout << (id < 10 ? "0" : "") << id << " " << name << "\n";
                return selfspin::cli::kExitOk;
            }
            selfspin::acceptance::Options opt;
            opt.config = cfg;
            opt.golden_dir = cfg.golden_dir;
            opt.work_dir = (std::filesystem::path(cfg.output_dir) / "verify_work").string();
            selfspin::cli::ensure_output_dir(cfg);
            const auto results = selfspin::acceptance::run_all(opt);
            return selfspin::acceptance::print_and_code(results, std::cout);
        }
        return selfspin::cli::kExitConfigError;
    });
}
