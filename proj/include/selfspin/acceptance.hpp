#pragma once

// The acceptance suite: every shipped claim of the library as a runnable
// criterion with its tolerance pinned in code.  The same runner backs the
// dedicated acceptance binary and the `verify` subcommand; each criterion
// prints one pass/fail line.

#include "selfspin/cli.hpp"
#include "selfspin/densities.hpp"
#include "selfspin/mass_solver.hpp"
#include "selfspin/neutrino.hpp"
#include "selfspin/potentials.hpp"
#include "selfspin/proton.hpp"
#include "selfspin/quadrature.hpp"
#include "selfspin/series.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace selfspin::acceptance {

namespace fs = std::filesystem;

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    std::string golden_dir = "tests/golden";
    std::string work_dir = "acceptance_work";
    RunConfig config;  // constants and tolerances shared with the CLI
};

namespace detail {

struct Check {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "FAILED[" << what << "] ";
        }
    }
    template <typename T>
    void note(const std::string& label, const T& value) {
        detail << label << "=" << value << " ";
    }
};

inline LogLaurentPoly read_golden(const Options& opt, const std::string& name) {
    const fs::path path = fs::path(opt.golden_dir) / name;
    return LogLaurentPoly::parse(read_text_file(path));
}

inline std::optional<Rational> rational_ratio(const LogLaurentPoly& a, const LogLaurentPoly& b) {
    if (a.is_zero() || b.is_zero() || a.term_count() != b.term_count()) return std::nullopt;
    std::optional<Rational> ratio;
    for (const auto& [key, cb] : b.terms()) {
        const Rational ca = a.coefficient(key.exponent, key.log_power);
        if (ca == 0) return std::nullopt;
        const Rational r = ca / cb;
        if (!ratio)
            ratio = r;
        else if (*ratio != r)
            return std::nullopt;
    }
    return ratio;
}

}  // namespace detail

// 1. First-family series forms are exact.
inline CriterionResult criterion_series_first(const Options& opt) {
    detail::Check c;
    const auto sol = SeriesSolution::iterate_first_family(Rational(1), 1);
    c.require(sol.order(0).odd == detail::read_golden(opt, "F0.txt"), "F0 exact equality");
    c.require(sol.order(1).even == detail::read_golden(opt, "G1.txt"), "G1 exact equality");
    c.note("F0", sol.order(0).odd.str());
    return {1, "first-family forms F0, G1 exactly reproduce the printed brackets", c.pass,
            c.detail.str()};
}

// 2. Second-family leading form is exact.
inline CriterionResult criterion_series_second(const Options& opt) {
    detail::Check c;
    const auto sol = SeriesSolution::iterate_second_family(Rational(1), 1);
    c.require(sol.order(0).odd == detail::read_golden(opt, "g0.txt"), "g0 exact equality");
    c.note("g0", sol.order(0).odd.str());
    return {2, "second-family form g0 exactly reproduces the printed bracket", c.pass,
            c.detail.str()};
}

// 3. Product density matches the printed bracket up to one rational factor.
inline CriterionResult criterion_product_factor(const Options& opt) {
    detail::Check c;
    const auto xi = product_density(SeriesSolution::iterate_first_family(Rational(1), 1),
                                    SeriesSolution::iterate_second_family(Rational(1), 1), 1);
    c.require(xi.order(0) == detail::read_golden(opt, "xi0.txt"), "xi0 regression");
    c.require(xi.order(1) == detail::read_golden(opt, "xi1.txt"), "xi1 regression");

    const auto bracket = LogLaurentPoly::parse(
        "1/1*s^-3 + -4/1*s^-2 + 40/1 + -5/1*s^1 + 60/1*s^1*L^1 + -36/1*s^2 + 4/1*s^3");
    const auto printed_xi1 = Rational(-1, 12) * bracket;
    const auto factor = detail::rational_ratio(xi.order(1), printed_xi1);
    c.require(factor.has_value(), "xi1 proportional to the printed value");
    if (factor) {
        c.note("overall_factor_vs_printed", rational_str(*factor));
        c.require(*factor == Rational(-1, 2), "factor equals -1/2");
        c.require(xi.order(1) == *factor * printed_xi1, "exact equality after normalization");
    }
    const auto factor0 = detail::rational_ratio(
        xi.order(0), LogLaurentPoly::parse("1/1*s^-1 + -2/1 + 1/1*s^1"));
    c.require(factor0.has_value() && *factor0 == Rational(-1, 2), "xi0 carries the same factor");
    return {3, "product density matches the printed bracket up to the reported -1/2", c.pass,
            c.detail.str()};
}

// 4. Closed-form mass solve lands in the printed window.
inline CriterionResult criterion_mass_window(const Options& opt) {
    detail::Check c;
    const auto r = solve_eq29(opt.config.constants.alpha, -0.51, opt.config.constants);
    c.note("eta_root", r.eta_root);
    c.note("m_nu_eV", r.m_nu_eV);
    c.require(r.m_nu_eV >= 1.75 && r.m_nu_eV <= 1.78, "m_nu within [1.75, 1.78] eV");
    return {4, "closed-form route with c0 = -0.51 gives m_nu in [1.75, 1.78] eV", c.pass,
            c.detail.str()};
}

// 5. Numeric weighted integral against the independent E1 oracle; empirical
//    integration constant converges to -gamma.
inline CriterionResult criterion_e1_oracle(const Options&) {
    detail::Check c;
    for (double eta : {1e-3, 1e-2, 0.1, 1.0}) {
        const double numeric = weighted_integral(eta, LogLaurentPoly::power(-1));
        const double oracle = exp_integral_e1(eta);
        c.require(std::fabs(numeric - oracle) / oracle < 1e-10,
                  "weighted integral vs E1 at eta=" + format_value(eta));
    }
    const double e1_numeric = weighted_integral(1.0, LogLaurentPoly::power(-1));
    double gap = 1e9;
    for (int order : {4, 8, 16, 30}) {
        const double next = std::fabs(c0_empirical(1.0, order, e1_numeric) + kEulerGamma);
        c.require(next <= gap + 1e-15, "monotone convergence of c0_empirical");
        gap = next;
    }
    c.require(gap < 1e-6, "c0_empirical within 1e-6 of -gamma");
    c.note("c0_empirical", c0_empirical(1.0, 30, e1_numeric));
    c.note("printed_c0_deviation", std::fabs(-kEulerGamma - (-0.51)));
    return {5, "weighted quadrature matches E1 to 1e-10; c0 converges to -gamma (printed -0.51 "
               "deviates by 0.067)",
            c.pass, c.detail.str()};
}

// 6. Closed-form weighted integral of the inverse cube.
inline CriterionResult criterion_inverse_cube(const Options&) {
    detail::Check c;
    for (double eta : {1e-3, 0.1, 1.0}) {
        const double numeric = weighted_integral(eta, LogLaurentPoly::power(-3));
        const double closed = std::exp(-eta) * (1.0 + eta) / (eta * eta);
        c.require(std::fabs(numeric - closed) / closed < 1e-10,
                  "closed form at eta=" + format_value(eta));
    }
    return {6, "weighted integral of s^-3 equals e^-eta (1+eta)/eta^2 to 1e-10", c.pass,
            c.detail.str()};
}

// 7. Zero crossing of the lower function.
inline CriterionResult criterion_zero_crossing(const Options& opt) {
    detail::Check c;
    const double alpha = opt.config.constants.alpha;
    const auto sol = SeriesSolution::iterate_first_family(Rational(1), 3);
    const double got = zero_crossing_G(sol, alpha);
    const double expected = alpha / std::sqrt(12.0);
    c.note("s_cross", got);
    c.note("alpha/sqrt(12)", expected);
    c.require(std::fabs(got - expected) / expected < 0.1, "within 10% of alpha/sqrt(12)");
    return {7, "lower-function zero crossing sits within 10% of alpha/sqrt(12)", c.pass,
            c.detail.str()};
}

// 8. Escape probability bound and quadrature cross-check.
inline CriterionResult criterion_escape(const Options& opt) {
    detail::Check c;
    const auto mass = solve_eq29(opt.config.constants.alpha, -0.51, opt.config.constants);
    const double p = escape_probability(mass.beta);
    c.note("beta", mass.beta);
    c.note("escape_probability", p);
    c.require(p < 1e-10, "probability below 1e-10 at the solved mass ratio");
    for (double beta : {0.1, 1.0}) {
        const double closed = escape_probability(beta);
        const double numeric = escape_probability_numeric(beta);
        c.require(std::fabs(closed - numeric) / closed < 1e-9,
                  "closed vs numeric at beta=" + format_value(beta));
    }
    return {8, "escape probability < 1e-10 at the solved mass; closed form matches quadrature",
            c.pass, c.detail.str()};
}

// 9. Interior products vanish at the join radius.
inline CriterionResult criterion_join(const Options& opt) {
    detail::Check c;
    const double alpha = opt.config.constants.alpha;
    const int K = 3;
    const auto mass = solve_eq29(alpha, -0.51, opt.config.constants);
    const auto first = SeriesSolution::iterate_first_family(Rational(1), K);
    const auto second = SeriesSolution::iterate_second_family(Rational(1), K);
    const auto grid = figure_grid();
    const auto products = sample_product_profiles(first, second, alpha, mass.eta_root, grid);

    const double tol = 10.0 * std::pow(alpha, 2.0 * K + 2.0);
    for (const auto& profile : products) {
        double max_abs = 0.0, at_join = 0.0;
        for (std::size_t i = 0; i < profile.s.size(); ++i) {
            max_abs = std::max(max_abs, std::fabs(profile.value[i]));
            if (profile.s[i] == 1.0) at_join = std::fabs(profile.value[i]);
        }
        c.note(profile.name + "_join_over_max", at_join / max_abs);
        c.require(at_join <= tol * max_abs, profile.name + " vanishes at s=1");
    }
    c.note("tolerance", tol);
    return {9, "products Ff and Gg vanish at s = 1 within 10 alpha^(2K+2) of their maxima",
            c.pass, c.detail.str()};
}

// 10. Bilinear density structure, exact at coefficient level.
inline CriterionResult criterion_density_structure(const Options&) {
    detail::Check c;
    const auto a1 = Bispinor::reduced(BispinorStructure::first);
    const auto b1 = Bispinor::reduced(BispinorStructure::first);
    const auto a2 = Bispinor::reduced(BispinorStructure::second);
    const auto b2 = Bispinor::reduced(BispinorStructure::second);

    const auto tc = bilinear(a1, b1, GammaSet::gamma_t());
    c.require(tc.size() == 3, "three time-component terms");
    if (tc.size() == 3) {
        c.require(tc[0].coeff == Rational(1, 3) && tc[0].harmonic_a == Harmonic::Y10,
                  "1/3 |Y10|^2 coefficient");
        c.require(tc[1].coeff == Rational(2, 3) && tc[1].harmonic_a == Harmonic::Y11,
                  "2/3 |Y11|^2 coefficient");
        c.require(tc[2].coeff == Rational(1) && tc[2].harmonic_a == Harmonic::Y00,
                  "unit Y00^2 coefficient");
    }

    const auto sum_for = [](const std::vector<DensityTerm>& terms, RadialRole role) {
        Rational sum(0);
        for (const auto& t : terms)
            if (t.radial_a == role && t.radial_b == role) sum += t.coeff;
        return sum;
    };
    const auto reduced = volume_reduce(tc);
    c.require(sum_for(reduced, RadialRole::upper) == Rational(1) &&
                  sum_for(reduced, RadialRole::lower) == Rational(1),
              "volume reduction gives Ff + Gg");

    const auto sz1 = volume_reduce(bilinear(a1, b1, GammaSet::gamma_xy()));
    const auto sz2 = volume_reduce(bilinear(a2, b2, GammaSet::gamma_xy()));
    const auto mz1 = volume_reduce(bilinear(a1, b1, GammaSet::gamma_xy5()));
    const auto mz2 = volume_reduce(bilinear(a2, b2, GammaSet::gamma_xy5()));
    for (auto role : {RadialRole::upper, RadialRole::lower}) {
        c.require(sum_for(sz1, role) == sum_for(sz2, role), "Sz identical between structures");
        c.require(sum_for(mz1, role) == -sum_for(mz2, role), "Mz opposite between structures");
    }
    return {10, "time-component keeps the exact 1/3, 2/3, 1 pattern; Sz equal and Mz opposite",
            c.pass, c.detail.str()};
}

// 11. Dimension scan of the inverse-distance Laplacian.
inline CriterionResult criterion_laplacian(const Options&) {
    detail::Check c;
    const auto scan = laplacian_dimension_scan({2, 3, 4}, 1e-3, {1.0, 1.0, 1.0});
    for (const auto& sample : scan) {
        c.note("residual_N" + std::to_string(sample.dimension), sample.residual);
        c.require(std::fabs(sample.residual - sample.analytic) < 1e-4,
                  "matches (3-N)|x|^-3 at N=" + std::to_string(sample.dimension));
    }
    c.require(std::fabs(scan[1].residual) < 1e-5, "vanishes at N=3");
    c.require(scan[0].residual * scan[2].residual < 0.0, "sign change across N=3");
    c.require(std::fabs(scan[1].residual) < std::fabs(scan[0].residual) &&
                  std::fabs(scan[1].residual) < std::fabs(scan[2].residual),
              "minimal magnitude at N=3");
    return {11, "inverse-distance Laplacian matches (3-N)|x|^-3, vanishing only at N = 3",
            c.pass, c.detail.str()};
}

// 12. Exploratory meson-dressed solver: electron limit, convergence order,
//     emitted scan with any sign change reported.
inline CriterionResult criterion_proton(const Options& opt) {
    detail::Check c;
    const double alpha = opt.config.constants.alpha;

    // Electron limit against the series engine.
    {
        const auto first = SeriesSolution::iterate_first_family(Rational(1), 3);
        const auto second = SeriesSolution::iterate_second_family(Rational(1), 3);
        ProtonSpec spec;
        spec.alpha = alpha;
        spec.lambda_spin = 4.77e-4;
        GridControl grid;
        grid.s_min = 0.1;
        const auto sol = integrate_proton_system(spec, grid);
        double max_norm = 0.0, worst = 0.0;
        for (const auto& p : sol.trajectory) {
            max_norm = std::max({max_norm, std::fabs(first.eval_upper(p.s, alpha)),
                                 std::fabs(first.eval_lower(p.s, alpha)),
                                 std::fabs(second.eval_upper(p.s, alpha)),
                                 std::fabs(second.eval_lower(p.s, alpha))});
            worst = std::max({worst, std::fabs(p.F - first.eval_upper(p.s, alpha)),
                              std::fabs(p.G - first.eval_lower(p.s, alpha)),
                              std::fabs(p.f - second.eval_upper(p.s, alpha)),
                              std::fabs(p.g - second.eval_lower(p.s, alpha))});
        }
        c.note("electron_limit_rel_error", worst / max_norm);
        c.require(worst <= 10.0 * std::pow(alpha, 4.0) * max_norm,
                  "n = 0 integration within 10 alpha^4 of the series");
    }

    // Scan emission through the real command path.
    RunConfig cfg = opt.config;
    cfg.output_dir = (fs::path(opt.work_dir) / "proton").string();
    const int rc = cli::run_proton_scan(cfg);
    c.require(rc == cli::kExitOk, "scan command succeeded");
    const fs::path scan_csv = fs::path(cfg.output_dir) / "proton_scan.csv";
    c.require(fs::exists(scan_csv), "scan table emitted");

    // Parse the emitted table: convergence ratio from the report, sign
    // change reported (not asserted).
    const auto report_text = read_text_file(fs::path(cfg.output_dir) / "proton_report.json");
    const auto report = nlohmann::json::parse(report_text);
    const double ratio = report["electron_like"]["richardson_ratio"].get<double>();
    c.note("richardson_ratio", ratio);
    c.require(ratio > 16.0 * 0.8 && ratio < 16.0 * 1.2,
              "refinement ratio within 20% of fourth order");
    if (report["electron_like"]["n_calibrated"].is_null())
        c.detail << "condition sign change on the scan range: none (reported) ";
    else
        c.detail << "condition sign change at n="
                 << report["electron_like"]["n_calibrated"].get<double>() << " (reported) ";
    return {12, "meson-dressed solver: electron limit, fourth-order convergence, scan emitted",
            c.pass, c.detail.str()};
}

// 13. Determinism of the emission pipelines.
inline CriterionResult criterion_determinism(const Options& opt) {
    detail::Check c;
    RunConfig cfg = opt.config;
    cfg.proton_n_steps = 3;  // small scan; the machinery is identical

    const fs::path base = fs::path(opt.work_dir) / "determinism";
    std::vector<std::string> files;
    for (const char* round : {"a", "b"}) {
        cfg.output_dir = (base / round).string();
        c.require(cli::run_electron(cfg) == cli::kExitOk, "electron pipeline");
        c.require(cli::run_neutrino_mass(cfg) == cli::kExitOk, "mass pipeline");
        c.require(cli::run_proton_scan(cfg) == cli::kExitOk, "scan pipeline");
    }
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(base / "a")) {
        const auto name = entry.path().filename();
        const auto twin = base / "b" / name;
        c.require(fs::exists(twin), "twin exists for " + name.string());
        if (fs::exists(twin)) {
            c.require(read_text_file(entry.path()) == read_text_file(twin),
                      "byte-identical " + name.string());
            ++compared;
        }
    }
    c.note("files_compared", compared);
    c.require(compared >= 9, "all pipeline outputs present");
    return {13, "repeated runs produce byte-identical outputs", c.pass, c.detail.str()};
}

inline std::vector<std::pair<int, std::string>> criteria_list() {
    return {{1, "first-family series forms exact"},
            {2, "second-family series form exact"},
            {3, "product-density bracket and overall factor"},
            {4, "closed-form mass window [1.75, 1.78] eV"},
            {5, "weighted quadrature vs E1 oracle; c0 -> -gamma"},
            {6, "inverse-cube weighted integral closed form"},
            {7, "lower-function zero crossing near alpha/sqrt(12)"},
            {8, "escape probability bound and quadrature cross-check"},
            {9, "products vanish smoothly at the join radius"},
            {10, "bilinear density structure, exact coefficients"},
            {11, "inverse-distance Laplacian dimension scan"},
            {12, "meson-dressed solver: limits, convergence, scan"},
            {13, "deterministic byte-identical outputs"}};
}

inline std::vector<CriterionResult> run_all(const Options& opt) {
    using Criterion = std::function<CriterionResult(const Options&)>;
    const std::vector<std::pair<Criterion, double>> criteria = {
        {criterion_series_first, 1.0},   {criterion_series_second, 1.0},
        {criterion_product_factor, 0.0}, {criterion_mass_window, 1.0},
        {criterion_e1_oracle, 0.0},      {criterion_inverse_cube, 0.0},
        {criterion_zero_crossing, 0.0},  {criterion_escape, 0.0},
        {criterion_join, 0.0},           {criterion_density_structure, 0.0},
        {criterion_laplacian, 0.0},      {criterion_proton, 60.0},
        {criterion_determinism, 0.0}};

    std::vector<CriterionResult> results;
    for (const auto& [criterion, budget] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = criterion(opt);
        } catch (const std::exception& e) {
            r.id = int(results.size()) + 1;
            r.name = criteria_list()[results.size()].second;
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (budget > 0.0 && r.seconds >= budget) {
            r.pass = false;
            r.detail += " runtime budget " + format_value(budget) + " s exceeded";
        }
        results.push_back(r);
    }
    return results;
}

inline int print_and_code(const std::vector<CriterionResult>& results, std::ostream& os) {
    bool all_pass = true;
    for (const auto& r : results) {
        os << (r.pass ? "[PASS] " : "[FAIL] ") << (r.id < 10 ? "0" : "") << r.id << " " << r.name
           << " (" << format_value(r.seconds, 3) << " s)";
        if (!r.detail.empty()) os << " | " << r.detail;
        os << "\n";
        all_pass = all_pass && r.pass;
    }
    os << (all_pass ? "acceptance: all criteria passed\n" : "acceptance: FAILURES present\n");
    return all_pass ? cli::kExitOk : cli::kExitAcceptanceFailure;
}

}  // namespace selfspin::acceptance
