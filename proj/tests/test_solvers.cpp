#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "selfspin/densities.hpp"
#include "selfspin/mass_solver.hpp"
#include "selfspin/proton.hpp"

#include <cmath>

using namespace selfspin;

namespace {
const double kAlpha = 1.0 / 137.0;
const PhysicalConstants kConstants{};

double rel_diff(double a, double b) { return std::fabs(a - b) / std::fabs(b); }
}  // namespace

TEST_CASE("closed-form solve, printed constant: mass window and root") {
    const auto r = solve_eq29(kAlpha, -0.51, kConstants);
    CHECK(r.mode == MassSolveMode::paper_closed_form);
    CHECK(r.m_nu_eV > 1.75);
    CHECK(r.m_nu_eV < 1.78);
    // Frozen extended-precision root of the same condition.
    CHECK(rel_diff(r.eta_root, 9.46852642953139e-4) < 1e-10);
    CHECK(r.beta == kAlpha * r.eta_root / 2.0);
    CHECK(std::fabs(r.residual_at_root) < 1e-9);
    CHECK(r.all_roots.size() == 1);  // default bracket isolates the physical root

    // Bit-identical on repetition.
    const auto r2 = solve_eq29(kAlpha, -0.51, kConstants);
    CHECK(r.eta_root == r2.eta_root);
    CHECK(r.m_nu_eV == r2.m_nu_eV);
}

TEST_CASE("closed-form solve with the exact constant shifts the root by under 2%") {
    const auto paper = solve_eq29(kAlpha, -0.51, kConstants);
    const auto exact = solve_eq29(kAlpha, -kEulerGamma, kConstants);
    CHECK(rel_diff(exact.eta_root, 9.54088004194157e-4) < 1e-10);
    CHECK(rel_diff(exact.m_nu_eV, paper.m_nu_eV) < 0.02);
}

TEST_CASE("closed-form solve, vanishing quadratic term: analytic logarithm root") {
    // With alpha = 0 the condition is -ln(eta) - 2.01 = 0; the root sits
    // outside the default bracket, exercising the widening step.
    const auto r = solve_eq29(0.0, -0.51, kConstants);
    CHECK(rel_diff(r.eta_root, std::exp(-2.01)) < 1e-10);
    CHECK(r.bracket_lo == 1e-8);
    CHECK(r.bracket_hi == 1.0);
}

TEST_CASE("widened bracket reports both roots, smallest returned") {
    const auto r = solve_eq29(kAlpha, -0.51, kConstants, 1e-8, 1.0);
    CHECK(r.all_roots.size() == 2);
    CHECK(r.eta_root == r.all_roots.front());
    CHECK(rel_diff(r.all_roots[0], 9.46852642953139e-4) < 1e-9);
    CHECK(rel_diff(r.all_roots[1], 0.133955525647) < 1e-9);
}

TEST_CASE("exact quadrature condition: root near the closed-form root") {
    const auto first = SeriesSolution::iterate_first_family(Rational(1), 3);
    const auto second = SeriesSolution::iterate_second_family(Rational(1), 3);

    const auto closed = solve_eq29(kAlpha, -0.51, kConstants);
    const auto exact_k1 = solve_exact_condition(first, second, kAlpha, 1, kConstants);
    CHECK(exact_k1.mode == MassSolveMode::exact_quadrature);
    CHECK(rel_diff(exact_k1.eta_root, closed.eta_root) < 0.10);
    CHECK(std::fabs(exact_k1.residual_at_root) < 1e-8);

    // Higher orders barely move the root.
    const auto exact_k3 = solve_exact_condition(first, second, kAlpha, 3, kConstants);
    CHECK(rel_diff(exact_k3.eta_root, exact_k1.eta_root) < 0.01);

    // Normalizations divide out: scaled families give the identical root.
    const auto scaled_first = SeriesSolution::iterate_first_family(Rational(7, 3), 3);
    const auto scaled_second = SeriesSolution::iterate_second_family(Rational(-2, 5), 3);
    const auto exact_scaled = solve_exact_condition(scaled_first, scaled_second, kAlpha, 1,
                                                    kConstants);
    CHECK(exact_scaled.eta_root == exact_k1.eta_root);

    CHECK_THROWS_AS(solve_exact_condition(SeriesSolution::iterate_first_family(Rational(0), 1),
                                          second, kAlpha, 1, kConstants),
                    std::invalid_argument);
}

TEST_CASE("monotone shrink of the root with alpha") {
    const auto first = SeriesSolution::iterate_first_family(Rational(1), 2);
    const auto second = SeriesSolution::iterate_second_family(Rational(1), 2);
    double prev_eta = 1.0, prev_beta = 1.0;
    for (double alpha : {1.0 / 137.0, 3e-3, 1e-3, 1e-4}) {
        const auto r = solve_exact_condition(first, second, alpha, 2, kConstants, 1e-7, 1e-1);
        CHECK(r.eta_root < prev_eta);
        CHECK(r.beta < prev_beta);
        prev_eta = r.eta_root;
        prev_beta = r.beta;
    }
}

TEST_CASE("scaling the condition by a constant leaves the located roots unchanged") {
    const auto first = SeriesSolution::iterate_first_family(Rational(1), 1);
    const auto second = SeriesSolution::iterate_second_family(Rational(1), 1);
    const auto xi = product_density(first, second, 1);

    const auto phi = [&](double eta) { return exact_condition_value(xi, kAlpha, eta); };
    const auto phi_scaled = [&](double eta) { return (7.0 / 3.0) * phi(eta); };
    const auto roots = detail::bracketed_roots(phi, 1e-6, 1e-1, 64, 1e-12);
    const auto roots_scaled = detail::bracketed_roots(phi_scaled, 1e-6, 1e-1, 64, 1e-12);
    REQUIRE(roots.size() == 1);
    REQUIRE(roots_scaled.size() == 1);
    CHECK(roots[0] == roots_scaled[0]);
}

TEST_CASE("condition audit: dominance, partition, leading behavior") {
    const int K = 1;
    const auto xi = product_density(SeriesSolution::iterate_first_family(Rational(1), K),
                                    SeriesSolution::iterate_second_family(Rational(1), K), K);
    const double eta = 1e-3;
    const auto audit = condition_audit(xi, kAlpha, eta);

    // The whole table partitions Phi(eta).
    const double phi = exact_condition_value(xi, kAlpha, eta);
    CHECK(std::fabs(audit.total - phi) < 1e-10 * std::max(1.0, std::fabs(phi)));

    // Within the order-1 coefficient the inverse-cube monomial dominates.
    double cube = 0.0;
    for (const auto& row : audit.rows)
        if (row.order == 1 && row.exponent == -3) cube = row.contribution;
    const double order1 = audit.order_total(1);
    CHECK(std::fabs(cube) / std::fabs(order1) > 0.9);

    // Order-0 contribution approaches -(1/2)(-ln eta - gamma - 3/2).
    const double limit = -0.5 * (-std::log(eta) - kEulerGamma - 1.5);
    CHECK(std::fabs(audit.order_total(0) - limit) < 0.02);

    // And equals its own quadrature partition tightly.
    const double direct = -0.5 * (exp_integral_e1(eta) -
                                  2.0 * weighted_integral(eta, LogLaurentPoly::constant(1)) +
                                  weighted_integral(eta, LogLaurentPoly::power(1)));
    CHECK(std::fabs(audit.order_total(0) - direct) < 1e-9);
}

TEST_CASE("source factor: electron limit, screening suppression, dressed root") {
    ProtonSpec spec;
    spec.alpha = kAlpha;

    // n = 0: alpha (1 - 1/s), root exactly at the unit radius.
    CHECK(effective_source(1.0, spec) == 0.0);
    CHECK(effective_source(2.0, spec) == doctest::Approx(kAlpha / 2.0).epsilon(1e-14));
    auto roots = effective_source_roots(spec);
    REQUIRE(roots.size() == 1);
    CHECK(rel_diff(roots[0], 1.0) < 1e-10);

    // Heavy meson: the Yukawa term dies away from the origin.
    spec.n = 1.0 / 11.0;
    spec.mu_pi = 200.0;
    roots = effective_source_roots(spec);
    REQUIRE_FALSE(roots.empty());
    CHECK(rel_diff(roots.back(), 1.0) < 1e-10);

    // Physical meson scale: the dressed outer radius is reported.
    spec.mu_pi = kAlpha * kConstants.m_pi0_eV / kConstants.m_p_eV;
    roots = effective_source_roots(spec);
    REQUIRE_FALSE(roots.empty());
    const double s0 = roots.back();
    CHECK(s0 > 1.0);
    CHECK(std::fabs(effective_source(s0, spec)) < 1e-12);
    MESSAGE("dressed source root s0 = ", s0);

    CHECK_THROWS_AS(effective_source(0.0, spec), std::invalid_argument);
    ProtonSpec bad = spec;
    bad.mu_pi = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("n = 0 integration reproduces the series families") {
    const int K = 3;
    const auto first = SeriesSolution::iterate_first_family(Rational(1), K);
    const auto second = SeriesSolution::iterate_second_family(Rational(1), K);

    ProtonSpec spec;
    spec.alpha = kAlpha;
    spec.lambda_spin = 4.77e-4;  // only enters the quadrature channels
    GridControl grid;
    grid.s_min = 0.1;
    const auto sol = integrate_proton_system(spec, grid);
    CHECK(sol.s0 == doctest::Approx(1.0).epsilon(1e-10));

    double max_f = 0.0, max_g = 0.0, max_ff = 0.0, max_gg = 0.0;
    for (const auto& p : sol.trajectory) {
        max_f = std::max(max_f, std::fabs(first.eval_upper(p.s, kAlpha)));
        max_g = std::max(max_g, std::fabs(first.eval_lower(p.s, kAlpha)));
        max_ff = std::max(max_ff, std::fabs(second.eval_upper(p.s, kAlpha)));
        max_gg = std::max(max_gg, std::fabs(second.eval_lower(p.s, kAlpha)));
    }
    double worst = 0.0;
    for (const auto& p : sol.trajectory) {
        worst = std::max(worst, std::fabs(p.F - first.eval_upper(p.s, kAlpha)) / max_f);
        worst = std::max(worst, std::fabs(p.G - first.eval_lower(p.s, kAlpha)) / max_g);
        worst = std::max(worst, std::fabs(p.f - second.eval_upper(p.s, kAlpha)) / max_ff);
        worst = std::max(worst, std::fabs(p.g - second.eval_lower(p.s, kAlpha)) / max_gg);
    }
    CHECK(worst < 10.0 * std::pow(kAlpha, 4.0));
}

TEST_CASE("fixed-grid refinement shows fourth-order convergence") {
    ProtonSpec spec;
    spec.alpha = kAlpha;
    spec.lambda_spin = 0.87;
    spec.n = 1.0 / 11.0;
    spec.mu_pi = kAlpha * kConstants.m_pi0_eV / kConstants.m_p_eV;
    const double s0 = effective_source_roots(spec).back();
    const double ratio = richardson_ratio(spec, std::max(0.4, 0.05 * s0));
    CHECK(ratio > 16.0 * 0.8);
    CHECK(ratio < 16.0 * 1.2);
}

TEST_CASE("linearity: scaling a normalization scales the family exactly") {
    ProtonSpec spec;
    spec.alpha = kAlpha;
    spec.lambda_spin = 0.5;
    GridControl grid;
    grid.s_min = 0.3;
    grid.fixed_steps = 400;

    const auto base = integrate_proton_system(spec, grid);
    ProtonSpec doubled = spec;
    doubled.a0 = Rational(2);
    const auto scaled = integrate_proton_system(doubled, grid);
    for (std::size_t i = 0; i < base.trajectory.size(); ++i) {
        CHECK(scaled.trajectory[i].F == 2.0 * base.trajectory[i].F);
        CHECK(scaled.trajectory[i].G == 2.0 * base.trajectory[i].G);
        CHECK(scaled.trajectory[i].f == base.trajectory[i].f);
    }
}

TEST_CASE("n = 0 condition root in the spin coupling matches the mass solver") {
    ProtonSpec spec;
    spec.alpha = kAlpha;
    const auto exact = solve_exact_condition(SeriesSolution::iterate_first_family(Rational(1), 3),
                                             SeriesSolution::iterate_second_family(Rational(1), 3),
                                             kAlpha, 3, kConstants);
    const auto lambda_root = solve_lambda_condition(spec, 1e-5, 1e-2);
    REQUIRE(lambda_root.has_value());
    CHECK(rel_diff(2.0 * *lambda_root, exact.eta_root) < 1e-5);
}

TEST_CASE("exact condition at the closed-form root has the sign of the dropped terms") {
    // The closed form keeps only the dominant inverse-cube monomial and the
    // printed constant; the exact root sits above it, so Phi is still
    // positive at the closed-form root.
    const auto first = SeriesSolution::iterate_first_family(Rational(1), 1);
    const auto second = SeriesSolution::iterate_second_family(Rational(1), 1);
    const auto xi = product_density(first, second, 1);
    const auto closed = solve_eq29(kAlpha, -0.51, kConstants);
    const auto exact = solve_exact_condition(first, second, kAlpha, 1, kConstants);
    CHECK(exact.eta_root > closed.eta_root);
    const auto audit = condition_audit(xi, kAlpha, closed.eta_root);
    CHECK(audit.total > 0.0);
    CHECK(audit.total ==
          doctest::Approx(exact_condition_value(xi, kAlpha, closed.eta_root)).epsilon(1e-9));
}

TEST_CASE("n = 0 self-energy reduces to the inertia integral (up to the alpha weight)") {
    const double eta = 9.54e-4;
    ProtonSpec spec;
    spec.alpha = kAlpha;
    spec.lambda_spin = eta / 2.0;
    GridControl grid;
    const auto sol = integrate_proton_system(spec, grid);

    const auto first = SeriesSolution::iterate_first_family(Rational(1), 3);
    const auto second = SeriesSolution::iterate_second_family(Rational(1), 3);
    const auto inertia = electromagnetic_inertia(first, second, kAlpha, eta);
    CHECK(rel_diff(proton_self_energy(spec, sol) / kAlpha, inertia.total) < 1e-6);
}

TEST_CASE("zero normalizations give a vanishing condition and self-energy") {
    ProtonSpec spec;
    spec.alpha = kAlpha;
    spec.lambda_spin = 0.5;
    spec.a0 = Rational(0);
    GridControl grid;
    grid.s_min = 0.2;
    const auto sol = integrate_proton_system(spec, grid);
    CHECK(proton_condition(spec, sol) == 0.0);
    CHECK(proton_self_energy(spec, sol) == 0.0);
}

TEST_CASE("coupling scan: electron row, continuity, reported calibration state") {
    PhysicalConstants c;
    ProtonSpec spec;
    spec.alpha = kAlpha;
    spec.mu_pi = kAlpha * c.m_pi0_eV / c.m_p_eV;
    const double eta_e = 9.54088e-4;  // exact-condition root
    spec.lambda_spin = (eta_e / 2.0) * (c.m_p_eV / c.m_e_eV);

    // Reference: the n = 0 condition root of the same integrator.
    ProtonSpec reference = spec;
    reference.n = 0.0;
    const auto lambda0 = solve_lambda_condition(reference, 1e-5, 10.0);
    REQUIRE(lambda0.has_value());

    std::vector<double> ns{0.0};
    for (int i = 0; i <= 8; ++i) ns.push_back(1.0 / 14.0 + (1.0 / 7.0 - 1.0 / 14.0) * i / 8.0);
    const auto report = calibrate_n(spec, c.m_e_eV / c.m_p_eV, 2.0 * *lambda0, ns);
    REQUIRE(report.rows.size() == ns.size());

    // n = 0 reproduces the electron: unit radius and unit implied ratio.
    CHECK(report.rows[0].ok);
    CHECK(report.rows[0].s0 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(report.rows[0].implied_mass_ratio == doctest::Approx(1.0).epsilon(1e-12));

    // Continuity across the scan: no difference exceeds ten times its
    // neighbors (guards against integration instability).
    for (std::size_t i = 2; i + 1 < report.rows.size(); ++i) {
        const double prev = std::fabs(report.rows[i].condition_value -
                                      report.rows[i - 1].condition_value);
        const double next = std::fabs(report.rows[i + 1].condition_value -
                                      report.rows[i].condition_value);
        CHECK(next <= 10.0 * prev + 1e-12);
    }

    // Whether the condition changes sign on the range is reported, not
    // asserted; on this model it does not.
    MESSAGE("n_calibrated: ",
            report.n_calibrated ? std::to_string(*report.n_calibrated) : "none");
    CHECK(report.richardson_ratio > 12.8);
    CHECK(report.richardson_ratio < 19.2);
}

TEST_CASE("flipped Coulomb branch: no source root without the meson term") {
    ProtonSpec spec;
    spec.alpha = kAlpha;
    spec.coulomb_sign = -1;
    CHECK(effective_source_roots(spec).empty());
    GridControl grid;
    CHECK_THROWS_AS(integrate_proton_system(spec, grid), IntegrationError);
}
