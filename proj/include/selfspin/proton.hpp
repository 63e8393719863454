#pragma once

// Exploratory solver for the meson-dressed radial system.  The electron
// system's source factor alpha (1 - 1/s) acquires a Yukawa term:
//
//   Q(s) = alpha (1 - sign/s) - n exp(-mu_pi s) / s
//
// (sign = +1 reproduces the electron limit at n = 0; the opposite branch is
// exposed because the construction leaves the relative Coulomb sign open).
// After the damping substitution that removes the spin terms, the system
//
//   F' = -2 F / s + Q(s) G,     G' = -Q(s) F
//
// is integrated inward from the outermost root s0 of Q with the regular
// boundary data of the electron case: (F, G)(s0) = (0, a0) for the first
// family and (f, g)(s0) = (b0 / s0^2, 0) for the second.  The physical
// functions carry exp(-lambda_spin / s); products therefore carry
// exp(-2 lambda_spin / s), which is accumulated alongside the state to give
// the condition and self-energy integrals with the same error control.
//
// This module is exploratory: the model reduction above is declared here,
// not taken from a worked reference, and every scan output is reported
// rather than asserted.

#include "selfspin/series.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace selfspin {

struct ProtonSpec {
    double alpha = 1.0 / 137.0;
    double lambda_spin = 0.0;  // spin coupling in the scaled radial variable
    double n = 0.0;            // Yukawa coupling
    double mu_pi = 0.0;        // meson mass in the scaled radial variable
    double s_max = 100.0;      // outer bound of the source-root search
    int coulomb_sign = +1;     // +1 electron-like, -1 flipped branch
    Rational a0{1};
    Rational b0{1};

    void validate() const {
        if (!(alpha > 0.0)) throw std::invalid_argument("ProtonSpec: alpha must be positive");
        if (n < 0.0) throw std::invalid_argument("ProtonSpec: n must be nonnegative");
        if (n > 0.0 && !(mu_pi > 0.0))
            throw std::invalid_argument("ProtonSpec: mu_pi must be positive when n > 0");
        if (!(lambda_spin >= 0.0)) throw std::invalid_argument("ProtonSpec: negative spin coupling");
        if (coulomb_sign != 1 && coulomb_sign != -1)
            throw std::invalid_argument("ProtonSpec: coulomb_sign must be +1 or -1");
    }
};

/// Source factor multiplying the partner function in the radial system.
inline double effective_source(double s, const ProtonSpec& spec) {
    if (!(s > 0.0)) throw std::invalid_argument("effective_source: s must be positive");
    return spec.alpha * (1.0 - spec.coulomb_sign / s) - spec.n * std::exp(-spec.mu_pi * s) / s;
}

/// All roots of the source factor on (1e-4, s_max), ascending.  The
/// outermost root is the integration start radius s0.
inline std::vector<double> effective_source_roots(const ProtonSpec& spec, int scan_points = 4000) {
    spec.validate();
    std::vector<double> roots;
    const double lo = 1e-4;
    double left = lo, f_left = effective_source(left, spec);
    for (int i = 1; i <= scan_points; ++i) {
        const double right = lo * std::pow(spec.s_max / lo, double(i) / scan_points);
        const double f_right = effective_source(right, spec);
        if (f_left == 0.0) {
            roots.push_back(left);
        } else if (f_left * f_right < 0.0) {
            double a = left, b = right, fa = f_left;
            for (int it = 0; it < 200 && (b - a) > 1e-14 * b; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = effective_source(mid, spec);
                if (fa * fm <= 0.0)
                    b = mid;
                else {
                    a = mid;
                    fa = fm;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        left = right;
        f_left = f_right;
    }
    return roots;
}

struct GridControl {
    double s_min = 0.0;    // 0 = stop where the squared damping is ~1e-30
    int fixed_steps = 0;   // 0 = adaptive step doubling
    double rel_tol = 1e-11;
    double abs_tol = 1e-14;
};

struct TrajectoryPoint {
    double s = 0.0;
    double F = 0.0, G = 0.0;  // first family
    double f = 0.0, g = 0.0;  // second family
};

struct ProtonSolution {
    std::vector<TrajectoryPoint> trajectory;  // descending s, s0 first
    double s0 = 0.0;
    double s_min = 0.0;
    double condition_integral = 0.0;  // int Gg (alpha/s + n zeta) s^2, damped
    double energy_integral = 0.0;     // same with Ff + Gg (no 4 pi)
    long steps = 0;
};

struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

using ProtonState = std::array<double, 6>;  // F, G, f, g, Qcond, Qenergy

inline ProtonState proton_rhs(double s, const ProtonState& y, const ProtonSpec& spec) {
    const double q = effective_source(s, spec);
    const double damp2 = std::exp(-2.0 * spec.lambda_spin / s);
    const double zeta_weight = s * (spec.alpha + spec.n * std::exp(-spec.mu_pi * s));
    const double gg = y[1] * y[3];
    const double ff = y[0] * y[2];
    return {-2.0 * y[0] / s + q * y[1],
            -q * y[0],
            -2.0 * y[2] / s + q * y[3],
            -q * y[2],
            -damp2 * gg * zeta_weight,   // inward integration flips the sign back
            -damp2 * (ff + gg) * zeta_weight};
}

inline ProtonState rk4_step(double s, const ProtonState& y, double h, const ProtonSpec& spec) {
    const auto add = [](const ProtonState& a, const ProtonState& b, double c) {
        ProtonState r;
        for (int i = 0; i < 6; ++i) r[i] = a[i] + c * b[i];
        return r;
    };
    const ProtonState k1 = proton_rhs(s, y, spec);
    const ProtonState k2 = proton_rhs(s + h / 2, add(y, k1, h / 2), spec);
    const ProtonState k3 = proton_rhs(s + h / 2, add(y, k2, h / 2), spec);
    const ProtonState k4 = proton_rhs(s + h, add(y, k3, h), spec);
    ProtonState out;
    for (int i = 0; i < 6; ++i)
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

}  // namespace detail

/// Inward integration of both families from s0 with embedded quadrature of
/// the damped condition and energy integrands.  Adaptive runs use classic
/// step doubling on the fourth-order step (local error ~ h^5, global order
/// 4); fixed_steps > 0 selects a uniform grid for convergence studies.
inline ProtonSolution integrate_proton_system(const ProtonSpec& spec, const GridControl& grid) {
    spec.validate();
    const auto roots = effective_source_roots(spec);
    if (roots.empty())
        throw IntegrationError("integrate_proton_system: source factor has no root up to s_max");
    const double s0 = roots.back();

    double s_min = grid.s_min;
    if (s_min <= 0.0) {
        s_min = spec.lambda_spin > 0.0 ? 2.0 * spec.lambda_spin / 69.0 : s0 * 1e-4;
        s_min = std::clamp(s_min, 1e-8, s0 / 4.0);
    }
    if (!(s_min < s0))
        throw std::invalid_argument("integrate_proton_system: s_min must lie below s0");

    ProtonSolution sol;
    sol.s0 = s0;
    sol.s_min = s_min;

    detail::ProtonState y{0.0, to_double(spec.a0), to_double(spec.b0) / (s0 * s0), 0.0, 0.0, 0.0};
    double s = s0;
    sol.trajectory.push_back({s, y[0], y[1], y[2], y[3]});

    if (grid.fixed_steps > 0) {
        const double h = (s_min - s0) / grid.fixed_steps;
        for (int i = 0; i < grid.fixed_steps; ++i) {
            y = detail::rk4_step(s, y, h, spec);
            s = (i + 1 == grid.fixed_steps) ? s_min : s0 + (i + 1) * h;
            sol.trajectory.push_back({s, y[0], y[1], y[2], y[3]});
        }
        sol.steps = grid.fixed_steps;
    } else {
        double h = -(s0 - s_min) / 256.0;
        long steps = 0;
        while (s > s_min) {
            if (s + h < s_min) h = s_min - s;
            // Keep the step small against the 1/s scale of the system.
            if (-h > 0.2 * s) h = -0.2 * s;
            const auto big = detail::rk4_step(s, y, h, spec);
            const auto half = detail::rk4_step(s, y, h / 2, spec);
            const auto small = detail::rk4_step(s + h / 2, half, h / 2, spec);
            double worst = 0.0;
            for (int i = 0; i < 6; ++i) {
                const double scale = grid.abs_tol + grid.rel_tol * std::max(std::fabs(y[i]),
                                                                            std::fabs(small[i]));
                worst = std::max(worst, std::fabs(big[i] - small[i]) / 15.0 / scale);
            }
            if (worst <= 1.0) {
                for (int i = 0; i < 6; ++i) y[i] = small[i] + (small[i] - big[i]) / 15.0;
                s += h;
                sol.trajectory.push_back({s, y[0], y[1], y[2], y[3]});
                if (++steps > 2000000)
                    throw IntegrationError("integrate_proton_system: step budget exhausted");
            }
            const double shrink = std::clamp(0.9 * std::pow(std::max(worst, 1e-10), -0.2), 0.2, 5.0);
            h *= shrink;
            if (std::fabs(h) < 1e-13 * std::max(1.0, std::fabs(s)))
                throw IntegrationError("integrate_proton_system: step collapsed near the singular point");
        }
        sol.steps = steps;
    }

    sol.condition_integral = y[4];
    sol.energy_integral = y[5];
    return sol;
}

/// Condition integral int_{s_min}^{s0} G g (alpha/s + n zeta) s^2 ds of an
/// integrated solution (damping included).
inline double proton_condition(const ProtonSpec& spec, const ProtonSolution& sol) {
    (void)spec;
    return sol.condition_integral;
}

/// Self-energy 4 pi int (alpha/s + n zeta)(F f + G g) s^2 ds per unit a0 b0.
inline double proton_self_energy(const ProtonSpec& spec, const ProtonSolution& sol) {
    (void)spec;
    return 4.0 * 3.14159265358979323846 * sol.energy_integral;
}

/// Root of the condition integral in the spin coupling at fixed n, found by
/// log pre-scan plus bisection; nullopt when no sign change exists.
inline std::optional<double> solve_lambda_condition(ProtonSpec spec, double lambda_lo,
                                                    double lambda_hi, int prescan = 48,
                                                    const GridControl& grid = {}) {
    const auto condition = [&](double lambda) {
        spec.lambda_spin = lambda;
        return integrate_proton_system(spec, grid).condition_integral;
    };
    double left = lambda_lo, f_left = condition(left);
    for (int i = 1; i <= prescan; ++i) {
        const double right = lambda_lo * std::pow(lambda_hi / lambda_lo, double(i) / prescan);
        const double f_right = condition(right);
        if (f_left * f_right < 0.0) {
            double a = left, b = right, fa = f_left;
            for (int it = 0; it < 100 && (b - a) > 1e-12 * b; ++it) {
                const double mid = std::sqrt(a * b);
                const double fm = condition(mid);
                if (fa * fm <= 0.0)
                    b = mid;
                else {
                    a = mid;
                    fa = fm;
                }
            }
            return 0.5 * (a + b);
        }
        left = right;
        f_left = f_right;
    }
    return std::nullopt;
}

struct ProtonScanRow {
    double n = 0.0;
    double s0 = 0.0;
    double condition_value = 0.0;
    double self_energy = 0.0;
    double implied_mass_ratio = 0.0;  // m_e/M from the lambda root; NaN if none
    bool ok = false;
    std::string error;
};

struct ProtonSolveReport {
    std::vector<ProtonScanRow> rows;
    std::optional<double> n_calibrated;    // sign change of the condition in n
    std::optional<double> s0_at_calibrated;
    double richardson_ratio = 0.0;         // endpoint-state ratio, ~2^4 for RK4
    double target_mass_ratio = 0.0;
};

/// Endpoint-state Richardson ratio |y_h - y_{h/2}| / |y_{h/2} - y_{h/4}| on
/// a fixed grid; fourth order gives ~16.
inline double richardson_ratio(const ProtonSpec& spec, double s_stop, int base_steps = 500) {
    std::array<detail::ProtonState, 3> ends;
    for (int r = 0; r < 3; ++r) {
        GridControl grid;
        grid.s_min = s_stop;
        grid.fixed_steps = base_steps << r;
        const auto sol = integrate_proton_system(spec, grid);
        const auto& p = sol.trajectory.back();
        ends[r] = {p.F, p.G, p.f, p.g, sol.condition_integral, sol.energy_integral};
    }
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 6; ++i) {
        num += (ends[0][i] - ends[1][i]) * (ends[0][i] - ends[1][i]);
        den += (ends[1][i] - ends[2][i]) * (ends[1][i] - ends[2][i]);
    }
    if (den == 0.0) throw IntegrationError("richardson_ratio: refinement differences vanished");
    return std::sqrt(num / den);
}

/// Scan the Yukawa coupling: per-n condition value, self-energy and implied
/// mass ratio; locate any sign change of the condition near the physical
/// spin coupling.  Failures are recorded per row, not thrown.
inline ProtonSolveReport calibrate_n(const ProtonSpec& spec_template, double target_mass_ratio,
                                     double eta_electron, const std::vector<double>& n_values,
                                     const GridControl& grid = {}) {
    ProtonSolveReport report;
    report.target_mass_ratio = target_mass_ratio;

    for (double n : n_values) {
        ProtonScanRow row;
        row.n = n;
        try {
            ProtonSpec spec = spec_template;
            spec.n = n;
            const auto roots = effective_source_roots(spec);
            if (roots.empty()) throw IntegrationError("no source root");
            row.s0 = roots.back();
            const auto sol = integrate_proton_system(spec, grid);
            row.condition_value = proton_condition(spec, sol);
            row.self_energy = proton_self_energy(spec, sol);
            const auto lambda_root = solve_lambda_condition(spec, 1e-5, 10.0, 48, grid);
            row.implied_mass_ratio = lambda_root ? (eta_electron / 2.0) / *lambda_root
                                                 : std::numeric_limits<double>::quiet_NaN();
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        report.rows.push_back(row);
    }

    // Sign change of the condition value across the scan, refined by bisection.
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        const auto& a = report.rows[i - 1];
        const auto& b = report.rows[i];
        if (!a.ok || !b.ok) continue;
        if (a.condition_value * b.condition_value < 0.0) {
            double lo = a.n, hi = b.n;
            double f_lo = a.condition_value;
            for (int it = 0; it < 60 && (hi - lo) > 1e-10 * std::max(1.0, hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                ProtonSpec spec = spec_template;
                spec.n = mid;
                const double fm = integrate_proton_system(spec, grid).condition_integral;
                if (f_lo * fm <= 0.0)
                    hi = mid;
                else {
                    lo = mid;
                    f_lo = fm;
                }
            }
            report.n_calibrated = 0.5 * (lo + hi);
            ProtonSpec spec = spec_template;
            spec.n = *report.n_calibrated;
            report.s0_at_calibrated = effective_source_roots(spec).back();
            break;
        }
    }

    try {
        ProtonSpec probe = spec_template;
        if (!n_values.empty()) probe.n = n_values[n_values.size() / 2];
        const auto roots = effective_source_roots(probe);
        if (roots.empty()) throw IntegrationError("no source root for the refinement probe");
        report.richardson_ratio = richardson_ratio(probe, std::max(0.4, 0.05 * roots.back()));
    } catch (const std::exception&) {
        report.richardson_ratio = std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

}  // namespace selfspin
