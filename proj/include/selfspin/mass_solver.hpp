#pragma once

// Solvers for the mass-ratio condition: the vanishing of the weighted
// volume integral of the lower-function product g G / s.  Two routes:
//
//   closed form  -ln(eta) + c0 - 2 + 1/2 = (alpha^2/12) eta^-2,
//     the printed approximation keeping only the dominant inverse-cube
//     term of the first-order product coefficient;
//
//   exact quadrature  Phi(eta) = sum_k alpha^{2k} int_0^1 W xi_k ds = 0,
//     using the exact product-density coefficients and the adaptive
//     weighted quadrature (the common factor alpha * a0 * b0 is divided
//     out, so normalizations cannot shift the root).
//
// Roots are located by a logarithmic pre-scan and bisection, which makes
// the result deterministic bit for bit.

#include "selfspin/potentials.hpp"
#include "selfspin/quadrature.hpp"
#include "selfspin/series.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace selfspin {

enum class MassSolveMode { paper_closed_form, exact_quadrature };

struct MassSolveResult {
    MassSolveMode mode = MassSolveMode::paper_closed_form;
    double eta_root = 0.0;
    double beta = 0.0;           // = alpha * eta / 2
    double m_nu_eV = 0.0;        // = beta * m_e
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double residual_at_root = 0.0;
    std::vector<double> all_roots;  // every sign change seen in the pre-scan
};

namespace detail {

// Log-spaced pre-scan for sign changes, then bisection on each bracket to
// relative width `rel_width`.  Returns all roots in ascending order.
inline std::vector<double> bracketed_roots(const std::function<double(double)>& f, double lo,
                                           double hi, int prescan_points, double rel_width) {
    std::vector<double> roots;
    double left = lo, f_left = f(left);
    for (int i = 1; i <= prescan_points; ++i) {
        const double right = lo * std::pow(hi / lo, double(i) / prescan_points);
        const double f_right = f(right);
        if (f_left == 0.0) {
            roots.push_back(left);
        } else if (f_left * f_right < 0.0) {
            double a = left, b = right, fa = f_left;
            for (int it = 0; it < 200 && (b - a) > rel_width * b; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = f(mid);
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

inline MassSolveResult finish(MassSolveMode mode, const std::function<double(double)>& f,
                              std::vector<double> roots, double lo, double hi, double alpha,
                              const PhysicalConstants& constants) {
    MassSolveResult r;
    r.mode = mode;
    r.all_roots = std::move(roots);
    r.eta_root = r.all_roots.front();  // smallest root is the physical one
    r.beta = alpha * r.eta_root / 2.0;
    r.m_nu_eV = r.beta * constants.m_e_eV;
    r.bracket_lo = lo;
    r.bracket_hi = hi;
    r.residual_at_root = f(r.eta_root);
    return r;
}

}  // namespace detail

/// Residual of the closed-form condition
///   h(eta) = -ln(eta) + c0 - 3/2 - (alpha^2 / 12) eta^-2.
inline double closed_form_residual(double eta, double alpha, double c0) {
    return -std::log(eta) + c0 - 1.5 - alpha * alpha / 12.0 / (eta * eta);
}

/// Root of the closed-form condition.  The default bracket (1e-6, 1e-1)
/// isolates the physical small root; if no sign change is found there the
/// solver widens once to (1e-8, 1) before giving up.  With multiple sign
/// changes the smallest root is returned and all are reported.
inline MassSolveResult solve_eq29(double alpha, double c0, const PhysicalConstants& constants,
                                  double bracket_lo = 1e-6, double bracket_hi = 1e-1,
                                  int prescan_points = 64) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("solve_eq29: alpha must be nonnegative");
    constants.validate();
    const auto h = [alpha, c0](double eta) { return closed_form_residual(eta, alpha, c0); };

    auto roots = detail::bracketed_roots(h, bracket_lo, bracket_hi, prescan_points, 1e-12);
    double lo = bracket_lo, hi = bracket_hi;
    if (roots.empty()) {
        lo = 1e-8;
        hi = 1.0;
        roots = detail::bracketed_roots(h, lo, hi, prescan_points, 1e-12);
    }
    if (roots.empty())
        throw BracketError("solve_eq29: no sign change of the closed-form condition on (1e-8, 1)");
    return detail::finish(MassSolveMode::paper_closed_form, h, std::move(roots), lo, hi, alpha,
                          constants);
}

/// Phi(eta) for the exact condition: per-order weighted integrals of the
/// product density, normalized per unit alpha * a0 * b0.
inline double exact_condition_value(const ProductDensity& xi, double alpha, double eta,
                                    double abs_tol = 1e-12, double rel_tol = 1e-10) {
    double sum = 0.0, a2k = 1.0;
    for (int k = 0; k <= xi.max_order(); ++k) {
        if (!xi.order(k).is_zero())
            sum += a2k * weighted_integral(eta, xi.order(k), abs_tol, rel_tol);
        a2k *= alpha * alpha;
    }
    return sum;
}

inline MassSolveResult solve_exact_condition(const SeriesSolution& first,
                                             const SeriesSolution& second, double alpha,
                                             int max_order, const PhysicalConstants& constants,
                                             double bracket_lo = 1e-6, double bracket_hi = 1e-1,
                                             int prescan_points = 64) {
    constants.validate();
    if (first.normalization() == 0 || second.normalization() == 0)
        throw std::invalid_argument("solve_exact_condition: zero normalization");

    // Divide out a0 b0 by rebuilding at unit normalization.
    const auto unit_first = SeriesSolution::iterate_first_family(Rational(1), max_order);
    const auto unit_second = SeriesSolution::iterate_second_family(Rational(1), max_order);
    const auto xi = product_density(unit_first, unit_second, max_order);

    const auto phi = [&xi, alpha](double eta) { return exact_condition_value(xi, alpha, eta); };
    auto roots = detail::bracketed_roots(phi, bracket_lo, bracket_hi, prescan_points, 1e-12);
    if (roots.empty())
        throw BracketError("solve_exact_condition: no sign change of Phi on the bracket");
    return detail::finish(MassSolveMode::exact_quadrature, phi, std::move(roots), bracket_lo,
                          bracket_hi, alpha, constants);
}

// Per-term contribution table of Phi(eta): one row per monomial of each
// product-density order, confirming which term dominates at small eta.
struct AuditRow {
    int order = 0;        // k
    long long exponent = 0;
    int log_power = 0;
    double coefficient = 0.0;   // rational coefficient, as double
    double integral = 0.0;      // weighted integral of the bare monomial
    double contribution = 0.0;  // alpha^{2k} * coefficient * integral
};

struct ConditionAudit {
    double eta = 0.0;
    std::vector<AuditRow> rows;
    double total = 0.0;

    double order_total(int k) const {
        double sum = 0.0;
        for (const auto& r : rows)
            if (r.order == k) sum += r.contribution;
        return sum;
    }
};

inline ConditionAudit condition_audit(const ProductDensity& xi, double alpha, double eta,
                                      double abs_tol = 1e-13, double rel_tol = 1e-11) {
    ConditionAudit audit;
    audit.eta = eta;
    double a2k = 1.0;
    for (int k = 0; k <= xi.max_order(); ++k) {
        for (const auto& [key, c] : xi.order(k).terms()) {
            AuditRow row;
            row.order = k;
            row.exponent = key.exponent;
            row.log_power = key.log_power;
            row.coefficient = to_double(c);
            row.integral = weighted_integral(
                eta, LogLaurentPoly::term(Rational(1), key.exponent, key.log_power), abs_tol,
                rel_tol);
            row.contribution = a2k * row.coefficient * row.integral;
            audit.total += row.contribution;
            audit.rows.push_back(row);
        }
        a2k *= alpha * alpha;
    }
    return audit;
}

}  // namespace selfspin
