#pragma once

// Weighted integrals  int_0^1 exp(-eta/s) * f(s) ds  for log-Laurent f.
// The substitution u = 1/s maps the essential singularity at s = 0 to an
// exponentially damped tail on [1, inf), which is then integrated by
// adaptive Gauss-Kronrod panels.  E1 is provided independently (series /
// continued fraction) so the numeric path has an exact cross-check.

#include "selfspin/loglaurent.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace selfspin {

inline constexpr double kEulerGamma = 0.57721566490153286;

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WeightedIntegralSpec {
    double eta = 0.0;           // weight parameter, > 0
    LogLaurentPoly integrand;   // integrated against exp(-eta/s) over (0, 1]
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1].
inline constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
    double value = 0.0;
    double error = 0.0;
};

template <typename F>
PanelResult gauss_kronrod(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double gauss = 0.0, kronrod = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double offset = half * kKronrodNodes[i];
        const double y = (i == 7) ? f(mid) : f(mid - offset) + f(mid + offset);
        kronrod += kKronrodWeights[i] * y;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * y;  // odd indices are the embedded Gauss nodes
    }
    kronrod *= half;
    gauss *= half;
    const double diff = std::fabs(kronrod - gauss);
    return {kronrod, std::min(diff, std::pow(200.0 * diff, 1.5))};
}

// Deterministic adaptive refinement: repeatedly split the worst panel.
template <typename F>
double adaptive_on_interval(const F& f, double a, double b, double abs_tol, double rel_tol) {
    struct Panel {
        double a, b;
        PanelResult r;
    };
    std::vector<Panel> panels;
    panels.push_back({a, b, gauss_kronrod(f, a, b)});
    for (int iter = 0; iter < 4000; ++iter) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].r.value;
            err += panels[i].r.error;
            if (panels[i].r.error > panels[worst].r.error) worst = i;
        }
        if (err <= std::max(abs_tol, rel_tol * std::fabs(total))) break;
        const Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        if (mid <= p.a || mid >= p.b)
            throw QuadratureError("adaptive quadrature: interval collapsed before tolerance met");
        panels[worst] = {p.a, mid, gauss_kronrod(f, p.a, mid)};
        panels.push_back({mid, p.b, gauss_kronrod(f, mid, p.b)});
    }
    // Sum in interval order for run-to-run determinism.
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    double total = 0.0;
    for (const auto& p : panels) total += p.r.value;
    return total;
}

}  // namespace detail

/// int_0^1 exp(-eta/s) f(s) ds with f a LogLaurentPoly.  Integrates the
/// u-substituted image  int_1^inf exp(-eta u) f(1/u) u^-2 du  over doubling
/// panels until the exponential (or power) tail is below tolerance.
inline double weighted_integral(const WeightedIntegralSpec& spec) {
    if (!(spec.eta > 0.0)) throw std::invalid_argument("weighted_integral: eta must be positive");
    if (spec.integrand.is_zero()) return 0.0;

    // f(1/u) u^-2 expressed in the same ring: s^j (ln s)^p -> (-1)^p u^{-j-2} (ln u)^p.
    LogLaurentPoly image;
    for (const auto& [key, c] : spec.integrand.terms()) {
        const Rational sign = (key.log_power % 2 == 0) ? Rational(1) : Rational(-1);
        image = image + LogLaurentPoly::term(sign * c, -key.exponent - 2, key.log_power);
    }
    const double eta = spec.eta;
    const auto f = [&image, eta](double u) { return std::exp(-eta * u) * image.eval(u); };

    double total = 0.0;
    double lo = 1.0;
    int quiet_octaves = 0;
    for (int octave = 0; octave < 96; ++octave) {
        const double hi = lo * 2.0;
        const double piece =
            detail::adaptive_on_interval(f, lo, hi, spec.abs_tol * 0.25, spec.rel_tol * 0.25);
        total += piece;
        lo = hi;
        if (std::fabs(piece) <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(total)) * 0.5)
            ++quiet_octaves;
        else
            quiet_octaves = 0;
        if (quiet_octaves >= 2 && eta * lo > 40.0) return total;
        if (quiet_octaves >= 3) return total;
    }
    throw QuadratureError("weighted_integral: tail did not converge within 96 octaves");
}

inline double weighted_integral(double eta, const LogLaurentPoly& integrand,
                                double abs_tol = 1e-12, double rel_tol = 1e-10) {
    return weighted_integral({eta, integrand, abs_tol, rel_tol});
}

/// Exponential integral E1(x) = int_x^inf e^-t / t dt, >= 12 significant
/// digits.  Convergent series for x <= 1, modified-Lentz continued fraction
/// for x > 1.  Equals  int_0^1 exp(-x/s) s^-1 ds  exactly.
inline double exp_integral_e1(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("exp_integral_e1: argument must be positive");
    if (x <= 1.0) {
        double term = 1.0, sum = 0.0;
        for (int k = 1; k <= 60; ++k) {
            term *= -x / k;
            const double add = -term / k;  // (-1)^{k+1} x^k / (k * k!)
            sum += add;
            if (std::fabs(add) < 1e-18 * std::max(1.0, std::fabs(sum))) break;
        }
        return -kEulerGamma - std::log(x) + sum;
    }
    // E1(x) = e^-x * 1/(x+1- 1/(x+3- 4/(x+5- 9/(...)))), Lentz evaluation.
    const double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k <= 200; ++k) {
        const double a = -double(k) * double(k);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const double delta = c * d;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x);
}

/// Truncation of the convergent expansion with the exact constant omitted:
/// -ln(eta) + sum_{k=1}^{order} (-1)^{k+1} eta^k / (k * k!).
inline double e1_log_series(double eta, int order) {
    double term = 1.0, sum = 0.0;
    for (int k = 1; k <= order; ++k) {
        term *= -eta / k;
        sum += -term / k;
    }
    return -std::log(eta) + sum;
}

/// The printed closed-form approximation  -ln(eta) + eta - eta^2/2 + c0,
/// kept verbatim for side-by-side comparison with the exact E1.
inline double paper_log_approximation(double eta, double c0) {
    if (!(eta > 0.0) || eta > 1.0)
        throw std::invalid_argument("paper_log_approximation: eta must be in (0, 1]");
    return -std::log(eta) + eta - eta * eta / 2.0 + c0;
}

/// Empirical integration constant  E1(eta) - e1_log_series(eta, order);
/// converges to -EulerGamma as the order grows.  `e1` may be supplied from
/// an independent route (e.g. the numeric weighted integral).
inline double c0_empirical(double eta, int order, double e1) {
    return e1 - e1_log_series(eta, order);
}

inline double c0_empirical(double eta, int order) {
    return c0_empirical(eta, order, exp_integral_e1(eta));
}

}  // namespace selfspin
