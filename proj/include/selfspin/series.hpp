#pragma once

// Interior series solutions of the reduced radial system
//
//   s^-2 d/ds (s^2 F) = (1 - 1/s) * alpha * G
//          d/ds G     = -(1 - 1/s) * alpha * F
//
// generated to arbitrary order by alternating exact multiplication and
// integration in the log-Laurent ring.  Two independent families exist:
// the first starts from a constant lower function (G0 = a0), the second
// from an inverse-square upper function (f0 = b0 s^-2).  Powers of alpha
// are tracked by the order index: the even coefficient of order k carries
// alpha^{2k}, the odd one alpha^{2k+1}.  The physical functions carry an
// additional damping factor exp(-(eta/2)/s) applied at evaluation time.
// Every coefficient function of order >= 1, and every odd coefficient,
// vanishes together with its first derivative at s = 1, which is what makes
// the interior solutions join the exterior forms smoothly there.

#include "selfspin/loglaurent.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace selfspin {

enum class SeriesFamily { first, second };

struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class SeriesSolution {
public:
    struct Order {
        LogLaurentPoly even;  // coefficient of alpha^{2k}: G-type (first) / f-type (second)
        LogLaurentPoly odd;   // coefficient of alpha^{2k+1}: F-type (first) / g-type (second)
    };

    SeriesFamily family() const { return family_; }
    const Rational& normalization() const { return normalization_; }
    int max_order() const { return int(orders_.size()) - 1; }
    const Order& order(int k) const { return orders_.at(k); }
    const std::vector<Order>& orders() const { return orders_; }

    /// Upper radial function (the one sitting in the j+1/2 harmonic slots):
    /// F for the first family, f for the second.
    double eval_upper(double s, double alpha) const {
        return family_ == SeriesFamily::first ? eval_odd(s, alpha) : eval_even(s, alpha);
    }

    /// Lower radial function: G for the first family, g for the second.
    double eval_lower(double s, double alpha) const {
        return family_ == SeriesFamily::first ? eval_even(s, alpha) : eval_odd(s, alpha);
    }

    double damping(double s, double eta) const { return std::exp(-0.5 * eta / s); }

    double eval_upper_physical(double s, double alpha, double eta) const {
        return eval_upper(s, alpha) * damping(s, eta);
    }
    double eval_lower_physical(double s, double alpha, double eta) const {
        return eval_lower(s, alpha) * damping(s, eta);
    }

    /// Exterior forms beyond s = 1 with the energy pinned to the rest value:
    /// first family  (F, G) = (0, a0 exp(-(eta/2)/s)),
    /// second family (f, g) = (b0 s^-2 exp(-(eta/2)/s), 0).
    double exterior_upper(double s, double eta) const {
        return family_ == SeriesFamily::first
                   ? 0.0
                   : to_double(normalization_) / (s * s) * damping(s, eta);
    }
    double exterior_lower(double s, double eta) const {
        return family_ == SeriesFamily::first ? to_double(normalization_) * damping(s, eta) : 0.0;
    }

    static SeriesSolution iterate_first_family(const Rational& a0, int max_order);
    static SeriesSolution iterate_second_family(const Rational& b0, int max_order);

private:
    SeriesSolution(SeriesFamily family, Rational normalization)
        : family_(family), normalization_(std::move(normalization)) {}

    double eval_even(double s, double alpha) const {
        double sum = 0.0, a2k = 1.0;
        for (const auto& o : orders_) {
            if (!o.even.is_zero()) sum += a2k * o.even.eval(s);
            a2k *= alpha * alpha;
        }
        return sum;
    }

    double eval_odd(double s, double alpha) const {
        double sum = 0.0, a2k1 = alpha;
        for (const auto& o : orders_) {
            if (!o.odd.is_zero()) sum += a2k1 * o.odd.eval(s);
            a2k1 *= alpha * alpha;
        }
        return sum;
    }

    SeriesFamily family_;
    Rational normalization_;
    std::vector<Order> orders_;
};

namespace detail {

// (1 - 1/s) as a ring element; multiplies every recurrence step.
inline const LogLaurentPoly& source_factor() {
    static const LogLaurentPoly f =
        LogLaurentPoly::constant(1) - LogLaurentPoly::power(-1);
    return f;
}

// Upper-step: given an even coefficient E, produce the odd coefficient
// s^-2 * antiderivative_vanishing_at_1(s^2 (1 - 1/s) E), which vanishes at
// s = 1 together with its derivative.
inline LogLaurentPoly upper_step(const LogLaurentPoly& even) {
    const auto integrand = LogLaurentPoly::power(2) * source_factor() * even;
    return LogLaurentPoly::power(-2) * integrand.antiderivative_vanishing_at_1();
}

// Lower-step: antiderivative_vanishing_at_1(-(1 - 1/s) * odd).
inline LogLaurentPoly lower_step(const LogLaurentPoly& odd) {
    return (-(source_factor() * odd)).antiderivative_vanishing_at_1();
}

}  // namespace detail

inline SeriesSolution SeriesSolution::iterate_first_family(const Rational& a0, int max_order) {
    if (max_order < 0) throw std::invalid_argument("iterate_first_family: order must be >= 0");
    SeriesSolution out(SeriesFamily::first, a0);
    out.orders_.reserve(max_order + 1);
    LogLaurentPoly lower = LogLaurentPoly::constant(a0);  // G0 = a0
    for (int k = 0; k <= max_order; ++k) {
        Order o;
        o.even = lower;
        o.odd = detail::upper_step(lower);  // F_k from G_k
        out.orders_.push_back(o);
        lower = detail::lower_step(o.odd);  // G_{k+1} from F_k
    }
    return out;
}

inline SeriesSolution SeriesSolution::iterate_second_family(const Rational& b0, int max_order) {
    if (max_order < 0) throw std::invalid_argument("iterate_second_family: order must be >= 0");
    SeriesSolution out(SeriesFamily::second, b0);
    out.orders_.reserve(max_order + 1);
    LogLaurentPoly upper = LogLaurentPoly::term(b0, -2);  // f0 = b0 s^-2
    for (int k = 0; k <= max_order; ++k) {
        Order o;
        o.even = upper;
        o.odd = detail::lower_step(upper);  // g_k from f_k
        out.orders_.push_back(o);
        upper = detail::upper_step(o.odd);  // f_{k+1} from g_k
    }
    return out;
}

// Per-order coefficients of the combined product density
// (lower_second * lower_first / s) * s^2 = sum_k alpha^{2k+1} xi_k:
//   xi_k = s * sum_{i+j=k} g_i G_j.
struct ProductDensity {
    std::vector<LogLaurentPoly> xi;

    const LogLaurentPoly& order(int k) const { return xi.at(k); }
    int max_order() const { return int(xi.size()) - 1; }

    double eval(double s, double alpha) const {
        double sum = 0.0, a2k1 = alpha;
        for (const auto& x : xi) {
            sum += a2k1 * x.eval(s);
            a2k1 *= alpha * alpha;
        }
        return sum;
    }
};

namespace detail {

// s * sum_{i+j=k} odd_i(a) * even_j(b) for k = 0..max_order.
inline ProductDensity mixed_product(const SeriesSolution& odd_source,
                                    const SeriesSolution& even_source, int max_order) {
    if (odd_source.max_order() < max_order || even_source.max_order() < max_order)
        throw std::invalid_argument("product density: requested order exceeds iterated order");
    ProductDensity out;
    out.xi.reserve(max_order + 1);
    const auto s1 = LogLaurentPoly::power(1);
    for (int k = 0; k <= max_order; ++k) {
        LogLaurentPoly acc;
        for (int i = 0; i <= k; ++i)
            acc = acc + odd_source.order(i).odd * even_source.order(k - i).even;
        out.xi.push_back(s1 * acc);
    }
    return out;
}

}  // namespace detail

/// xi_k of the lower-function product g G s (what the volume integral of
/// (g G / s) sees after the s^2 measure).
inline ProductDensity product_density(const SeriesSolution& first, const SeriesSolution& second,
                                      int max_order) {
    if (first.family() != SeriesFamily::first || second.family() != SeriesFamily::second)
        throw std::invalid_argument("product_density: expected (first, second) family pair");
    return detail::mixed_product(second, first, max_order);
}

/// chi_k of the upper-function product F f s (same measure convention).
inline ProductDensity upper_product_density(const SeriesSolution& first,
                                            const SeriesSolution& second, int max_order) {
    if (first.family() != SeriesFamily::first || second.family() != SeriesFamily::second)
        throw std::invalid_argument("upper_product_density: expected (first, second) family pair");
    return detail::mixed_product(first, second, max_order);
}

/// Unique root of the lower function G on (s_lo, 1): logarithmic pre-scan
/// for a sign change followed by bisection.  Throws BracketError when no
/// sign change is found.
inline double zero_crossing_G(const SeriesSolution& series, double alpha, double s_lo = 1e-6,
                              int prescan_points = 256) {
    if (series.family() != SeriesFamily::first)
        throw std::invalid_argument("zero_crossing_G: first family required");
    if (series.max_order() < 1)
        throw std::invalid_argument("zero_crossing_G: need at least order 1");

    const auto g = [&](double s) { return series.eval_lower(s, alpha); };
    const double s_hi = 1.0;
    double lo = s_lo, f_lo = g(lo);
    double bracket_lo = 0.0, bracket_hi = 0.0;
    bool found = false;
    for (int i = 1; i <= prescan_points; ++i) {
        const double s = s_lo * std::pow(s_hi / s_lo, double(i) / prescan_points);
        const double f = g(s);
        if (f_lo == 0.0 || f_lo * f < 0.0) {
            bracket_lo = lo;
            bracket_hi = s;
            found = true;
            break;
        }
        lo = s;
        f_lo = f;
    }
    if (!found) throw BracketError("zero_crossing_G: no sign change on the scan interval");

    double a = bracket_lo, b = bracket_hi, fa = g(a);
    for (int it = 0; it < 200 && (b - a) > 1e-16 * b; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = g(mid);
        if (fa * fm <= 0.0)
            b = mid;
        else {
            a = mid;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

/// Interior/exterior agreement at the join radius s = 1: values and first
/// derivatives of the physical functions on both sides.  The interior
/// derivatives are series derivatives in the ring plus the damping chain
/// term; by construction the mismatches are zero to all orders.
struct JoinReport {
    SeriesFamily family{};
    double upper_interior = 0.0, upper_exterior = 0.0;
    double lower_interior = 0.0, lower_exterior = 0.0;
    double upper_derivative_mismatch = 0.0;
    double lower_derivative_mismatch = 0.0;
    double value_mismatch = 0.0;
};

inline JoinReport exterior_join_check(const SeriesSolution& series, double alpha, double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("exterior_join_check: eta must be positive");

    const double damp = std::exp(-0.5 * eta);
    const bool first = series.family() == SeriesFamily::first;

    // Series values and derivatives at s = 1, exact in the ring.
    double even_v = 0.0, even_d = 0.0, odd_v = 0.0, odd_d = 0.0;
    double a2k = 1.0;
    for (const auto& o : series.orders()) {
        even_v += a2k * to_double(o.even.value_at_1());
        even_d += a2k * to_double(o.even.derivative().value_at_1());
        odd_v += a2k * alpha * to_double(o.odd.value_at_1());
        odd_d += a2k * alpha * to_double(o.odd.derivative().value_at_1());
        a2k *= alpha * alpha;
    }
    const double upper_v = first ? odd_v : even_v;
    const double upper_d = first ? odd_d : even_d;
    const double lower_v = first ? even_v : odd_v;
    const double lower_d = first ? even_d : odd_d;

    // d/ds [X(s) exp(-(eta/2)/s)] at s = 1.
    const double chain = 0.5 * eta;
    const double upper_phys_d = (upper_d + upper_v * chain) * damp;
    const double lower_phys_d = (lower_d + lower_v * chain) * damp;

    const double b0 = to_double(series.normalization());
    JoinReport r;
    r.family = series.family();
    r.upper_interior = upper_v * damp;
    r.lower_interior = lower_v * damp;
    if (first) {
        r.upper_exterior = 0.0;
        r.lower_exterior = b0 * damp;
        r.upper_derivative_mismatch = upper_phys_d - 0.0;
        r.lower_derivative_mismatch = lower_phys_d - b0 * chain * damp;
    } else {
        r.upper_exterior = b0 * damp;
        r.lower_exterior = 0.0;
        // d/ds [b0 s^-2 exp(-(eta/2)/s)] at 1 = b0 (chain - 2) damp.
        r.upper_derivative_mismatch = upper_phys_d - b0 * (chain - 2.0) * damp;
        r.lower_derivative_mismatch = lower_phys_d - 0.0;
    }
    r.value_mismatch = std::max(std::fabs(r.upper_interior - r.upper_exterior),
                                std::fabs(r.lower_interior - r.lower_exterior));
    return r;
}

struct RadialProfile {
    std::string name;
    std::vector<double> s;
    std::vector<double> value;
    int order = 0;
    double alpha = 0.0;
    double eta = 0.0;
};

/// Logarithmic grid on [s_min, 1) followed by a linear stretch on [1, s_max].
inline std::vector<double> figure_grid(double s_min = 1e-4, double s_max = 3.0,
                                       int log_points = 300, int linear_points = 100) {
    std::vector<double> grid;
    grid.reserve(log_points + linear_points);
    for (int i = 0; i < log_points; ++i)
        grid.push_back(s_min * std::pow(1.0 / s_min, double(i) / log_points));
    for (int i = 0; i < linear_points; ++i)
        grid.push_back(1.0 + (s_max - 1.0) * double(i) / (linear_points - 1));
    return grid;
}

/// Physical upper/lower functions on a grid, switching to the exterior
/// closed forms beyond s = 1.
inline std::vector<RadialProfile> sample_profiles(const SeriesSolution& series, double alpha,
                                                  double eta, const std::vector<double>& grid) {
    const bool first = series.family() == SeriesFamily::first;
    RadialProfile upper{first ? "F" : "f", grid, {}, series.max_order(), alpha, eta};
    RadialProfile lower{first ? "G" : "g", grid, {}, series.max_order(), alpha, eta};
    upper.value.reserve(grid.size());
    lower.value.reserve(grid.size());
    for (double s : grid) {
        if (!(s > 0.0)) throw std::invalid_argument("sample_profiles: grid values must be positive");
        if (s <= 1.0) {
            upper.value.push_back(series.eval_upper_physical(s, alpha, eta));
            lower.value.push_back(series.eval_lower_physical(s, alpha, eta));
        } else {
            upper.value.push_back(series.exterior_upper(s, eta));
            lower.value.push_back(series.exterior_lower(s, eta));
        }
    }
    return {upper, lower};
}

/// Product profiles F f and G g; identically zero beyond the join radius
/// because each product contains a function whose exterior form vanishes.
inline std::vector<RadialProfile> sample_product_profiles(const SeriesSolution& first,
                                                          const SeriesSolution& second,
                                                          double alpha, double eta,
                                                          const std::vector<double>& grid) {
    if (first.family() != SeriesFamily::first || second.family() != SeriesFamily::second)
        throw std::invalid_argument("sample_product_profiles: expected (first, second) pair");
    RadialProfile ff{"Ff", grid, {}, first.max_order(), alpha, eta};
    RadialProfile gg{"Gg", grid, {}, first.max_order(), alpha, eta};
    ff.value.reserve(grid.size());
    gg.value.reserve(grid.size());
    for (double s : grid) {
        if (s <= 1.0) {
            ff.value.push_back(first.eval_upper_physical(s, alpha, eta) *
                               second.eval_upper_physical(s, alpha, eta));
            gg.value.push_back(first.eval_lower_physical(s, alpha, eta) *
                               second.eval_lower_physical(s, alpha, eta));
        } else {
            ff.value.push_back(0.0);
            gg.value.push_back(0.0);
        }
    }
    return {ff, gg};
}

}  // namespace selfspin
