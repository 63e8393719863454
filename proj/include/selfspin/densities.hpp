#pragma once

// Bispinor assembly for total angular momentum 1/2 and the covariant
// bilinear densities of two independent solutions.  Slot coefficients are
// kept exact as (rational) * sqrt(rational) * i^{0,1}, so the structural
// checks (the 1/3, 2/3, 1 pattern of the 4-vector time component, the
// equal-spin / opposite-magnetization relation between the two solution
// structures) are exact-equality tests rather than tolerance tests.
//
// A bispinor here is symbolic: four slots, each carrying an exact
// coefficient, a radial role (upper or lower function of a solution
// family) and a spherical harmonic.  Numeric radial content is bound only
// at evaluation time.

#include "selfspin/quadrature.hpp"
#include "selfspin/series.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace selfspin {

// value = (re + i*im) * sqrt(radicand)
struct SlotCoefficient {
    Rational re{0};
    Rational im{0};
    Rational radicand{1};

    bool is_zero() const { return re == 0 && im == 0; }

    std::complex<double> to_complex() const {
        const double root = std::sqrt(to_double(radicand));
        return {to_double(re) * root, to_double(im) * root};
    }
};

enum class Harmonic { none, Y00, Y10, Y11 };
enum class RadialRole { none, upper, lower };

inline bool harmonic_is_real(Harmonic h) { return h == Harmonic::Y00 || h == Harmonic::Y10; }

inline std::complex<double> harmonic_value(Harmonic h, double theta, double phi) {
    constexpr double pi = 3.14159265358979323846;
    switch (h) {
        case Harmonic::Y00: return {0.5 / std::sqrt(pi), 0.0};
        case Harmonic::Y10: return {std::sqrt(3.0 / (4.0 * pi)) * std::cos(theta), 0.0};
        case Harmonic::Y11:
            return -std::sqrt(3.0 / (8.0 * pi)) * std::sin(theta) *
                   std::complex<double>{std::cos(phi), std::sin(phi)};
        case Harmonic::none: return {0.0, 0.0};
    }
    return {0.0, 0.0};
}

// Diagonal gamma combinations; each entry is exact (re, im) with |entry| = 1.
struct GammaDiagonal {
    std::array<Rational, 4> re;
    std::array<Rational, 4> im;

    std::complex<double> entry(int i) const { return {to_double(re[i]), to_double(im[i])}; }
};

struct GammaSet {
    static GammaDiagonal gamma_t() { return {{1, 1, 1, 1}, {0, 0, 0, 0}}; }
    static GammaDiagonal gamma_5() { return {{1, 1, -1, -1}, {0, 0, 0, 0}}; }
    static GammaDiagonal gamma_xy() { return {{0, 0, 0, 0}, {1, -1, 1, -1}}; }
    static GammaDiagonal gamma_xy5() { return {{0, 0, 0, 0}, {1, -1, -1, 1}}; }
};

enum class BispinorStructure { first, second };

struct BispinorSlot {
    SlotCoefficient coeff;
    RadialRole radial = RadialRole::none;
    Harmonic harmonic = Harmonic::none;
};

// The four coefficient brackets of the general-(j, m) solutions; arguments
// are doubled so half-integers stay exact.  Structure `first` places the
// upper radial function in the j+1/2 harmonic slots (1, 2); structure
// `second` swaps the blocks.
inline std::array<SlotCoefficient, 4> general_slot_coefficients(int two_j, int two_m,
                                                                BispinorStructure structure) {
    if (two_j < 1 || std::abs(two_m) > two_j || (two_j - two_m) % 2 != 0)
        throw std::invalid_argument("general_slot_coefficients: invalid (j, m)");
    const Rational j(two_j, 2), m(two_m, 2);
    const SlotCoefficient upper_minus{1, 0, (j + 1 - m) / (2 * (j + 1))};
    const SlotCoefficient upper_plus{-1, 0, (j + 1 + m) / (2 * (j + 1))};
    const SlotCoefficient lower_minus{0, 1, (j + m) / (2 * j)};
    const SlotCoefficient lower_plus{0, 1, (j - m) / (2 * j)};
    if (structure == BispinorStructure::first)
        return {upper_minus, upper_plus, lower_minus, lower_plus};
    return {lower_minus, lower_plus, upper_minus, upper_plus};
}

struct Bispinor {
    BispinorStructure structure = BispinorStructure::first;
    std::array<BispinorSlot, 4> slots;

    /// Reduced j = 1/2, m = 1/2 forms.  First structure:
    /// (F Y10 / sqrt(3), sqrt(2/3) F Y11, i G Y00, 0); second structure
    /// carries the same pattern with the harmonic blocks swapped.
    static Bispinor reduced(BispinorStructure structure) {
        Bispinor b;
        b.structure = structure;
        const BispinorSlot upper10{{1, 0, Rational(1, 3)}, RadialRole::upper, Harmonic::Y10};
        const BispinorSlot upper11{{1, 0, Rational(2, 3)}, RadialRole::upper, Harmonic::Y11};
        const BispinorSlot lower00{{0, 1, Rational(1)}, RadialRole::lower, Harmonic::Y00};
        const BispinorSlot empty{};
        if (structure == BispinorStructure::first)
            b.slots = {upper10, upper11, lower00, empty};
        else
            b.slots = {lower00, empty, upper10, upper11};
        return b;
    }

    static Bispinor null() { return {}; }
};

// One term of a symmetrized bilinear: value =
//   coeff * sqrt(radicand) * (i if imaginary) * R_a R_b * Y_{ha} conj(Y_{hb}),
// where R_a, R_b are the radial functions named by the roles.
struct DensityTerm {
    Rational coeff{0};
    Rational radicand{1};
    bool imaginary = false;
    RadialRole radial_a = RadialRole::none;
    RadialRole radial_b = RadialRole::none;
    Harmonic harmonic_a = Harmonic::none;
    Harmonic harmonic_b = Harmonic::none;
};

namespace detail {

// Fold square factors of the radicand into the rational coefficient.
inline void normalize_term(Rational& coeff, Rational& radicand) {
    if (coeff == 0 || radicand == 0) {
        if (radicand == 0) coeff = 0;
        radicand = 1;
        return;
    }
    // sqrt(p/q) = sqrt(p q) / q.
    BigInt p = numerator(radicand), q = denominator(radicand);
    coeff /= Rational(q);
    BigInt n = p * q;
    BigInt square(1);
    for (BigInt d(2); d * d <= n; ++d)
        while (n % (d * d) == 0) {
            n /= d * d;
            square *= d;
        }
    coeff *= Rational(square);
    radicand = Rational(n);
}

}  // namespace detail

/// Symmetrized bilinear of two bispinors against a diagonal gamma:
///   <psi_a G psi_b> = (1/2) [ (psi_a+psi_b) G (psi_a+psi_b)^*
///                             - psi_a G psi_a^* - psi_b G psi_b^* ]
///                   = sum_i d_i Re_sym(c_i^a conj(c_i^b)) R^a_i R^b_i Y ...
/// kept exact term by term.
inline std::vector<DensityTerm> bilinear(const Bispinor& a, const Bispinor& b,
                                         const GammaDiagonal& gamma) {
    std::vector<DensityTerm> out;
    for (int i = 0; i < 4; ++i) {
        const auto& sa = a.slots[i];
        const auto& sb = b.slots[i];
        if (sa.coeff.is_zero() || sb.coeff.is_zero()) continue;
        if (sa.harmonic != sb.harmonic &&
            !(harmonic_is_real(sa.harmonic) && harmonic_is_real(sb.harmonic)))
            throw std::logic_error("bilinear: complex cross-harmonic pairing not representable");

        // c_a conj(c_b) + c_b conj(c_a) = 2 (re_a re_b + im_a im_b) sqrt(q_a q_b).
        Rational sym = sa.coeff.re * sb.coeff.re + sa.coeff.im * sb.coeff.im;
        if (sym == 0) continue;
        Rational radicand = sa.coeff.radicand * sb.coeff.radicand;
        detail::normalize_term(sym, radicand);

        const bool gamma_imag = gamma.im[i] != 0;
        const Rational gamma_part = gamma_imag ? gamma.im[i] : gamma.re[i];
        if (gamma_part == 0) continue;
        out.push_back({sym * gamma_part, radicand, gamma_imag, sa.radial, sb.radial,
                       sa.harmonic, sb.harmonic});
    }
    return out;
}

/// Angular volume integration: |Y|^2 integrates to 1, products of different
/// harmonics integrate to 0.  The surviving terms name only radial content.
inline std::vector<DensityTerm> volume_reduce(const std::vector<DensityTerm>& density) {
    std::vector<DensityTerm> out;
    for (const auto& t : density) {
        if (t.harmonic_a != t.harmonic_b) continue;
        bool merged = false;
        for (auto& u : out)
            if (u.radial_a == t.radial_a && u.radial_b == t.radial_b &&
                u.imaginary == t.imaginary && u.radicand == t.radicand) {
                u.coeff += t.coeff;
                merged = true;
                break;
            }
        if (!merged) {
            DensityTerm r = t;
            r.harmonic_a = Harmonic::none;
            r.harmonic_b = Harmonic::none;
            out.push_back(r);
        }
    }
    std::erase_if(out, [](const DensityTerm& t) { return t.coeff == 0; });
    return out;
}

struct RadialValues {
    double upper = 0.0;
    double lower = 0.0;
};

inline double radial_factor(RadialRole role_a, RadialRole role_b, const RadialValues& a,
                            const RadialValues& b) {
    const double ra = role_a == RadialRole::upper ? a.upper : a.lower;
    const double rb = role_b == RadialRole::upper ? b.upper : b.lower;
    return ra * rb;
}

/// Numeric value of a (possibly unreduced) density at a point on the sphere.
inline std::complex<double> eval_density(const std::vector<DensityTerm>& density,
                                         const RadialValues& a, const RadialValues& b,
                                         double theta, double phi) {
    std::complex<double> sum{0.0, 0.0};
    for (const auto& t : density) {
        const double scalar = to_double(t.coeff) * std::sqrt(to_double(t.radicand)) *
                              radial_factor(t.radial_a, t.radial_b, a, b);
        std::complex<double> angular{1.0, 0.0};
        if (t.harmonic_a != Harmonic::none)
            angular = harmonic_value(t.harmonic_a, theta, phi) *
                      std::conj(harmonic_value(t.harmonic_b, theta, phi));
        const std::complex<double> phase = t.imaginary ? std::complex<double>{0.0, 1.0}
                                                       : std::complex<double>{1.0, 0.0};
        sum += phase * scalar * angular;
    }
    return sum;
}

/// Numeric value of a volume-reduced density; throws if the expected
/// reality (real for unit-phase gammas, imaginary for the i-carrying spin
/// and magnetization combinations) fails.
inline double eval_reduced(const std::vector<DensityTerm>& reduced, const RadialValues& a,
                           const RadialValues& b, bool expect_imaginary = false) {
    double real = 0.0, imag = 0.0;
    for (const auto& t : reduced) {
        const double v = to_double(t.coeff) * std::sqrt(to_double(t.radicand)) *
                         radial_factor(t.radial_a, t.radial_b, a, b);
        (t.imaginary ? imag : real) += v;
    }
    const double off = expect_imaginary ? real : imag;
    const double scale = std::max({1.0, std::fabs(real), std::fabs(imag)});
    if (std::fabs(off) > 1e-12 * scale)
        throw std::logic_error("eval_reduced: unexpected mixed-phase density");
    return expect_imaginary ? imag : real;
}

/// Spin and magnetization z-components of a solution pair, volume-reduced.
/// The diagonal products carry an overall factor i, so the reported values
/// are the real coefficients of i.
inline std::pair<double, double> spin_magnetization(const Bispinor& a, const Bispinor& b,
                                                    const RadialValues& va,
                                                    const RadialValues& vb) {
    const auto sz = volume_reduce(bilinear(a, b, GammaSet::gamma_xy()));
    const auto mz = volume_reduce(bilinear(a, b, GammaSet::gamma_xy5()));
    return {eval_reduced(sz, va, vb, true), eval_reduced(mz, va, vb, true)};
}

// The covariant density table: component count of each type and whether any
// component survives volume integration (the pseudo-invariant has none).
struct CovariantRow {
    const char* name;
    int components;
    std::optional<const char*> surviving;
};

inline std::array<CovariantRow, 5> covariant_table() {
    return {{{"pseudo-invariant", 1, std::nullopt},
             {"invariant", 1, "gamma_5"},
             {"4-vector", 4, "gamma_t"},
             {"pseudo 4-vector", 4, "gamma_xy"},
             {"antisymmetric tensor", 6, "gamma_xy5"}}};
}

/// All volume-reduced densities of the two radial families at radius s.
/// I1 is the rest-frame contraction u_mu <psi_a gamma_mu psi_b>, which at
/// rest coincides with the gamma_t time component T.
struct DensityValue {
    double I1 = 0.0;
    double I2 = 0.0;
    double T = 0.0;
    double Sz = 0.0;
    double Mz = 0.0;
};

inline DensityValue evaluate_density(const SeriesSolution& first, const SeriesSolution& second,
                                     double alpha, double eta, double s) {
    const RadialValues va{first.eval_upper_physical(s, alpha, eta),
                          first.eval_lower_physical(s, alpha, eta)};
    const RadialValues vb{second.eval_upper_physical(s, alpha, eta),
                          second.eval_lower_physical(s, alpha, eta)};
    const auto a = Bispinor::reduced(BispinorStructure::first);
    const auto b = Bispinor::reduced(BispinorStructure::first);

    DensityValue d;
    d.T = eval_reduced(volume_reduce(bilinear(a, b, GammaSet::gamma_t())), va, vb);
    d.I1 = d.T;
    d.I2 = eval_reduced(volume_reduce(bilinear(a, b, GammaSet::gamma_5())), va, vb);
    const auto [sz, mz] = spin_magnetization(a, b, va, vb);
    d.Sz = sz;
    d.Mz = mz;
    return d;
}

/// Energy integral 4 pi int_0^1 s^-1 (F f + G g) s^2 ds in the scaled
/// variable, per unit normalization product; the weight exp(-eta/s) carries
/// the damping of both factors.  The lower-function part is the quantity
/// whose vanishing fixes the mass ratio.
struct InertiaResult {
    double total = 0.0;
    double upper_part = 0.0;  // F f contribution
    double lower_part = 0.0;  // G g contribution
};

inline InertiaResult electromagnetic_inertia(const SeriesSolution& first,
                                             const SeriesSolution& second, double alpha,
                                             double eta, double abs_tol = 1e-12,
                                             double rel_tol = 1e-10) {
    const int K = std::min(first.max_order(), second.max_order());
    const auto xi = product_density(first, second, K);
    const auto chi = upper_product_density(first, second, K);
    constexpr double four_pi = 4.0 * 3.14159265358979323846;

    InertiaResult r;
    double a2k1 = alpha;
    for (int k = 0; k <= K; ++k) {
        if (!chi.order(k).is_zero())
            r.upper_part += four_pi * a2k1 * weighted_integral(eta, chi.order(k), abs_tol, rel_tol);
        if (!xi.order(k).is_zero())
            r.lower_part += four_pi * a2k1 * weighted_integral(eta, xi.order(k), abs_tol, rel_tol);
        a2k1 *= alpha * alpha;
    }
    r.total = r.upper_part + r.lower_part;
    return r;
}

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    constexpr double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

/// Numeric integral over the unit sphere (Gauss-Legendre in cos(theta),
/// trapezoid in phi, exact for the harmonic products involved here).
template <typename F>
std::complex<double> sphere_integrate(const F& f, int n_theta = 24, int n_phi = 32) {
    std::vector<double> x, w;
    gauss_legendre(n_theta, x, w);
    constexpr double pi = 3.14159265358979323846;
    std::complex<double> sum{0.0, 0.0};
    for (int i = 0; i < n_theta; ++i) {
        const double theta = std::acos(x[i]);
        std::complex<double> ring{0.0, 0.0};
        for (int j = 0; j < n_phi; ++j) ring += f(theta, 2.0 * pi * j / n_phi);
        sum += w[i] * ring * (2.0 * pi / n_phi);
    }
    return sum;
}

}  // namespace selfspin
