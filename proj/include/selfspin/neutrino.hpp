#pragma once

// Closed-form neutral solution: upper radial function s^-2 exp(-beta^2/s)
// with a vanishing partner, and the probability of interaction beyond the
// unit radius.

#include "selfspin/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace selfspin {

struct NeutrinoSolution {
    double beta = 0.0;
    // Spin coupling in the same length unit; defaults to beta.  Other
    // flavors would plug in their own (uncalibrated) values here.
    double lambda = -1.0;

    double coupling() const { return lambda >= 0.0 ? lambda : beta; }

    double F(double s) const {
        if (!(s > 0.0)) throw std::invalid_argument("NeutrinoSolution::F: s must be positive");
        return std::exp(-coupling() * beta / s) / (s * s);
    }
    static double G(double) { return 0.0; }
};

struct NeutrinoProfile {
    std::vector<double> s;
    std::vector<double> F;
    std::vector<double> G;
    double beta = 0.0;
};

inline NeutrinoProfile neutrino_profile(double beta, const std::vector<double>& grid) {
    if (beta < 0.0) throw std::invalid_argument("neutrino_profile: beta must be nonnegative");
    NeutrinoSolution sol{beta};
    NeutrinoProfile out;
    out.beta = beta;
    out.s = grid;
    out.F.reserve(grid.size());
    out.G.assign(grid.size(), 0.0);
    for (double s : grid) out.F.push_back(sol.F(s));
    return out;
}

/// Fraction of the density integral beyond s = 1:
///   [int_1^inf F^2 s^2 ds] / [int_0^inf F^2 s^2 ds] = 1 - exp(-2 beta^2),
/// from int_0^inf s^-2 e^{-a/s} ds = 1/a and
///      int_1^inf s^-2 e^{-a/s} ds = (1 - e^-a)/a  with a = 2 beta^2.
inline double escape_probability(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("escape_probability: beta must be positive");
    return -std::expm1(-2.0 * beta * beta);
}

/// Same ratio by numeric quadrature (validation route): the inner part
/// int_0^1 s^-2 e^{-a/s} ds is a weighted integral, the outer part maps to
/// int_0^1 e^{-a u} du under u = 1/s.
inline double escape_probability_numeric(double beta, double rel_tol = 1e-11) {
    if (!(beta > 0.0)) throw std::invalid_argument("escape_probability_numeric: beta must be positive");
    const double a = 2.0 * beta * beta;
    const double inner = weighted_integral(a, LogLaurentPoly::power(-2), 1e-14, rel_tol);
    const double outer = detail::adaptive_on_interval(
        [a](double u) { return std::exp(-a * u); }, 0.0, 1.0, 1e-14, rel_tol);
    return outer / (outer + inner);
}

}  // namespace selfspin
