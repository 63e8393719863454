#pragma once

// At-rest self-potential ingredients: the inverse-distance invariant, the
// static 4-potential, the radial spin potential magnitude, the dimensionless
// couplings, and finite-difference sanity checks of the underlying claims.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace selfspin {

// Invariant and potentials of a singularity at rest.  Spatial part of the
// 4-potential is zero; the spin potential is radial with magnitude r^-2.
struct AtRestPotentials {
    static double I0(double r) { return 1.0 / require_positive(r); }
    static double A_time(double r) { return 1.0 / require_positive(r); }
    static std::array<double, 3> A_spatial(double) { return {0.0, 0.0, 0.0}; }
    static double sigma_magnitude(double r) {
        const double rr = require_positive(r);
        return 1.0 / (rr * rr);
    }
    static std::array<double, 4> four_velocity() { return {0.0, 0.0, 0.0, 1.0}; }

private:
    static double require_positive(double r) {
        if (!(r > 0.0)) throw std::invalid_argument("AtRestPotentials: r must be positive");
        return r;
    }
};

struct PhysicalConstants {
    double m_e_eV = 511000.0;
    double m_p_eV = 938272088.0;
    double m_pi0_eV = 134976800.0;
    double alpha = 1.0 / 137.0;

    void validate() const {
        if (!(m_e_eV > 0.0 && m_p_eV > 0.0 && m_pi0_eV > 0.0 && alpha > 0.0))
            throw std::invalid_argument("PhysicalConstants: all entries must be positive");
    }
};

// Dimensionless couplings.  lambda_e is expressed in units of hbar/(m_e c),
// where it equals beta = m_nu/m_e; eta = 2 beta / alpha is the damping
// parameter of the weight exp(-eta/s).
struct CouplingSpec {
    double alpha = 0.0;
    double beta = 0.0;
    double eta = 0.0;
    double lambda_e = 0.0;
    double n = 0.0;
    double mu_pi = 0.0;

    static CouplingSpec from_alpha_beta(double alpha, double beta, double n = 0.0,
                                        double mu_pi = 0.0) {
        if (!(alpha > 0.0) || beta < 0.0 || n < 0.0 || mu_pi < 0.0)
            throw std::invalid_argument("CouplingSpec: negative coupling");
        CouplingSpec c;
        c.alpha = alpha;
        c.beta = beta;
        c.eta = 2.0 * beta / alpha;
        c.lambda_e = beta;
        c.n = n;
        c.mu_pi = mu_pi;
        return c;
    }
};

/// Yukawa screening factor  exp(-mu r)/r.
inline double yukawa(double r, double mu) {
    if (!(r > 0.0)) throw std::invalid_argument("yukawa: r must be positive");
    if (mu < 0.0) throw std::invalid_argument("yukawa: mu must be nonnegative");
    return std::exp(-mu * r) / r;
}

/// Central finite-difference Laplacian of (sum x_k^2)^{-1/2} in N dimensions
/// at the point made of the first N entries of `base` (last entry repeated
/// if N exceeds the list).  Analytically the value is (3 - N) |x|^-3, so the
/// residual vanishes only in three dimensions.
struct LaplacianSample {
    int dimension = 0;
    double residual = 0.0;   // finite-difference Laplacian value
    double analytic = 0.0;   // (3 - N) |x|^-3 at the sample point
};

inline std::vector<LaplacianSample> laplacian_dimension_scan(
    const std::vector<int>& dimensions, double h, const std::vector<double>& base) {
    if (!(h > 0.0)) throw std::invalid_argument("laplacian_dimension_scan: step must be positive");
    if (base.empty()) throw std::invalid_argument("laplacian_dimension_scan: empty sample point");

    std::vector<LaplacianSample> out;
    out.reserve(dimensions.size());
    for (int n : dimensions) {
        if (n < 2) throw std::invalid_argument("laplacian_dimension_scan: dimension must be >= 2");
        std::vector<double> x(n);
        for (int k = 0; k < n; ++k)
            x[k] = k < int(base.size()) ? base[k] : base.back();

        const auto inv_norm = [&x](int flip, double delta) {
            double sq = 0.0;
            for (int k = 0; k < int(x.size()); ++k) {
                const double xi = x[k] + (k == flip ? delta : 0.0);
                sq += xi * xi;
            }
            return 1.0 / std::sqrt(sq);
        };

        const double center = inv_norm(-1, 0.0);
        double lap = 0.0;
        for (int k = 0; k < n; ++k)
            lap += (inv_norm(k, h) - 2.0 * center + inv_norm(k, -h)) / (h * h);

        double r2 = 0.0;
        for (double xi : x) r2 += xi * xi;
        const double analytic = (3.0 - n) / (r2 * std::sqrt(r2));
        out.push_back({n, lap, analytic});
    }
    return out;
}

/// Finite-difference residuals of the static field equations at r0:
/// the Laplacian of 1/r and the divergence of the at-rest 4-potential
/// (zero spatial part, time-independent time part).
struct StaticWaveResiduals {
    double laplacian = 0.0;
    double divergence = 0.0;
};

inline StaticWaveResiduals static_wave_check(const std::array<double, 3>& r0, double h) {
    const double norm2 = r0[0] * r0[0] + r0[1] * r0[1] + r0[2] * r0[2];
    if (!(norm2 > 0.0)) throw std::invalid_argument("static_wave_check: r0 must be nonzero");

    const auto scan = laplacian_dimension_scan({3}, h, {r0[0], r0[1], r0[2]});
    // 4-divergence: spatial part of A vanishes identically and the time part
    // carries no time dependence, so both finite differences are exact zeros.
    double div = 0.0;
    for (int k = 0; k < 3; ++k) {
        const auto a = AtRestPotentials::A_spatial(std::sqrt(norm2));
        div += (a[k] - a[k]) / (2.0 * h);
    }
    const double r = std::sqrt(norm2);
    div += (AtRestPotentials::A_time(r) - AtRestPotentials::A_time(r)) / (2.0 * h);
    return {scan.front().residual, div};
}

}  // namespace selfspin
