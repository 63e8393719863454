#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "selfspin/series.hpp"

#include <cmath>
#include <optional>

using namespace selfspin;

namespace {

LogLaurentPoly s_pow(long long j) { return LogLaurentPoly::power(j); }
LogLaurentPoly term(const Rational& c, long long j, int p = 0) {
    return LogLaurentPoly::term(c, j, p);
}

// (1/6)(s^-2 - 3 + 2s)
LogLaurentPoly expected_F0() {
    return Rational(1, 6) * (s_pow(-2) - LogLaurentPoly::constant(3) + Rational(2) * s_pow(1));
}

// -(1/12)(s^-2 - 2 s^-1 + 6 ln s + 9 - 10 s + 2 s^2)
LogLaurentPoly expected_G1() {
    return Rational(-1, 12) *
           (s_pow(-2) - Rational(2) * s_pow(-1) + term(Rational(6), 0, 1) +
            LogLaurentPoly::constant(9) - Rational(10) * s_pow(1) + Rational(2) * s_pow(2));
}

// -(1/2)(1 - s)^2 s^-2
LogLaurentPoly expected_g0() {
    const auto one_minus_s = LogLaurentPoly::constant(1) - s_pow(1);
    return Rational(-1, 2) * one_minus_s * one_minus_s * s_pow(-2);
}

// s^-3 - 4 s^-2 + 40 - 5 s - 36 s^2 + 4 s^3 + 60 s ln s  (printed bracket)
LogLaurentPoly xi1_bracket() {
    return s_pow(-3) - Rational(4) * s_pow(-2) + LogLaurentPoly::constant(40) -
           Rational(5) * s_pow(1) - Rational(36) * s_pow(2) + Rational(4) * s_pow(3) +
           term(Rational(60), 1, 1);
}

// If a == r * b for one rational r, return r.
std::optional<Rational> rational_ratio(const LogLaurentPoly& a, const LogLaurentPoly& b) {
    if (a.is_zero() || b.is_zero()) return std::nullopt;
    if (a.term_count() != b.term_count()) return std::nullopt;
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

}  // namespace

TEST_CASE("first family order 0 and 1 match the printed forms exactly") {
    const auto sol = SeriesSolution::iterate_first_family(Rational(1), 1);
    CHECK(sol.order(0).even == LogLaurentPoly::constant(1));
    CHECK(sol.order(0).odd == expected_F0());
    CHECK(sol.order(1).even == expected_G1());

    // Normalization scales through linearly.
    const auto scaled = SeriesSolution::iterate_first_family(Rational(3, 7), 1);
    CHECK(scaled.order(0).odd == Rational(3, 7) * expected_F0());
    CHECK(scaled.order(1).even == Rational(3, 7) * expected_G1());
}

TEST_CASE("second family order 0 matches the printed form exactly") {
    const auto sol = SeriesSolution::iterate_second_family(Rational(1), 1);
    CHECK(sol.order(0).even == term(Rational(1), -2));
    CHECK(sol.order(0).odd == expected_g0());
    CHECK(sol.order(1).odd.value_at_1() == 0);

    const auto null = SeriesSolution::iterate_second_family(Rational(0), 2);
    for (const auto& o : null.orders()) {
        CHECK(o.even.is_zero());
        CHECK(o.odd.is_zero());
    }
}

TEST_CASE("boundary values and derivatives vanish exactly at s = 1") {
    const int K = 4;
    const auto first = SeriesSolution::iterate_first_family(Rational(2, 3), K);
    const auto second = SeriesSolution::iterate_second_family(Rational(-5, 4), K);

    for (int k = 0; k <= K; ++k) {
        CHECK(first.order(k).odd.value_at_1() == 0);             // F_k(1) = 0
        CHECK(first.order(k).odd.derivative().value_at_1() == 0);
        CHECK(second.order(k).odd.value_at_1() == 0);            // g_k(1) = 0
        CHECK(second.order(k).odd.derivative().value_at_1() == 0);
        if (k >= 1) {
            CHECK(first.order(k).even.value_at_1() == 0);        // G_k(1) = 0
            CHECK(first.order(k).even.derivative().value_at_1() == 0);
            CHECK(second.order(k).even.value_at_1() == 0);       // f_k(1) = 0
            CHECK(second.order(k).even.derivative().value_at_1() == 0);
        }
    }
    CHECK(first.order(0).even == LogLaurentPoly::constant(Rational(2, 3)));
    CHECK(second.order(0).even == term(Rational(-5, 4), -2));
}

TEST_CASE("each order satisfies its recurrence relation exactly") {
    const int K = 3;
    const auto src = LogLaurentPoly::constant(1) - s_pow(-1);
    const auto first = SeriesSolution::iterate_first_family(Rational(1), K);
    const auto second = SeriesSolution::iterate_second_family(Rational(1), K);

    for (int k = 0; k <= K; ++k) {
        // d/ds (s^2 F_k) = s^2 (1 - 1/s) G_k
        CHECK((s_pow(2) * first.order(k).odd).derivative() ==
              s_pow(2) * src * first.order(k).even);
        // d/ds g_k = -(1 - 1/s) f_k
        CHECK(second.order(k).odd.derivative() == -(src * second.order(k).even));
        if (k < K) {
            // d/ds G_{k+1} = -(1 - 1/s) F_k
            CHECK(first.order(k + 1).even.derivative() == -(src * first.order(k).odd));
            // d/ds (s^2 f_{k+1}) = s^2 (1 - 1/s) g_k
            CHECK((s_pow(2) * second.order(k + 1).even).derivative() ==
                  s_pow(2) * src * second.order(k).odd);
        }
    }
}

TEST_CASE("product density: frozen forms and the overall factor vs the printed ones") {
    const int K = 2;
    const auto first = SeriesSolution::iterate_first_family(Rational(1), K);
    const auto second = SeriesSolution::iterate_second_family(Rational(1), K);
    const auto xi = product_density(first, second, K);

    // Engine xi_0 = -(1/2)(s^-1 - 2 + s); the printed form omits the -1/2.
    const auto xi0_bracket = s_pow(-1) - LogLaurentPoly::constant(2) + s_pow(1);
    CHECK(xi.order(0) == Rational(-1, 2) * xi0_bracket);
    const auto r0 = rational_ratio(xi.order(0), xi0_bracket);
    REQUIRE(r0.has_value());
    CHECK(*r0 == Rational(-1, 2));

    // Engine xi_1 is proportional to the printed bracket; against the full
    // printed value -(1/12)[bracket] the factor is the same -1/2.
    const auto r1 = rational_ratio(xi.order(1), xi1_bracket());
    REQUIRE(r1.has_value());
    CHECK(*r1 == Rational(1, 24));
    const auto r1_full = rational_ratio(xi.order(1), Rational(-1, 12) * xi1_bracket());
    REQUIRE(r1_full.has_value());
    CHECK(*r1_full == Rational(-1, 2));

    // Zero normalization annihilates every order.
    const auto null = product_density(SeriesSolution::iterate_first_family(Rational(0), K),
                                      second, K);
    for (const auto& x : null.xi) CHECK(x.is_zero());

    // Requested order beyond the iterated order is rejected.
    CHECK_THROWS_AS(product_density(first, second, K + 1), std::invalid_argument);
}

TEST_CASE("xi_k exponent bound") {
    const int K = 3;
    const auto xi = product_density(SeriesSolution::iterate_first_family(Rational(1), K),
                                    SeriesSolution::iterate_second_family(Rational(1), K), K);
    for (int k = 0; k <= K; ++k)
        CHECK(xi.order(k).min_exponent() >= -(2 * k + 1) - 2);
}

TEST_CASE("symbolic product orders match numeric per-order multiplication") {
    const int K = 3;
    const auto first = SeriesSolution::iterate_first_family(Rational(1), K);
    const auto second = SeriesSolution::iterate_second_family(Rational(1), K);
    const auto xi = product_density(first, second, K);

    for (double s : {0.1, 0.35, 0.8, 1.0}) {
        for (int k = 0; k <= K; ++k) {
            double numeric = 0.0;
            for (int i = 0; i <= k; ++i)
                numeric += second.order(i).odd.eval(s) * first.order(k - i).even.eval(s);
            numeric *= s;
            const double symbolic = xi.order(k).eval(s);
            const double scale = std::max({1.0, std::fabs(numeric), std::fabs(symbolic)});
            CHECK(std::fabs(numeric - symbolic) / scale < 1e-12);
        }
    }
}

TEST_CASE("lower function crosses zero once, near alpha/sqrt(12)") {
    const auto sol = SeriesSolution::iterate_first_family(Rational(1), 3);
    for (double alpha : {1.0 / 137.0, 0.01}) {
        const double expected = alpha / std::sqrt(12.0);
        const double got = zero_crossing_G(sol, alpha);
        CHECK(std::fabs(got - expected) / expected < 0.1);

        // Exactly one sign change on (1e-6, 1).
        int changes = 0;
        double prev = sol.eval_lower(1e-6, alpha);
        for (int i = 1; i <= 4000; ++i) {
            const double s = 1e-6 * std::pow(1e6, i / 4000.0);
            const double cur = sol.eval_lower(s, alpha);
            if (prev * cur < 0.0) ++changes;
            prev = cur;
        }
        CHECK(changes == 1);
    }
    CHECK_THROWS_AS(zero_crossing_G(SeriesSolution::iterate_first_family(Rational(1), 0),
                                    1.0 / 137.0),
                    std::invalid_argument);
}

TEST_CASE("interior and exterior join smoothly at s = 1") {
    const double alpha = 1.0 / 137.0;
    const double eta = 9.47e-4;
    const int K = 3;
    const double tol = 10.0 * std::pow(alpha, 2.0 * K + 2.0);

    const auto first = SeriesSolution::iterate_first_family(Rational(1), K);
    const auto rf = exterior_join_check(first, alpha, eta);
    CHECK(std::fabs(rf.value_mismatch) < 1e-14);
    CHECK(std::fabs(rf.value_mismatch) < tol);
    CHECK(std::fabs(rf.upper_derivative_mismatch) < 1e-13);
    CHECK(std::fabs(rf.lower_derivative_mismatch) < 1e-13);
    CHECK(rf.upper_interior == 0.0);  // F(1) is an exact rational zero
    CHECK(rf.lower_interior == doctest::Approx(std::exp(-eta / 2)).epsilon(1e-12));

    const auto second = SeriesSolution::iterate_second_family(Rational(1), K);
    const auto rs = exterior_join_check(second, alpha, eta);
    CHECK(std::fabs(rs.value_mismatch) < 1e-14);
    CHECK(std::fabs(rs.upper_derivative_mismatch) < 1e-13);
    CHECK(std::fabs(rs.lower_derivative_mismatch) < 1e-13);
    CHECK(rs.lower_interior == 0.0);  // g(1) is an exact rational zero
}

TEST_CASE("sampled profiles: join behavior and exterior decay") {
    const double alpha = 1.0 / 137.0;
    const double eta = 9.47e-4;
    const auto first = SeriesSolution::iterate_first_family(Rational(1), 3);
    const auto second = SeriesSolution::iterate_second_family(Rational(1), 3);

    const auto grid = figure_grid();
    CHECK(grid.size() == 400);
    CHECK(grid.front() == doctest::Approx(1e-4));
    CHECK(grid.back() == doctest::Approx(3.0));

    const auto products = sample_product_profiles(first, second, alpha, eta, {1.0, 1.5, 2.0});
    CHECK(std::fabs(products[0].value[0]) < 1e-14);  // Ff at the join
    CHECK(std::fabs(products[1].value[0]) < 1e-14);  // Gg at the join
    CHECK(products[0].value[1] == 0.0);
    CHECK(products[1].value[2] == 0.0);

    // G essentially constant beyond the join; f decays like s^-2.
    const auto pf = sample_profiles(first, alpha, eta, {2.0, 3.0});
    CHECK(pf[1].value[0] == doctest::Approx(std::exp(-eta / 4.0)).epsilon(1e-12));
    CHECK(std::fabs(pf[1].value[0] - 1.0) < 1e-3);
    const auto ps = sample_profiles(second, alpha, eta, {2.0, 3.0});
    const double decay = ps[0].value[0] / ps[0].value[1];
    CHECK(decay == doctest::Approx((9.0 / 4.0) * std::exp(-eta / 4.0 + eta / 6.0)).epsilon(1e-12));
}

TEST_CASE("linearity of the families in their normalization") {
    const int K = 2;
    const auto unit = SeriesSolution::iterate_first_family(Rational(1), K);
    const auto scaled = SeriesSolution::iterate_first_family(Rational(-7, 5), K);
    for (int k = 0; k <= K; ++k) {
        CHECK(scaled.order(k).even == Rational(-7, 5) * unit.order(k).even);
        CHECK(scaled.order(k).odd == Rational(-7, 5) * unit.order(k).odd);
    }
}
