#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "selfspin/loglaurent.hpp"

#include <cmath>
#include <random>

using selfspin::LogLaurentPoly;
using selfspin::Rational;

namespace {

LogLaurentPoly s_pow(long long j) { return LogLaurentPoly::power(j); }

// Random element with |j| <= 6, p <= 3 and small rational coefficients.
LogLaurentPoly random_poly(std::mt19937& rng) {
    std::uniform_int_distribution<int> n_terms(1, 6);
    std::uniform_int_distribution<long long> exp_dist(-6, 6);
    std::uniform_int_distribution<int> log_dist(0, 3);
    std::uniform_int_distribution<int> num_dist(-12, 12);
    std::uniform_int_distribution<int> den_dist(1, 9);
    LogLaurentPoly out;
    const int n = n_terms(rng);
    for (int i = 0; i < n; ++i)
        out = out + LogLaurentPoly::term(Rational(num_dist(rng), den_dist(rng)),
                                         exp_dist(rng), log_dist(rng));
    return out;
}

}  // namespace

TEST_CASE("addition: inverses, merging, disjoint keys") {
    CHECK((s_pow(-1) + LogLaurentPoly::term(Rational(-1), -1)).is_zero());

    const auto merged = (LogLaurentPoly::constant(2) + s_pow(1)) + Rational(3) * s_pow(1);
    CHECK(merged == LogLaurentPoly::constant(2) + Rational(4) * s_pow(1));

    // Distinct (j,p) keys pass through a sum untouched.
    const auto a = LogLaurentPoly::term(Rational(1, 2), -1) + LogLaurentPoly::term(Rational(5), 0, 1);
    const auto b = LogLaurentPoly::term(Rational(-3), 2) + LogLaurentPoly::term(Rational(7), -3, 2);
    const auto sum = a + b;
    CHECK(sum.term_count() == 4);
    CHECK(sum.coefficient(-1) == Rational(1, 2));
    CHECK(sum.coefficient(-3, 2) == Rational(7));
}

TEST_CASE("multiplication: exponents and log powers add") {
    CHECK(s_pow(-1) * LogLaurentPoly::term(Rational(1), 0, 1) ==
          LogLaurentPoly::term(Rational(1), -1, 1));

    const auto one_minus_sinv = LogLaurentPoly::constant(1) - s_pow(-1);
    CHECK(one_minus_sinv * one_minus_sinv ==
          LogLaurentPoly::constant(1) - Rational(2) * s_pow(-1) + s_pow(-2));

    const auto tri = s_pow(-1) - Rational(2) * LogLaurentPoly::constant(1) + s_pow(1);
    CHECK(tri * s_pow(1) ==
          LogLaurentPoly::constant(1) - Rational(2) * s_pow(1) + s_pow(2));
}

TEST_CASE("antiderivative: closed recursion") {
    CHECK(s_pow(-1).antiderivative() == LogLaurentPoly::term(Rational(1), 0, 1));

    // s ln s -> (s^2/2) ln s - s^2/4
    const auto got = LogLaurentPoly::term(Rational(1), 1, 1).antiderivative();
    CHECK(got == LogLaurentPoly::term(Rational(1, 2), 2, 1) + LogLaurentPoly::term(Rational(-1, 4), 2));
    CHECK(got.derivative() == LogLaurentPoly::term(Rational(1), 1, 1));

    CHECK((s_pow(2) - s_pow(1)).antiderivative() ==
          Rational(1, 3) * s_pow(3) - Rational(1, 2) * s_pow(2));
}

TEST_CASE("antiderivative vanishing at s=1") {
    const auto f = (s_pow(2) - s_pow(1)).antiderivative_vanishing_at_1();
    CHECK(f == Rational(1, 3) * s_pow(3) - Rational(1, 2) * s_pow(2) +
                   LogLaurentPoly::constant(Rational(1, 6)));
    CHECK(f.value_at_1() == 0);

    CHECK(s_pow(-1).antiderivative_vanishing_at_1() == LogLaurentPoly::term(Rational(1), 0, 1));
    CHECK(LogLaurentPoly::constant(1).antiderivative_vanishing_at_1() ==
          s_pow(1) - LogLaurentPoly::constant(1));
}

TEST_CASE("derivative examples") {
    CHECK(LogLaurentPoly::term(Rational(1), 0, 1).derivative() == s_pow(-1));
    const auto f = Rational(1, 3) * s_pow(3) - Rational(1, 2) * s_pow(2) +
                   LogLaurentPoly::constant(Rational(1, 6));
    CHECK(f.derivative() == s_pow(2) - s_pow(1));
    CHECK(s_pow(-2).derivative() == Rational(-2) * s_pow(-3));
}

TEST_CASE("evaluation") {
    const auto f = s_pow(-2) - LogLaurentPoly::constant(3) + Rational(2) * s_pow(1);
    CHECK(f.eval(1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(LogLaurentPoly::term(Rational(1), 0, 1).eval(1.0) == doctest::Approx(0.0));
    const auto g = s_pow(-1) - Rational(2) * LogLaurentPoly::constant(1) + s_pow(1);
    CHECK(g.eval(2.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(f.eval(0.0), std::invalid_argument);
    CHECK_THROWS_AS(f.eval(-2.0), std::invalid_argument);
}

TEST_CASE("derivative inverts antiderivative exactly (randomized)") {
    std::mt19937 rng(20240517);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_poly(rng);
        CHECK(a.antiderivative().derivative() == a);
        CHECK(a.antiderivative_vanishing_at_1().value_at_1() == 0);
    }
}

TEST_CASE("ring laws (randomized, exact)") {
    std::mt19937 rng(987654321);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = random_poly(rng);
        const auto b = random_poly(rng);
        const auto c = random_poly(rng);
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
    }
}

TEST_CASE("eval is a ring homomorphism within 1e-12") {
    std::mt19937 rng(5150);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_poly(rng);
        const auto b = random_poly(rng);
        for (double s : {0.1, 0.5, 1.0, 2.0}) {
            const double lhs = (a * b).eval(s);
            const double rhs = a.eval(s) * b.eval(s);
            const double scale = std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
            CHECK(std::fabs(lhs - rhs) / scale < 1e-12);
        }
    }
}

TEST_CASE("serialization round trip and canonical form") {
    const auto f = LogLaurentPoly::term(Rational(-1, 12), -2) +
                   LogLaurentPoly::term(Rational(1, 2), 2, 1) +
                   LogLaurentPoly::constant(Rational(9, 1));
    CHECK(f.str() == "-1/12*s^-2 + 9/1 + 1/2*s^2*L^1");
    CHECK(LogLaurentPoly::parse(f.str()) == f);
    CHECK(LogLaurentPoly::parse("0") == LogLaurentPoly::zero());
    CHECK(LogLaurentPoly::zero().str() == "0");

    std::mt19937 rng(777);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = random_poly(rng);
        CHECK(LogLaurentPoly::parse(a.str()) == a);
    }
}

TEST_CASE("no zero coefficients survive any operation") {
    std::mt19937 rng(31337);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = random_poly(rng);
        const auto diff = a - a;
        CHECK(diff.is_zero());
        const auto annihilated = a * LogLaurentPoly::zero();
        CHECK(annihilated.is_zero());
        const auto deriv = a.derivative();
        for (const auto& [key, c] : deriv.terms()) { (void)key; CHECK(c != 0); }
    }
}
