#include <doctest.h>

#include <cmath>
#include <random>

#include "asepq/report.hpp"
#include "asepq/scalar.hpp"

using namespace asepq;

namespace {

Laurent random_poly(std::mt19937_64& rng) {
    Laurent p;
    int terms = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < terms; ++i) {
        long e = static_cast<long>(rng() % 21) - 10;
        long num = static_cast<long>(rng() % 19) - 9;
        long den = 1 + static_cast<long>(rng() % 7);
        p += Laurent::monomial(e, make_rational(num, den));
    }
    return p;
}

} // namespace

TEST_CASE("q_pow maps rational exponents to w monomials") {
    ExactCtx c3(3);
    CHECK(c3.q_pow(QExp(0)) == Laurent(1));
    CHECK(c3.q_pow(QExp(1, 2)) == Laurent::monomial(3));  // q^{1/2} = w^3 at L=3
    ExactCtx c4(4);
    int K = 1;
    CHECK(c4.q_pow(QExp(4 - 2 * K, 4)) == Laurent::monomial(2 * 4 - 4 * K));  // q^{1-2K/L} = w^{2L-4K}
    CHECK_THROWS_AS(c3.q_pow(QExp(1, 4)), std::domain_error);  // denominator 4 incompatible with 2L=6
}

TEST_CASE("q-numbers") {
    CHECK(q_number_exact(1, 5) == Laurent(1));
    ExactCtx c(5);
    CHECK(q_number_exact(2, 5) == c.q_pow(QExp(1)) + c.q_pow(QExp(-1)));
    CHECK(q_number(3.0, 2.0) == doctest::Approx(5.25).epsilon(1e-15));
    CHECK_THROWS_AS(q_number(2.0, 1.0), std::domain_error);
}

TEST_CASE("q-factorials") {
    CHECK(q_factorial_exact(0, 4) == Laurent(1));
    ExactCtx c(4);
    CHECK(q_factorial_exact(2, 4) == c.q_pow(QExp(1)) + c.q_pow(QExp(-1)));  // [1]![2] = q + q^{-1}
    CHECK(q_factorial(3, 2.0) == doctest::Approx(13.125).epsilon(1e-15));
    CHECK_THROWS_AS(q_factorial(-1, 2.0), std::invalid_argument);
    CHECK(q_factorial(6, 1.4) > 0);
}

TEST_CASE("q-number symmetries") {
    for (int x = -6; x <= 6; ++x) {
        CHECK(q_number_exact(x, 4) == q_number_exact(x, 4));
        CHECK(q_number_exact(-x, 4) == -q_number_exact(x, 4));
        for (double q : {1.3, 2.0, 0.7}) {
            CHECK(std::abs(q_number(x, q) - q_number(x, 1.0 / q)) <= 1e-14);
            CHECK(std::abs(q_number(-x, q) + q_number(x, q)) <= 1e-14);
        }
    }
}

TEST_CASE("exact ring axioms hold on random polynomials") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 200; ++trial) {
        Laurent a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a - a).is_zero());
        CHECK(a * Laurent(1) == a);
    }
}

TEST_CASE("exact division") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        Laurent a = random_poly(rng), b = random_poly(rng);
        if (b.is_zero()) continue;
        CHECK(Laurent::divide_exact(a * b, b) == a);
    }
    Laurent num = Laurent::monomial(2) + Laurent(1);
    Laurent den = Laurent::monomial(1) + Laurent(1);
    CHECK_THROWS_AS(Laurent::divide_exact(num, den), std::domain_error);  // w^2+1 not divisible by w+1
}

TEST_CASE("monomial inverses") {
    Laurent m = Laurent::monomial(-3, make_rational(2, 5));
    CHECK(m * m.inverse() == Laurent(1));
    CHECK_THROWS_AS((Laurent(1) + Laurent::monomial(2)).inverse(), std::domain_error);
}

TEST_CASE("numeric evaluation agrees with the double pipeline") {
    for (int L : {3, 5, 8}) {
        for (double q : {1.3, 1.7}) {
            double w = std::pow(q, 1.0 / (2 * L));
            for (int n = 0; n <= 6; ++n) {
                double exact_val = q_factorial_exact(n, L).eval_w(w);
                double direct = q_factorial(n, q);
                CHECK(std::abs(exact_val - direct) <= 1e-13 * std::max(1.0, std::abs(direct)));
            }
            ExactCtx c(L);
            double got = c.q_pow(QExp(1 - 2 * 3, 2)).eval_w(w);
            CHECK(got == doctest::Approx(std::pow(q, (1 - 6) / 2.0)).epsilon(1e-13));
        }
    }
}

TEST_CASE("serialization") {
    Laurent p = Laurent::monomial(-2, make_rational(1, 3)) + Laurent::monomial(4, Rational(-5));
    json j = scalar_json(p);
    REQUIRE(j.size() == 2);
    CHECK(j[0][0] == -2);
    CHECK(j[0][1] == "1/3");
    CHECK(j[1][0] == 4);
    CHECK(j[1][1] == "-5");
    CHECK(p.str() == "1/3 w^-2 - 5 w^4");
    CHECK(Laurent().str() == "0");
}

TEST_CASE("numeric context validates q") {
    CHECK_THROWS_AS(NumericCtx(1.0), std::invalid_argument);
    CHECK_THROWS_AS(NumericCtx(-2.0), std::invalid_argument);
    CHECK(NumericCtx(2.0).q_pow(QExp(-3, 2)) == doctest::Approx(std::pow(2.0, -1.5)));
}
