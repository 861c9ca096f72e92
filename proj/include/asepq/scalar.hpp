#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "asepq/laurent.hpp"

namespace asepq {

// Rational exponent of q.  Every power of q in the model is q^r with
// denominator dividing 2L, so exact mode maps it to the integer w-exponent
// 2L*r of the formal unit w = q^{1/(2L)}.
struct QExp {
    std::int64_t num = 0;
    std::int64_t den = 1;

    QExp() = default;
    QExp(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("QExp: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        auto g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    QExp operator-() const { return QExp(-num, den); }
    friend QExp operator+(QExp a, QExp b) { return QExp(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend QExp operator*(QExp a, std::int64_t k) { return QExp(a.num * k, a.den); }
    bool operator==(const QExp&) const = default;
};

// Scalar traits: the two field realizations all templated code builds on.
template <class S>
struct ScalarOps;

template <>
struct ScalarOps<double> {
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static bool is_zero(double x) { return x == 0.0; }
    static double inv(double x) {
        if (x == 0.0) throw std::domain_error("division by zero");
        return 1.0 / x;
    }
    static double from_ratio(long n, long d) { return static_cast<double>(n) / static_cast<double>(d); }
    static double pow_int(double b, std::int64_t e) { return std::pow(b, static_cast<double>(e)); }
};

template <>
struct ScalarOps<Laurent> {
    static Laurent zero() { return Laurent(); }
    static Laurent one() { return Laurent(1); }
    static bool is_zero(const Laurent& x) { return x.is_zero(); }
    static Laurent inv(const Laurent& x) { return x.inverse(); }
    static Laurent from_ratio(long n, long d) { return Laurent(make_rational(n, d)); }
    static Laurent pow_int(const Laurent& b, std::int64_t e) { return b.pow(e); }
};

template <>
struct ScalarOps<std::complex<double>> {
    using C = std::complex<double>;
    static C zero() { return {0.0, 0.0}; }
    static C one() { return {1.0, 0.0}; }
    static bool is_zero(const C& x) { return x == C{0.0, 0.0}; }
    static C inv(const C& x) {
        if (is_zero(x)) throw std::domain_error("division by zero");
        return one() / x;
    }
    static C from_ratio(long n, long d) { return {static_cast<double>(n) / static_cast<double>(d), 0.0}; }
    static C pow_int(const C& b, std::int64_t e) { return std::pow(b, static_cast<double>(e)); }
};

// Mode context: realizes q^r and square roots of parameters.
struct NumericCtx {
    using Scalar = double;
    double q;

    explicit NumericCtx(double q_) : q(q_) {
        if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
        if (q == 1.0) throw std::invalid_argument("q must differ from 1");
    }
    double q_pow(QExp r) const { return std::pow(q, r.value()); }
    static double sqrt_of(double x) {
        if (!(x > 0.0)) throw std::domain_error("square root of non-positive parameter");
        return std::sqrt(x);
    }
};

struct ExactCtx {
    using Scalar = Laurent;
    int L;

    explicit ExactCtx(int L_) : L(L_) {
        if (L < 1) throw std::invalid_argument("exact context needs L >= 1");
    }
    // q^r = w^{2L r}; the w-exponent must be an integer.
    Laurent q_pow(QExp r) const {
        std::int64_t n = 2 * static_cast<std::int64_t>(L) * r.num;
        if (n % r.den != 0)
            throw std::domain_error("q-exponent denominator incompatible with 2L");
        return Laurent::monomial(n / r.den);
    }
    static Laurent sqrt_of(const Laurent& x) {
        if (!x.is_monomial() || x.terms()[0].second != 1)
            throw std::domain_error("exact square root requires a monic monomial");
        auto e = x.terms()[0].first;
        if (e % 2 != 0) throw std::domain_error("unrepresentable half power (odd w-exponent)");
        return Laurent::monomial(e / 2);
    }
};

// Symmetric q-number [x]_q = (q^x - q^{-x})/(q - q^{-1}).
inline double q_number(double x, double q) {
    if (q == 1.0) throw std::domain_error("q-number undefined at q = 1");
    return (std::pow(q, x) - std::pow(q, -x)) / (q - 1.0 / q);
}

// Exact integer q-number as the divided-difference polynomial
// q^{x-1} + q^{x-3} + ... + q^{1-x} (odd exponents of w times 2L).
inline Laurent q_number_exact(std::int64_t x, int L) {
    if (x == 0) return Laurent();
    bool neg = x < 0;
    std::int64_t n = neg ? -x : x;
    Laurent out;
    for (std::int64_t j = 0; j < n; ++j)
        out += Laurent::monomial(2 * static_cast<std::int64_t>(L) * (n - 1 - 2 * j));
    return neg ? -out : out;
}

inline double q_factorial(int n, double q) {
    if (n < 0) throw std::invalid_argument("q-factorial of negative integer");
    double acc = 1.0;
    for (int k = 1; k <= n; ++k) acc *= q_number(k, q);
    return acc;
}

inline Laurent q_factorial_exact(int n, int L) {
    if (n < 0) throw std::invalid_argument("q-factorial of negative integer");
    Laurent acc(1);
    for (int k = 1; k <= n; ++k) acc *= q_number_exact(k, L);
    return acc;
}

// Context-dispatched forms used by templated checks.
inline double q_number_c(const NumericCtx& c, std::int64_t x) { return q_number(static_cast<double>(x), c.q); }
inline Laurent q_number_c(const ExactCtx& c, std::int64_t x) { return q_number_exact(x, c.L); }
inline double q_factorial_c(const NumericCtx& c, int n) { return q_factorial(n, c.q); }
inline Laurent q_factorial_c(const ExactCtx& c, int n) { return q_factorial_exact(n, c.L); }

inline double divide_by(const double& num, const double& den) { return num / den; }
inline Laurent divide_by(const Laurent& num, const Laurent& den) { return Laurent::divide_exact(num, den); }

} // namespace asepq
