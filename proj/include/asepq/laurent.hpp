#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace asepq {

using Rational = mpq_class;

// mpq_class(n, d) does not canonicalize; always build ratios through this.
inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Laurent polynomial sum_m c_m w^m with exact rational coefficients.
// Canonical form: terms sorted by strictly increasing exponent, no zero
// coefficients stored.  The formal unit is w = q^{1/(2L)} of the enclosing
// exact-mode context; this type itself is context-free.
class Laurent {
public:
    using Exp = std::int64_t;
    using Term = std::pair<Exp, Rational>;

    Laurent() = default;
    Laurent(int v) { if (v != 0) t_.emplace_back(0, Rational(v)); }
    explicit Laurent(const Rational& c) { if (c != 0) t_.emplace_back(0, c); }

    static Laurent monomial(Exp e, Rational c = Rational(1)) {
        Laurent p;
        if (c != 0) p.t_.emplace_back(e, std::move(c));
        return p;
    }

    bool is_zero() const { return t_.empty(); }
    bool is_one() const { return t_.size() == 1 && t_[0].first == 0 && t_[0].second == 1; }
    bool is_monomial() const { return t_.size() == 1; }
    std::size_t term_count() const { return t_.size(); }
    const std::vector<Term>& terms() const { return t_; }

    Exp min_exp() const { require_nonzero(); return t_.front().first; }
    Exp max_exp() const { require_nonzero(); return t_.back().first; }

    friend Laurent operator+(const Laurent& a, const Laurent& b) { return merged(a, b, +1); }
    friend Laurent operator-(const Laurent& a, const Laurent& b) { return merged(a, b, -1); }

    Laurent operator-() const {
        Laurent p = *this;
        for (auto& [e, c] : p.t_) c = -c;
        return p;
    }

    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        Laurent out;
        if (a.is_zero() || b.is_zero()) return out;
        if (a.is_monomial()) return b.scaled(a.t_[0].first, a.t_[0].second);
        if (b.is_monomial()) return a.scaled(b.t_[0].first, b.t_[0].second);
        // merge a-scaled copies of b, smallest first
        for (const auto& [ea, ca] : a.t_) out = out + b.scaled(ea, ca);
        return out;
    }

    Laurent& operator+=(const Laurent& o) { *this = *this + o; return *this; }
    Laurent& operator-=(const Laurent& o) { *this = *this - o; return *this; }
    Laurent& operator*=(const Laurent& o) { *this = *this * o; return *this; }

    bool operator==(const Laurent& o) const { return t_ == o.t_; }

    // w^e * c * (*this)
    Laurent scaled(Exp e, const Rational& c) const {
        Laurent out;
        if (c == 0) return out;
        out.t_.reserve(t_.size());
        for (const auto& [ee, cc] : t_) out.t_.emplace_back(ee + e, cc * c);
        return out;
    }

    // Only units (monomials) are invertible in the Laurent ring.
    Laurent inverse() const {
        if (!is_monomial()) throw std::domain_error("Laurent inverse: not a monomial");
        return monomial(-t_[0].first, Rational(1) / t_[0].second);
    }

    Laurent pow(long n) const {
        if (n < 0) return inverse().pow(-n);
        Laurent acc(1), base = *this;
        while (n > 0) {
            if (n & 1) acc *= base;
            n >>= 1;
            if (n > 0) base *= base;
        }
        return acc;
    }

    // Exact division; throws if the remainder is nonzero.
    static Laurent divide_exact(const Laurent& num, const Laurent& den) {
        if (den.is_zero()) throw std::domain_error("Laurent division by zero");
        if (num.is_zero()) return Laurent();
        if (den.is_monomial()) return num.scaled(-den.t_[0].first, Rational(1) / den.t_[0].second);
        Laurent rem = num, quot;
        const Exp de = den.max_exp();
        const Rational& dc = den.t_.back().second;
        // an exact quotient has minimum exponent num.min - den.min
        const Exp quot_floor = num.min_exp() - den.min_exp();
        while (!rem.is_zero() && rem.max_exp() - de >= quot_floor) {
            Exp e = rem.max_exp() - de;
            Rational c = rem.t_.back().second / dc;
            quot = quot + monomial(e, c);
            rem = rem - den.scaled(e, c);
        }
        if (!rem.is_zero()) throw std::domain_error("Laurent division: nonzero remainder");
        return quot;
    }

    // Substitute a numeric value for w.
    double eval_w(double w) const {
        double acc = 0;
        for (const auto& [e, c] : t_) acc += c.get_d() * std::pow(w, static_cast<double>(e));
        return acc;
    }

    std::string str() const {
        if (t_.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < t_.size(); ++i) {
            const auto& [e, c] = t_[i];
            if (i) s += c >= 0 ? " + " : " - ";
            else if (c < 0) s += "-";
            Rational a = abs(c);
            std::string cs = a.get_str();
            if (e == 0) s += cs;
            else {
                if (cs != "1") s += cs + " ";
                s += "w^" + std::to_string(e);
            }
        }
        return s;
    }

private:
    std::vector<Term> t_;

    void require_nonzero() const {
        if (t_.empty()) throw std::domain_error("zero polynomial has no degree");
    }

    static Laurent merged(const Laurent& a, const Laurent& b, int sgn) {
        Laurent out;
        out.t_.reserve(a.t_.size() + b.t_.size());
        std::size_t i = 0, j = 0;
        while (i < a.t_.size() || j < b.t_.size()) {
            bool ta = i < a.t_.size();
            bool tb = j < b.t_.size();
            if (ta && (!tb || a.t_[i].first < b.t_[j].first)) {
                out.t_.push_back(a.t_[i++]);
            } else if (tb && (!ta || b.t_[j].first < a.t_[i].first)) {
                auto [e, c] = b.t_[j++];
                out.t_.emplace_back(e, sgn > 0 ? c : Rational(-c));
            } else {
                Rational c;
                if (sgn > 0)
                    c = a.t_[i].second + b.t_[j].second;
                else
                    c = a.t_[i].second - b.t_[j].second;
                if (c != 0) out.t_.emplace_back(a.t_[i].first, std::move(c));
                ++i; ++j;
            }
        }
        return out;
    }
};

} // namespace asepq
