#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "asepq/sparse.hpp"
#include "asepq/statespace.hpp"

namespace asepq {

// Full 2^L x 2^L construction is capped; larger lattices go through the
// sector-direct builders.
inline constexpr int kFullSpaceMaxL = 14;

inline FullBasis full_basis(int L) {
    if (L > kFullSpaceMaxL) throw std::invalid_argument("full-space construction limited to L <= 14");
    return FullBasis(L);
}

// 2x2 single-site operator, m[a][b] = <a|u|b> with 0 = empty, 1 = occupied.
template <class S>
struct LocalOperator {
    std::array<std::array<S, 2>, 2> m;

    friend LocalOperator operator*(const LocalOperator& u, const LocalOperator& v) {
        LocalOperator out;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                out.m[a][b] = u.m[a][0] * v.m[0][b] + u.m[a][1] * v.m[1][b];
        return out;
    }
    friend LocalOperator operator+(const LocalOperator& u, const LocalOperator& v) {
        LocalOperator out;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) out.m[a][b] = u.m[a][b] + v.m[a][b];
        return out;
    }
    bool operator==(const LocalOperator&) const = default;
};

namespace local {

template <class S> LocalOperator<S> zero() {
    LocalOperator<S> u;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) u.m[a][b] = ScalarOps<S>::zero();
    return u;
}
template <class S> LocalOperator<S> identity() {
    auto u = zero<S>();
    u.m[0][0] = u.m[1][1] = ScalarOps<S>::one();
    return u;
}
// sigma^+ annihilates acting right: |1) -> |0).
template <class S> LocalOperator<S> sigma_plus() {
    auto u = zero<S>();
    u.m[0][1] = ScalarOps<S>::one();
    return u;
}
// sigma^- creates acting right: |0) -> |1).
template <class S> LocalOperator<S> sigma_minus() {
    auto u = zero<S>();
    u.m[1][0] = ScalarOps<S>::one();
    return u;
}
template <class S> LocalOperator<S> number() {
    auto u = zero<S>();
    u.m[1][1] = ScalarOps<S>::one();
    return u;
}
template <class S> LocalOperator<S> vacancy() {
    auto u = zero<S>();
    u.m[0][0] = ScalarOps<S>::one();
    return u;
}
template <class S> LocalOperator<S> sigma_x() {
    auto u = zero<S>();
    u.m[0][1] = u.m[1][0] = ScalarOps<S>::one();
    return u;
}
template <class S> LocalOperator<S> sigma_z() {
    auto u = zero<S>();
    u.m[0][0] = ScalarOps<S>::one();
    u.m[1][1] = S(-1) * ScalarOps<S>::one();
    return u;
}
// sigma^y needs i; only the complex instantiation carries it.
inline LocalOperator<std::complex<double>> sigma_y() {
    using C = std::complex<double>;
    LocalOperator<C> u;
    u.m[0][0] = u.m[1][1] = C(0, 0);
    u.m[0][1] = C(0, -1);
    u.m[1][0] = C(0, 1);
    return u;
}

} // namespace local

// u_k = 1^{(k-1)} (x) u (x) 1^{(L-k)} in the binary basis.
template <class S>
SparseMatrix<S> embed_local(const LocalOperator<S>& u, int k, int L) {
    FullBasis basis = full_basis(L);
    if (k < 1 || k > L) throw std::out_of_range("site index out of range");
    std::vector<Triplet<S>> ts;
    for (std::uint64_t m = 0; m < basis.dim(); ++m) {
        int b = static_cast<int>((m >> (k - 1)) & 1u);
        for (int a = 0; a < 2; ++a) {
            const S& v = u.m[a][b];
            if (ScalarOps<S>::is_zero(v)) continue;
            std::uint64_t mp = (m & ~(std::uint64_t(1) << (k - 1))) | (std::uint64_t(a) << (k - 1));
            ts.push_back({static_cast<Index>(mp), static_cast<Index>(m), v});
        }
    }
    return SparseMatrix<S>::from_triplets(static_cast<Index>(basis.dim()), static_cast<Index>(basis.dim()), std::move(ts));
}

template <class S, class B>
SparseMatrix<S> make_diagonal(const B& basis, const std::function<S(std::uint64_t)>& f) {
    std::vector<S> d;
    d.reserve(basis.dim());
    for (std::uint64_t i = 0; i < basis.dim(); ++i) d.push_back(f(basis.unrank(i)));
    return SparseMatrix<S>::diagonal(std::move(d));
}

namespace detail {

inline int occ_bit(std::uint64_t m, int k) { return static_cast<int>((m >> (k - 1)) & 1u); }
inline int popcount_below(std::uint64_t m, int k) {
    return static_cast<int>(__builtin_popcountll(m & ((std::uint64_t(1) << (k - 1)) - 1)));
}

// Hopping matrix on the directed bond (a,b):
//   -rate [ a_hop sigma^+_a sigma^-_b - q n_a v_b
//           + a_hop^{-1} sigma^-_a sigma^+_b - q^{-1} v_a n_b ].
// Bulk bonds use a_hop = alpha, the (L,1) bond uses a_hop = alpha*beta.
template <class S, class B>
void add_bond(std::vector<Triplet<S>>& ts, const B& basis, int a, int b,
              const S& q, const S& a_hop, const S& rate) {
    const S qinv = ScalarOps<S>::inv(q);
    const S ainv = ScalarOps<S>::inv(a_hop);
    const S hop_ab = S(-1) * rate * a_hop;
    const S hop_ba = S(-1) * rate * ainv;
    const S diag_ab = rate * q;
    const S diag_ba = rate * qinv;
    for (std::uint64_t i = 0; i < basis.dim(); ++i) {
        std::uint64_t m = basis.unrank(i);
        int na = occ_bit(m, a), nb = occ_bit(m, b);
        if (na == 1 && nb == 0) {
            std::uint64_t mp = (m & ~(std::uint64_t(1) << (a - 1))) | (std::uint64_t(1) << (b - 1));
            ts.push_back({static_cast<Index>(basis.rank(mp)), static_cast<Index>(i), hop_ab});
            ts.push_back({static_cast<Index>(i), static_cast<Index>(i), diag_ab});
        } else if (na == 0 && nb == 1) {
            std::uint64_t mp = (m | (std::uint64_t(1) << (a - 1))) & ~(std::uint64_t(1) << (b - 1));
            ts.push_back({static_cast<Index>(basis.rank(mp)), static_cast<Index>(i), hop_ba});
            ts.push_back({static_cast<Index>(i), static_cast<Index>(i), diag_ba});
        }
    }
}

} // namespace detail

enum class Boundary { periodic, reflecting };

template <class S>
struct GeneratorSpec {
    int L = 0;
    S q = ScalarOps<S>::one();
    S alpha = ScalarOps<S>::one();
    S beta = ScalarOps<S>::one();   // ignored for reflecting boundaries
    Boundary boundary = Boundary::periodic;
    S rate = ScalarOps<S>::one();   // the time-scale constant of the rates
};

template <class S, class B>
SparseMatrix<S> hopping_bulk_on(const B& basis, int k, const S& q, const S& alpha, const S& rate) {
    if (k < 1 || k >= basis.L()) throw std::out_of_range("bulk bond index out of range");
    std::vector<Triplet<S>> ts;
    detail::add_bond(ts, basis, k, k + 1, q, alpha, rate);
    Index d = static_cast<Index>(basis.dim());
    return SparseMatrix<S>::from_triplets(d, d, std::move(ts));
}

template <class S, class B>
SparseMatrix<S> hopping_boundary_on(const B& basis, const S& q, const S& alpha, const S& beta, const S& rate) {
    if (basis.L() < 2) throw std::invalid_argument("boundary bond needs L >= 2");
    std::vector<Triplet<S>> ts;
    detail::add_bond(ts, basis, basis.L(), 1, q, alpha * beta, rate);
    Index d = static_cast<Index>(basis.dim());
    return SparseMatrix<S>::from_triplets(d, d, std::move(ts));
}

template <class S>
SparseMatrix<S> hopping_bulk(int k, const S& q, const S& alpha, const S& rate, int L) {
    return hopping_bulk_on(full_basis(L), k, q, alpha, rate);
}

template <class S>
SparseMatrix<S> hopping_boundary(const S& q, const S& alpha, const S& beta, const S& rate, int L) {
    return hopping_boundary_on(full_basis(L), q, alpha, beta, rate);
}

template <class S, class B>
SparseMatrix<S> generator_on(const B& basis, const GeneratorSpec<S>& spec) {
    if (spec.L != basis.L()) throw std::invalid_argument("spec/basis lattice size mismatch");
    if (spec.L < 2) throw std::invalid_argument("generator needs L >= 2");
    std::vector<Triplet<S>> ts;
    for (int k = 1; k < spec.L; ++k) detail::add_bond(ts, basis, k, k + 1, spec.q, spec.alpha, spec.rate);
    if (spec.boundary == Boundary::periodic)
        detail::add_bond(ts, basis, spec.L, 1, spec.q, spec.alpha * spec.beta, spec.rate);
    Index d = static_cast<Index>(basis.dim());
    return SparseMatrix<S>::from_triplets(d, d, std::move(ts));
}

// H(q,alpha,beta) resp. Htilde(q,alpha) on the full 2^L space.
template <class S>
SparseMatrix<S> build_generator(const GeneratorSpec<S>& spec) {
    return generator_on(full_basis(spec.L), spec);
}

// Sector-direct construction, usable far beyond the full-space cap.
template <class S>
SparseMatrix<S> build_sector_generator(const GeneratorSpec<S>& spec, int N) {
    return generator_on(SectorBasis(spec.L, N), spec);
}

// V(gamma) = gamma^{-(1/2) sum_k (2k-L-1) n_k}; takes gamma^{1/2}.
template <class S, class B>
SparseMatrix<S> diagonal_V_on(const B& basis, const S& gamma_sqrt) {
    if (ScalarOps<S>::is_zero(gamma_sqrt)) throw std::invalid_argument("V(0) is singular");
    const int L = basis.L();
    return make_diagonal<S>(basis, [&](std::uint64_t m) {
        std::int64_t e = 0;
        for (int k = 1; k <= L; ++k)
            if (detail::occ_bit(m, k)) e += 2 * k - L - 1;
        return ScalarOps<S>::pow_int(gamma_sqrt, -e);
    });
}

template <class S>
SparseMatrix<S> diagonal_V(const S& gamma_sqrt, int L) {
    return diagonal_V_on(full_basis(L), gamma_sqrt);
}

// W(z) = z^{N-hat}.
template <class S, class B>
SparseMatrix<S> number_W_on(const B& basis, const S& z) {
    if (ScalarOps<S>::is_zero(z)) throw std::invalid_argument("W(0) is singular");
    return make_diagonal<S>(basis, [&](std::uint64_t m) {
        return ScalarOps<S>::pow_int(z, __builtin_popcountll(m));
    });
}

template <class S>
SparseMatrix<S> number_W(const S& z, int L) {
    return number_W_on(full_basis(L), z);
}

// Space reflection R-hat: |eta> -> |R(eta)>.
template <class S, class B>
SparseMatrix<S> reflection_operator_on(const B& basis) {
    const int L = basis.L();
    std::vector<Triplet<S>> ts;
    for (std::uint64_t i = 0; i < basis.dim(); ++i) {
        std::uint64_t m = basis.unrank(i), mr = 0;
        for (int k = 1; k <= L; ++k)
            if (detail::occ_bit(m, k)) mr |= std::uint64_t(1) << (L - k);
        ts.push_back({static_cast<Index>(basis.rank(mr)), static_cast<Index>(i), ScalarOps<S>::one()});
    }
    Index d = static_cast<Index>(basis.dim());
    return SparseMatrix<S>::from_triplets(d, d, std::move(ts));
}

template <class S>
SparseMatrix<S> reflection_operator(int L) {
    return reflection_operator_on<S>(full_basis(L));
}

// 1_N op 1_N rewritten in the sector basis.
template <class S>
SparseMatrix<S> project_sector(const SparseMatrix<S>& op, int L, int N) {
    FullBasis fb = full_basis(L);
    if (op.rows() != static_cast<Index>(fb.dim()) || op.cols() != op.rows())
        throw std::invalid_argument("project_sector expects a full-space square operator");
    SectorBasis sb(L, N);
    std::vector<Triplet<S>> ts;
    op.for_each([&](Index r, Index c, const S& v) {
        std::uint64_t mr = static_cast<std::uint64_t>(r), mc = static_cast<std::uint64_t>(c);
        if (sb.contains(mr) && sb.contains(mc))
            ts.push_back({static_cast<Index>(sb.rank(mr)), static_cast<Index>(sb.rank(mc)), v});
    });
    Index d = static_cast<Index>(sb.dim());
    return SparseMatrix<S>::from_triplets(d, d, std::move(ts));
}

enum class Sign { plus, minus };

// S_k^pm(q,alpha) = alpha^{pm(L+1-2k)/2}
//                   q^{(1/2)(sum_{i<k} sigma^z_i - sum_{i>k} sigma^z_i)} sigma^pm_k,
// parameterized by the square roots qh = q^{1/2}, ah = alpha^{1/2}.
template <class S>
SparseMatrix<S> uq_site(Sign sign, int k, const S& qh, const S& ah, int L) {
    FullBasis basis = full_basis(L);
    if (k < 1 || k > L) throw std::out_of_range("site index out of range");
    const int s = sign == Sign::plus ? +1 : -1;
    const S pref = ScalarOps<S>::pow_int(ah, s * (L + 1 - 2 * k));
    std::vector<Triplet<S>> ts;
    for (std::uint64_t m = 0; m < basis.dim(); ++m) {
        int nk = detail::occ_bit(m, k);
        if ((sign == Sign::plus && nk == 0) || (sign == Sign::minus && nk == 1)) continue;
        std::uint64_t mp = m ^ (std::uint64_t(1) << (k - 1));
        int nl = detail::popcount_below(m, k);
        int nr = __builtin_popcountll(m) - nl - nk;
        // sum_{i<k} sigma^z_i - sum_{i>k} sigma^z_i = (k-1) - 2 nl - (L-k) + 2 nr
        std::int64_t e = (k - 1) - (L - k) - 2 * nl + 2 * nr;
        ts.push_back({static_cast<Index>(mp), static_cast<Index>(m), pref * ScalarOps<S>::pow_int(qh, e)});
    }
    Index d = static_cast<Index>(basis.dim());
    return SparseMatrix<S>::from_triplets(d, d, std::move(ts));
}

// S^pm(q,alpha) = sum_k S_k^pm(q,alpha).
template <class S>
SparseMatrix<S> uq_generator(Sign sign, const S& qh, const S& ah, int L) {
    Index d = static_cast<Index>(full_basis(L).dim());
    SparseMatrix<S> acc(d, d);
    for (int k = 1; k <= L; ++k) acc = acc + uq_site(sign, k, qh, ah, L);
    return acc;
}

// alpha^{-+(L+1)/2} S^pm(q,alpha): the same operator up to a global invertible
// monomial, with integer alpha exponents (site k carries alpha^{-+k}).  Exact
// mode uses this form whenever alpha^{1/2} is unrepresentable.
template <class S>
SparseMatrix<S> uq_generator_rescaled(Sign sign, const S& qh, const S& alpha, int L) {
    FullBasis basis = full_basis(L);
    const int s = sign == Sign::plus ? +1 : -1;
    std::vector<Triplet<S>> ts;
    for (int k = 1; k <= L; ++k) {
        const S pref = ScalarOps<S>::pow_int(alpha, -s * k);
        for (std::uint64_t m = 0; m < basis.dim(); ++m) {
            int nk = detail::occ_bit(m, k);
            if ((sign == Sign::plus && nk == 0) || (sign == Sign::minus && nk == 1)) continue;
            std::uint64_t mp = m ^ (std::uint64_t(1) << (k - 1));
            int nl = detail::popcount_below(m, k);
            int nr = __builtin_popcountll(m) - nl - nk;
            std::int64_t e = (k - 1) - (L - k) - 2 * nl + 2 * nr;
            ts.push_back({static_cast<Index>(mp), static_cast<Index>(m), pref * ScalarOps<S>::pow_int(qh, e)});
        }
    }
    Index d = static_cast<Index>(basis.dim());
    return SparseMatrix<S>::from_triplets(d, d, std::move(ts));
}

// S^z = (1/2) sum_k sigma^z_k, diagonal (L - 2N)/2.
template <class S, class B>
SparseMatrix<S> sz_operator_on(const B& basis) {
    const int L = basis.L();
    return make_diagonal<S>(basis, [&](std::uint64_t m) {
        return ScalarOps<S>::from_ratio(L - 2 * __builtin_popcountll(m), 2);
    });
}

// q^{c * 2 S^z + c0} as a diagonal, from integer c, c0.
template <class S, class B>
SparseMatrix<S> q_two_sz_diag(const B& basis, const S& q, std::int64_t c, std::int64_t c0) {
    const int L = basis.L();
    return make_diagonal<S>(basis, [&](std::uint64_t m) {
        std::int64_t two_sz = L - 2 * static_cast<std::int64_t>(__builtin_popcountll(m));
        return ScalarOps<S>::pow_int(q, c * two_sz + c0);
    });
}

// pi(eta) = e^{mu N} q^{2 sum x_i} with e^{mu} realized as q^{mu_exp}.
template <class Ctx>
typename Ctx::Scalar reversible_weight(const Configuration& eta, const Ctx& ctx, QExp mu_exp) {
    std::int64_t sum_x = 0;
    for (int k = 1; k <= eta.L; ++k)
        if (eta.occ(k)) sum_x += k;
    return ctx.q_pow(mu_exp * eta.particles() + QExp(2 * sum_x));
}

// pi-hat as a diagonal matrix (mu as q-exponent).
template <class Ctx, class B>
SparseMatrix<typename Ctx::Scalar> reversible_measure_diag(const B& basis, const Ctx& ctx, QExp mu_exp) {
    using S = typename Ctx::Scalar;
    const int L = basis.L();
    return make_diagonal<S>(basis, [&](std::uint64_t m) {
        return reversible_weight(Configuration(m, L), ctx, mu_exp);
    });
}

} // namespace asepq
