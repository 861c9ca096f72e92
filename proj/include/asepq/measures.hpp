#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "asepq/operators.hpp"

namespace asepq {

enum class SamKind { I, II };

struct SAMSpec {
    int L = 0;
    std::vector<int> shocks;   // strictly increasing sites
    SamKind kind = SamKind::I;

    int K() const { return static_cast<int>(shocks.size()); }

    void validate() const {
        if (L < 1) throw std::invalid_argument("SAM needs L >= 1");
        for (std::size_t i = 0; i < shocks.size(); ++i) {
            if (shocks[i] < 1 || shocks[i] > L) throw std::invalid_argument("shock site out of range");
            if (i > 0 && shocks[i] <= shocks[i - 1])
                throw std::invalid_argument("shock sites must be strictly increasing (no duplicates)");
        }
    }
};

// |z> = |z)^{(x) L}: coefficient z^{N(eta)}.
template <class S, class B>
std::vector<S> bernoulli_vector_on(const B& basis, const S& z) {
    std::vector<S> v;
    v.reserve(basis.dim());
    for (std::uint64_t i = 0; i < basis.dim(); ++i)
        v.push_back(ScalarOps<S>::pow_int(z, __builtin_popcountll(basis.unrank(i))));
    return v;
}

template <class S>
std::vector<S> bernoulli_vector(const S& z, int L) {
    return bernoulli_vector_on(full_basis(L), z);
}

// Unnormalized SAM coefficients.  Kind I applies
//   prod_j z^{-1} q^{-N_{<x_j} + N_{>x_j}} n_{x_j}
// to |z>; kind II multiplies in q^{(2/L) sum_l (x_j - l) n_l} per shock,
// realized through q1L = q^{1/L}.
template <class S, class B>
std::vector<S> sam_vector_on(const B& basis, const SAMSpec& spec, const S& z, const S& q, const S& q1L) {
    spec.validate();
    if (basis.L() != spec.L) throw std::invalid_argument("basis/spec lattice size mismatch");
    std::vector<S> v(basis.dim(), ScalarOps<S>::zero());
    for (std::uint64_t i = 0; i < basis.dim(); ++i) {
        std::uint64_t m = basis.unrank(i);
        Configuration eta(m, spec.L);
        bool occupied = true;
        for (int x : spec.shocks)
            if (!eta.occ(x)) { occupied = false; break; }
        if (!occupied) continue;
        int n = eta.particles();
        std::int64_t qe = 0, fe = 0;
        for (int x : spec.shocks) {
            int nl = left_count(eta, x);
            int nr = n - nl - 1;
            qe += nr - nl;
            if (spec.kind == SamKind::II)
                for (int l = 1; l <= spec.L; ++l)
                    if (eta.occ(l)) fe += 2 * (x - l);
        }
        // the K shock occupations each absorb one factor of z
        S c = ScalarOps<S>::pow_int(z, n - spec.K()) * ScalarOps<S>::pow_int(q, qe);
        if (spec.kind == SamKind::II) c = c * ScalarOps<S>::pow_int(q1L, fe);
        v[i] = c;
    }
    return v;
}

template <class S>
std::vector<S> sam_vector(const SAMSpec& spec, const S& z, const S& q, const S& q1L) {
    return sam_vector_on(full_basis(spec.L), spec, z, q, q1L);
}

// Local fugacities; nullopt marks a deterministically occupied shock site.
struct FugacityProfile {
    int L = 0;
    double z = 1.0;
    std::vector<int> shocks;
    std::vector<std::optional<double>> zk;

    double density(int k) const {
        const auto& f = zk.at(static_cast<std::size_t>(k - 1));
        if (!f) return 1.0;
        return *f / (1.0 + *f);
    }
};

// Closed-form SAM fugacities: z_i = z q^{2 l(i) - K} on the l-th open interval
// between shocks, kind II carrying the extra q^{(2/L) sum_j (x_j - i)}.
inline FugacityProfile fugacity_profile(const SAMSpec& spec, double z, double q) {
    spec.validate();
    FugacityProfile p;
    p.L = spec.L;
    p.z = z;
    p.shocks = spec.shocks;
    const int K = spec.K();
    for (int i = 1; i <= spec.L; ++i) {
        if (std::find(spec.shocks.begin(), spec.shocks.end(), i) != spec.shocks.end()) {
            p.zk.emplace_back(std::nullopt);
            continue;
        }
        int l = static_cast<int>(std::count_if(spec.shocks.begin(), spec.shocks.end(),
                                               [i](int x) { return x < i; }));
        double zi = z * std::pow(q, 2 * l - K);
        if (spec.kind == SamKind::II) {
            std::int64_t s = 0;
            for (int x : spec.shocks) s += x - i;
            zi *= std::pow(q, 2.0 * static_cast<double>(s) / spec.L);
        }
        p.zk.emplace_back(zi);
    }
    return p;
}

// 1_N v gathered into the sector basis.
template <class S>
std::vector<S> restrict_particles(const std::vector<S>& v, int L, int N) {
    FullBasis fb = full_basis(L);
    if (v.size() != fb.dim()) throw std::invalid_argument("restrict_particles expects a full-space vector");
    SectorBasis sb(L, N);
    std::vector<S> out;
    out.reserve(sb.dim());
    for (std::uint64_t i = 0; i < sb.dim(); ++i) out.push_back(v[sb.unrank(i)]);
    return out;
}

template <class S>
std::vector<S> embed_sector(const std::vector<S>& v, int L, int N) {
    SectorBasis sb(L, N);
    if (v.size() != sb.dim()) throw std::invalid_argument("embed_sector dimension mismatch");
    std::vector<S> out(full_basis(L).dim(), ScalarOps<S>::zero());
    for (std::uint64_t i = 0; i < sb.dim(); ++i) out[sb.unrank(i)] = v[i];
    return out;
}

// rho_k = <s| n_k |v> / <s|v>.
inline std::vector<double> density_profile(const std::vector<double>& v, int L) {
    FullBasis fb = full_basis(L);
    if (v.size() != fb.dim()) throw std::invalid_argument("density_profile expects a full-space vector");
    double norm = 0;
    std::vector<double> rho(static_cast<std::size_t>(L), 0.0);
    for (std::uint64_t m = 0; m < fb.dim(); ++m) {
        norm += v[m];
        for (int k = 1; k <= L; ++k)
            if ((m >> (k - 1)) & 1u) rho[static_cast<std::size_t>(k - 1)] += v[m];
    }
    if (norm == 0.0) throw std::domain_error("density_profile: zero normalization");
    for (double& r : rho) r /= norm;
    return rho;
}

// Q_x(eta) = q^{N_{<x}(eta) - N_{>x}(eta)} eta(x).
template <class Ctx>
typename Ctx::Scalar q_weight_at(const Configuration& eta, int x, const Ctx& ctx) {
    using S = typename Ctx::Scalar;
    if (!eta.occ(x)) return ScalarOps<S>::zero();
    int nl = left_count(eta, x);
    int nr = eta.particles() - nl - 1;
    return ctx.q_pow(QExp(nl - nr));
}

// D(x,eta) = prod_j q^{-2 x_j} Q_{x_j}(eta), Theorem 1.
template <class Ctx>
typename Ctx::Scalar duality_function(const PositionList& xs, const Configuration& eta, const Ctx& ctx) {
    using S = typename Ctx::Scalar;
    if (xs.L != eta.L) throw std::invalid_argument("duality_function lattice size mismatch");
    S out = ScalarOps<S>::one();
    std::int64_t e = 0;
    for (int x : xs.positions) {
        S w = q_weight_at(eta, x, ctx);
        if (ScalarOps<S>::is_zero(w)) return ScalarOps<S>::zero();
        out = out * w;
        e -= 2 * x;
    }
    return out * ctx.q_pow(QExp(e));
}

// D-tilde(x,eta) = q^{|x|(N(eta)-1)} D(x,eta).
template <class Ctx>
typename Ctx::Scalar duality_function_tilde(const PositionList& xs, const Configuration& eta, const Ctx& ctx) {
    auto d = duality_function(xs, eta, ctx);
    std::int64_t e = static_cast<std::int64_t>(xs.particles()) * (eta.particles() - 1);
    return d * ctx.q_pow(QExp(e));
}

// Q-hat_x = q^{sum_{i<x} n_i - sum_{i>x} n_i} n_x as a diagonal operator.
template <class Ctx, class B>
SparseMatrix<typename Ctx::Scalar> q_hat_operator(const B& basis, int x, const Ctx& ctx) {
    using S = typename Ctx::Scalar;
    const int L = basis.L();
    if (x < 1 || x > L) throw std::out_of_range("site index out of range");
    return make_diagonal<S>(basis, [&](std::uint64_t m) {
        return q_weight_at(Configuration(m, L), x, ctx);
    });
}

// S-tilde = sum_{n=0}^{L} (S^+(q,q))^n / [n]_q!.
template <class Ctx>
SparseMatrix<typename Ctx::Scalar> s_tilde_operator(int L, const Ctx& ctx) {
    using S = typename Ctx::Scalar;
    const S qh = ctx.q_pow(QExp(1, 2));
    SparseMatrix<S> Sp = uq_generator(Sign::plus, qh, qh, L);
    Index d = Sp.rows();
    SparseMatrix<S> acc = SparseMatrix<S>::identity(d);
    SparseMatrix<S> pw = SparseMatrix<S>::identity(d);
    for (int n = 1; n <= L; ++n) {
        pw = pw * Sp;
        S f = q_factorial_c(ctx, n);
        std::vector<Triplet<S>> ts;
        pw.for_each([&](Index r, Index c, const S& v) { ts.push_back({r, c, divide_by(v, f)}); });
        acc = acc + SparseMatrix<S>::from_triplets(d, d, std::move(ts));
    }
    return acc;
}

// Lemma 3 vector forms of the restricted SAMs, built from the U_q[sl(2)]
// lowering operators.  Kind I:  z^{N-K} (S^-(q^{-1},q))^{N-K}/[N-K]_q! |x>,
// kind II carries V(q^{2(K-N)/L}) and alpha = q^{1-2N/L}.
template <class Ctx>
std::vector<typename Ctx::Scalar> sam_via_algebra(const SAMSpec& spec, int N,
                                                  const typename Ctx::Scalar& z, const Ctx& ctx) {
    using S = typename Ctx::Scalar;
    spec.validate();
    const int K = spec.K();
    if (N < K) throw std::invalid_argument("sam_via_algebra needs N >= K");
    const int L = spec.L;
    FullBasis fb = full_basis(L);

    // S^-(q^{-1}, alpha): deformation q^{-1}, so qh -> q^{-1/2}
    const S qh_inv = ctx.q_pow(QExp(-1, 2));
    QExp alpha_exp = spec.kind == SamKind::I ? QExp(1)
                                             : QExp(L - 2 * N, L);  // 1 - 2N/L
    const S ah = ctx.q_pow(QExp(alpha_exp.num, 2 * alpha_exp.den));
    SparseMatrix<S> Sm = uq_generator(Sign::minus, qh_inv, ah, L);

    std::uint64_t mask = 0;
    for (int x : spec.shocks) mask |= std::uint64_t(1) << (x - 1);
    std::vector<S> v(fb.dim(), ScalarOps<S>::zero());
    v[mask] = ScalarOps<S>::one();
    for (int n = 0; n < N - K; ++n) v = Sm.apply(v);

    const S zf = ScalarOps<S>::pow_int(z, N - K);
    const S nf = q_factorial_c(ctx, N - K);
    for (auto& c : v) {
        if (ScalarOps<S>::is_zero(c)) continue;
        c = divide_by(c * zf, nf);
    }

    if (spec.kind == SamKind::II) {
        const S gamma_sqrt = ctx.q_pow(QExp(K - N, L));  // (q^{2(K-N)/L})^{1/2}
        v = diagonal_V_on(fb, gamma_sqrt).apply(v);
    }
    return v;
}

} // namespace asepq
