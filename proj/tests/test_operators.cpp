#include <doctest.h>

#include <Eigen/Dense>

#include <complex>
#include <random>

#include "asepq/operators.hpp"

using namespace asepq;

namespace {

Eigen::MatrixXd dense_of(const SparseMatrix<double>& m) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols());
    m.for_each([&](Index r, Index c, const double& v) { out(r, c) = v; });
    return out;
}

// independent construction of the hopping matrix from embedded local products
template <class S>
SparseMatrix<S> bond_via_embeds(int a, int b, const S& q, const S& ahop, int L) {
    auto sp = [&](int k) { return embed_local(local::sigma_plus<S>(), k, L); };
    auto sm = [&](int k) { return embed_local(local::sigma_minus<S>(), k, L); };
    auto nh = [&](int k) { return embed_local(local::number<S>(), k, L); };
    auto vh = [&](int k) { return embed_local(local::vacancy<S>(), k, L); };
    auto t1 = (sp(a) * sm(b)).scaled(ahop);
    auto t2 = (nh(a) * vh(b)).scaled(q);
    auto t3 = (sm(a) * sp(b)).scaled(ScalarOps<S>::inv(ahop));
    auto t4 = (vh(a) * nh(b)).scaled(ScalarOps<S>::inv(q));
    return (t1 - t2 + t3 - t4).scaled(S(-1) * ScalarOps<S>::one());
}

} // namespace

TEST_CASE("embedded occupation operators act as projectors") {
    const int L = 4;
    auto nk = embed_local(local::number<double>(), 3, L);
    for (std::uint64_t m = 0; m < (1u << L); ++m) {
        std::vector<double> e(1u << L, 0.0);
        e[m] = 1.0;
        auto r = nk.apply(e);
        Configuration eta(m, L);
        for (std::uint64_t j = 0; j < (1u << L); ++j)
            CHECK(r[j] == (j == m ? double(eta.occ(3)) : 0.0));
    }
    CHECK(embed_local(local::identity<double>(), 2, L) ==
          SparseMatrix<double>::identity(Index(1) << L));
}

TEST_CASE("operators on disjoint sites commute") {
    std::mt19937_64 rng(7);
    const int L = 3;
    for (int trial = 0; trial < 20; ++trial) {
        LocalOperator<Laurent> u, v;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                u.m[a][b] = Laurent::monomial(long(rng() % 7) - 3, Rational(long(rng() % 9) - 4));
                v.m[a][b] = Laurent::monomial(long(rng() % 7) - 3, Rational(long(rng() % 9) - 4));
            }
        auto uk = embed_local(u, 1, L);
        auto vl = embed_local(v, 3, L);
        CHECK(uk * vl == vl * uk);
    }
}

TEST_CASE("hopping matrix entries, L=2 bulk bond") {
    // q=2, alpha=2, w=1; entries indexed by iota
    auto h = hopping_bulk(1, 2.0, 2.0, 1.0, 2);
    auto d = dense_of(h);
    CHECK(d(2, 1) == doctest::Approx(-2.0));       // iota (3,2): right hop
    CHECK(d(1, 1) == doctest::Approx(2.0));        // iota (2,2): escape rate q
    CHECK(d(1, 2) == doctest::Approx(-0.5));       // iota (2,3): left hop 1/alpha
    CHECK(d(2, 2) == doctest::Approx(0.5));        // iota (3,3): escape rate 1/q
    CHECK(h.nnz() == 4);
}

TEST_CASE("hopping matches the embedded-product construction") {
    ExactCtx ctx(4);
    const Laurent q = ctx.q_pow(QExp(1));
    const Laurent alpha = Laurent::monomial(14);
    const Laurent beta = Laurent::monomial(-6);
    for (int k = 1; k < 4; ++k)
        CHECK(hopping_bulk(k, q, alpha, Laurent(1), 4) == bond_via_embeds(k, k + 1, q, alpha, 4));
    CHECK(hopping_boundary(q, alpha, beta, Laurent(1), 4) == bond_via_embeds(4, 1, q, alpha * beta, 4));
}

TEST_CASE("hopping stochasticity at alpha = q") {
    ExactCtx ctx(3);
    const Laurent q = ctx.q_pow(QExp(1));
    std::vector<Laurent> ones(8, Laurent(1));
    for (int k = 1; k < 3; ++k)
        CHECK(all_zero(hopping_bulk(k, q, q, Laurent(1), 3).apply_left(ones)));
    CHECK(all_zero(hopping_boundary(q, q, Laurent(1), Laurent(1), 3).apply_left(ones)));
}

TEST_CASE("hopping annihilates the empty block at alpha = q") {
    auto h = hopping_bulk(1, 1.7, 1.7, 1.0, 2);
    std::vector<double> e(4, 0.0);
    e[0] = 1.0;  // |00>
    CHECK(max_abs(h.apply(e)) == 0.0);
}

TEST_CASE("boundary bond with beta = 1 is the bulk formula on (L,1)") {
    ExactCtx ctx(3);
    const Laurent q = ctx.q_pow(QExp(1));
    const Laurent alpha = Laurent::monomial(4);
    CHECK(hopping_boundary(q, alpha, Laurent(1), Laurent(1), 3) == bond_via_embeds(3, 1, q, alpha, 3));
}

TEST_CASE("boundary bond seam rates, L=2, q=2, alpha=2, beta=3") {
    // clockwise seam move L->1 carries alpha*beta, the reverse (alpha*beta)^{-1}
    auto h = hopping_boundary(2.0, 2.0, 3.0, 1.0, 2);
    auto d = dense_of(h);
    CHECK(d(2, 1) == doctest::Approx(-1.0 / 6.0));  // (10) -> (01): site 1 to site 2 across the seam
    CHECK(d(1, 2) == doctest::Approx(-6.0));        // (01) -> (10): site 2 to site 1 across the seam
    CHECK(d(1, 1) == doctest::Approx(0.5));
    CHECK(d(2, 2) == doctest::Approx(2.0));
}

TEST_CASE("generator stochasticity, exact, up to L = 10") {
    for (int L : {2, 5, 10}) {
        ExactCtx ctx(L);
        const Laurent q = ctx.q_pow(QExp(1));
        GeneratorSpec<Laurent> g{L, q, q, Laurent(1), Boundary::periodic, Laurent(1)};
        auto H = build_generator(g);
        std::vector<Laurent> ones(std::size_t(1) << L, Laurent(1));
        CHECK(all_zero(H.apply_left(ones)));
        g.boundary = Boundary::reflecting;
        CHECK(all_zero(build_generator(g).apply_left(ones)));
    }
}

TEST_CASE("reflecting generator at L=2 is the single bulk bond") {
    GeneratorSpec<double> g{2, 1.7, 0.9, 1.0, Boundary::reflecting, 1.0};
    CHECK(build_generator(g) == hopping_bulk(1, 1.7, 0.9, 1.0, 2));
}

TEST_CASE("sector-direct generator equals the projected full generator") {
    for (int L : {4, 6}) {
        for (int N = 0; N <= L; ++N) {
            GeneratorSpec<double> g{L, 1.5, 0.8, 1.3, Boundary::periodic, 1.0};
            CHECK(build_sector_generator(g, N) == project_sector(build_generator(g), L, N));
        }
    }
    ExactCtx ctx(5);
    const Laurent q = ctx.q_pow(QExp(1));
    GeneratorSpec<Laurent> ge{5, q, Laurent::monomial(4), Laurent::monomial(-2), Boundary::periodic, Laurent(1)};
    CHECK(build_sector_generator(ge, 2) == project_sector(build_generator(ge), 5, 2));
}

TEST_CASE("frozen sectors project to 1x1 zero matrices") {
    GeneratorSpec<double> g{4, 2.0, 2.0, 1.0, Boundary::periodic, 1.0};
    auto H = build_generator(g);
    auto H0 = project_sector(H, 4, 0);
    auto H4 = project_sector(H, 4, 4);
    CHECK(H0.rows() == 1);
    CHECK(H0.is_zero());
    CHECK(H4.rows() == 1);
    CHECK(H4.is_zero());
}

TEST_CASE("uniform vector spans the kernel of the transposed sector generator") {
    // L=4, N=2, unweighted periodic: brute-force null space
    GeneratorSpec<double> g{4, 1.5, 1.5, 1.0, Boundary::periodic, 1.0};
    auto Hs = build_sector_generator(g, 2);
    Eigen::MatrixXd HT = dense_of(Hs).transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(HT);
    lu.setThreshold(1e-12);
    Eigen::MatrixXd kernel = lu.kernel();
    REQUIRE(kernel.cols() == 1);
    Eigen::VectorXd k = kernel.col(0) / kernel.col(0).sum();
    for (int i = 0; i < k.size(); ++i) CHECK(k(i) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("diagonal transformations") {
    const int L = 5;
    FullBasis fb(L);
    CHECK(diagonal_V(1.0, L) == SparseMatrix<double>::identity(Index(1) << L));
    CHECK(number_W(1.0, L) == SparseMatrix<double>::identity(Index(1) << L));
    CHECK_THROWS(number_W(0.0, L));
    CHECK_THROWS(diagonal_V(0.0, L));

    // V on a position eigenstate multiplies by gamma^{-(1/2) sum (2x_j - L - 1)}
    double gamma = 1.3;
    auto V = diagonal_V(std::sqrt(gamma), L);
    Configuration eta = Configuration::parse("01010");
    std::vector<double> e(std::size_t(1) << L, 0.0);
    e[eta.bits] = 1.0;
    auto r = V.apply(e);
    double expo = 0;
    for (int x : to_positions(eta).positions) expo += 2 * x - L - 1;
    CHECK(r[eta.bits] == doctest::Approx(std::pow(gamma, -0.5 * expo)).epsilon(1e-14));

    // W on an N-particle state multiplies by z^N
    auto W = number_W(0.7, L);
    auto wr = W.apply(e);
    CHECK(wr[eta.bits] == doctest::Approx(std::pow(0.7, 2)));
}

TEST_CASE("reflection operator") {
    CHECK(reflection_operator<double>(1) == SparseMatrix<double>::identity(2));
    const int L = 4;
    auto R = reflection_operator<double>(L);
    CHECK(R * R == SparseMatrix<double>::identity(Index(1) << L));
    GeneratorSpec<double> g{L, 1.5, 0.8, 1.3, Boundary::periodic, 1.0};
    GeneratorSpec<double> gi{L, 1.5, 1.0 / 0.8, 1.0 / 1.3, Boundary::periodic, 1.0};
    auto lhs = R * build_generator(g) * R;
    auto rhs = build_generator(gi);
    CHECK(max_abs(lhs - rhs) <= 1e-13);
}

TEST_CASE("uq generators match the coproduct recursion") {
    const int L = 4;
    const double q = 1.6;
    Eigen::Matrix2d sp2, sm2, qz2, qzm2;
    sp2 << 0, 1, 0, 0;
    sm2 << 0, 0, 1, 0;
    qz2 = Eigen::Vector2d(std::sqrt(q), 1 / std::sqrt(q)).asDiagonal();   // q^{sigma^z/2}
    qzm2 = Eigen::Vector2d(1 / std::sqrt(q), std::sqrt(q)).asDiagonal();

    // kron with the first factor on the low bits (site 1 least significant)
    auto kron_low = [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
        Eigen::MatrixXd out(A.rows() * B.rows(), A.cols() * B.cols());
        for (int ib = 0; ib < B.rows(); ++ib)
            for (int jb = 0; jb < B.cols(); ++jb)
                out.block(ib * A.rows(), jb * A.cols(), A.rows(), A.cols()) = B(ib, jb) * A;
        return out;
    };

    for (Sign sign : {Sign::plus, Sign::minus}) {
        const Eigen::MatrixXd s2 = sign == Sign::plus ? sp2 : sm2;
        Eigen::MatrixXd S = s2, Qz = qz2;
        for (int j = 2; j <= L; ++j) {
            S = kron_low(S, qzm2) + kron_low(Qz, s2);
            Qz = kron_low(Qz, qz2);
        }
        auto got = dense_of(uq_generator(sign, std::sqrt(q), 1.0, L));
        CHECK((got - S).cwiseAbs().maxCoeff() <= 1e-13);
    }
}

TEST_CASE("uq generator transpose and rescaled variant") {
    ExactCtx ctx(4);
    const Laurent qh = ctx.q_pow(QExp(1, 2));
    const Laurent alpha = Laurent::monomial(6);
    const Laurent ah = ExactCtx::sqrt_of(alpha);
    auto Sp = uq_generator(Sign::plus, qh, ah, 4);
    auto Sm_inv = uq_generator(Sign::minus, qh, ah.inverse(), 4);
    CHECK(Sp.transpose() == Sm_inv);
    // S^pm = alpha^{pm(L+1)/2} T^pm
    auto T = uq_generator_rescaled(Sign::plus, qh, alpha, 4);
    CHECK(Sp == T.scaled(Laurent::monomial(6 * 5 / 2)));
    // odd monomial alpha at even L has no representable square root
    CHECK_THROWS_AS(ExactCtx::sqrt_of(Laurent::monomial(3)), std::domain_error);
}

TEST_CASE("uq commutator closes on the q-number diagonal, exact") {
    for (int L : {2, 3, 4}) {
        ExactCtx ctx(L);
        const Laurent qh = ctx.q_pow(QExp(1, 2));
        const Laurent ah = ExactCtx::sqrt_of(Laurent::monomial(8));
        auto Sp = uq_generator(Sign::plus, qh, ah, L);
        auto Sm = uq_generator(Sign::minus, qh, ah, L);
        auto rhs = make_diagonal<Laurent>(FullBasis(L), [&](std::uint64_t m) {
            return q_number_exact(L - 2 * __builtin_popcountll(m), L);
        });
        CHECK(Sp * Sm - Sm * Sp == rhs);
    }
}

TEST_CASE("sigma_y and the xx+yy combination") {
    using C = std::complex<double>;
    auto sy = local::sigma_y();
    auto sx = local::sigma_x<C>();
    auto sz = local::sigma_z<C>();
    auto prod = sx * sy;  // = i sigma^z
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            CHECK(std::abs(prod.m[a][b] - C(0, 1) * sz.m[a][b]) <= 1e-15);
    // xx + yy = 2 (sigma^+ sigma^- + sigma^- sigma^+) across two sites
    auto spl = local::sigma_plus<C>(), smn = local::sigma_minus<C>();
    const int L = 2;
    auto lhs = embed_local(sx, 1, L) * embed_local(sx, 2, L) + embed_local(sy, 1, L) * embed_local(sy, 2, L);
    auto rhs = (embed_local(spl, 1, L) * embed_local(smn, 2, L) +
                embed_local(smn, 1, L) * embed_local(spl, 2, L)).scaled(C(2, 0));
    lhs.for_each([&](Index r, Index c, const C& v) {
        bool found = false;
        rhs.for_each([&](Index r2, Index c2, const C& v2) {
            if (r2 == r && c2 == c && std::abs(v - v2) <= 1e-15) found = true;
        });
        CHECK(found);
    });
    CHECK(lhs.nnz() == rhs.nnz());
}

TEST_CASE("reversible weights") {
    NumericCtx ctx(1.5);
    CHECK(reversible_weight(Configuration::parse("0000"), ctx, QExp(0)) == doctest::Approx(1.0));
    CHECK(reversible_weight(Configuration::parse("0010"), ctx, QExp(0)) ==
          doctest::Approx(std::pow(1.5, 6)));
    // pi-hat = V^{-1}(q^2) matches mu = -L-1 weights
    const int L = 5;
    ExactCtx ec(L);
    const Laurent q = ec.q_pow(QExp(1));
    auto pih = diagonal_V_on(FullBasis(L), q.inverse());
    auto weights = reversible_measure_diag(FullBasis(L), ec, QExp(-L - 1));
    CHECK(pih == weights);
}

TEST_CASE("gauge covariance, exact, L = 8") {
    const int L = 8;
    ExactCtx ctx(L);
    const Laurent q = ctx.q_pow(QExp(1));
    const Laurent alpha = Laurent::monomial(10), beta = Laurent::monomial(-4), gamma = Laurent::monomial(6);
    const Laurent gh = ExactCtx::sqrt_of(gamma);
    FullBasis fb(L);
    auto V = diagonal_V_on(fb, gh);
    auto Vi = diagonal_V_on(fb, gh.inverse());
    GeneratorSpec<Laurent> g{L, q, alpha, beta, Boundary::periodic, Laurent(1)};
    GeneratorSpec<Laurent> g2{L, q, alpha * gamma.inverse(), beta * gamma.pow(L), Boundary::periodic, Laurent(1)};
    CHECK(V * build_generator(g) * Vi == build_generator(g2));
    GeneratorSpec<Laurent> r1{L, q, alpha, Laurent(1), Boundary::reflecting, Laurent(1)};
    GeneratorSpec<Laurent> r2{L, q, alpha * gamma.inverse(), Laurent(1), Boundary::reflecting, Laurent(1)};
    CHECK(V * build_generator(r1) * Vi == build_generator(r2));
}

TEST_CASE("rate scale multiplies every rate term") {
    ExactCtx ctx(4);
    const Laurent q = ctx.q_pow(QExp(1));
    const Laurent alpha = Laurent::monomial(2);
    GeneratorSpec<Laurent> g1{4, q, alpha, Laurent::monomial(-2), Boundary::periodic, Laurent(1)};
    GeneratorSpec<Laurent> g2 = g1;
    g2.rate = Laurent(make_rational(1, 2));
    CHECK(build_generator(g1).scaled(g2.rate) == build_generator(g2));
    CHECK(hopping_bulk(2, 1.5, 0.8, 2.0, 4) == hopping_bulk(2, 1.5, 0.8, 1.0, 4).scaled(2.0));
}

TEST_CASE("full-space cap") {
    CHECK_THROWS_AS(full_basis(15), std::invalid_argument);
    GeneratorSpec<double> g{20, 1.5, 1.5, 1.0, Boundary::periodic, 1.0};
    CHECK_THROWS_AS(build_generator(g), std::invalid_argument);
    CHECK(build_sector_generator(g, 1).rows() == 20);  // sector path has no such cap
}
