#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "asepq/measures.hpp"
#include "asepq/operators.hpp"

namespace asepq {

enum class ExpmMethod { automatic, dense, krylov, uniformization };

inline constexpr double kDefaultExpmTol = 1e-12;
inline constexpr Index kDenseOracleMaxDim = 5000;
inline constexpr int kKrylovDim = 30;

namespace detail {

inline Eigen::MatrixXd to_dense(const SparseMatrix<double>& m) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols());
    m.for_each([&](Index r, Index c, const double& v) { out(r, c) = v; });
    return out;
}

inline double inf_norm(const SparseMatrix<double>& m) {
    std::vector<double> row_sum(static_cast<std::size_t>(m.rows()), 0.0);
    m.for_each([&](Index r, Index, const double& v) { row_sum[static_cast<std::size_t>(r)] += std::abs(v); });
    double mx = 0;
    for (double s : row_sum) mx = std::max(mx, s);
    return mx;
}

// e^{-Ht} v by scaling-and-squaring Pade (the dense series oracle).
inline std::vector<double> expm_dense(const SparseMatrix<double>& H, const std::vector<double>& v, double t) {
    if (H.rows() > kDenseOracleMaxDim)
        throw std::invalid_argument("dense propagator limited to dimension " + std::to_string(kDenseOracleMaxDim));
    Eigen::MatrixXd A = to_dense(H) * (-t);
    Eigen::MatrixXd E = A.exp();
    Eigen::Map<const Eigen::VectorXd> x(v.data(), static_cast<Eigen::Index>(v.size()));
    Eigen::VectorXd y = E * x;
    return std::vector<double>(y.data(), y.data() + y.size());
}

// Arnoldi propagator for w = e^{tA} v with A = -H, adaptive substepping in
// the style of EXPOKIT's expv.
inline std::vector<double> expm_krylov(const SparseMatrix<double>& H, const std::vector<double>& v,
                                       double t, double tol) {
    const Index n = H.rows();
    const double anorm = inf_norm(H);
    Eigen::Map<const Eigen::VectorXd> v0(v.data(), static_cast<Eigen::Index>(v.size()));
    Eigen::VectorXd w = v0;
    if (t == 0.0 || anorm == 0.0) return std::vector<double>(w.data(), w.data() + w.size());

    const int m = static_cast<int>(std::min<Index>(kKrylovDim, n));
    const int mmax = m + 2;
    const double gamma = 0.9, delta = 1.2;
    const double btol = 1e-7 * tol < 1e-16 ? 1e-16 : 1e-7 * tol;
    double beta = w.norm();
    if (beta == 0.0) return std::vector<double>(w.data(), w.data() + w.size());

    auto apply_A = [&](const Eigen::VectorXd& x) {
        std::vector<double> xi(x.data(), x.data() + x.size());
        std::vector<double> yi = H.apply(xi);
        Eigen::VectorXd y = -Eigen::Map<const Eigen::VectorXd>(yi.data(), static_cast<Eigen::Index>(yi.size()));
        return y;
    };

    double fact = std::pow((m + 1) / std::exp(1.0), m + 1) * std::sqrt(2.0 * std::numbers::pi * (m + 1));
    double t_new = (1.0 / anorm) * std::pow((fact * tol) / (4.0 * beta * anorm), 1.0 / m);
    double s = std::pow(10.0, std::floor(std::log10(t_new)) - 1.0);
    t_new = std::ceil(t_new / s) * s;

    double t_now = 0.0;
    int total_rejects = 0;
    while (t_now < t) {
        double t_step = std::min(t - t_now, t_new);
        Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n, m + 1);
        Eigen::MatrixXd Hm = Eigen::MatrixXd::Zero(mmax, mmax);
        V.col(0) = w / beta;
        int k1 = 2, mb = m;
        double avnorm = 0.0;
        for (int j = 0; j < m; ++j) {
            Eigen::VectorXd p = apply_A(V.col(j));
            for (int i = 0; i <= j; ++i) {
                double h = V.col(i).dot(p);
                Hm(i, j) = h;
                p -= h * V.col(i);
            }
            // one DGKS re-orthogonalization pass
            for (int i = 0; i <= j; ++i) {
                double h = V.col(i).dot(p);
                Hm(i, j) += h;
                p -= h * V.col(i);
            }
            double sj = p.norm();
            if (sj < btol) {
                k1 = 0;
                mb = j + 1;
                t_step = t - t_now;
                break;
            }
            Hm(j + 1, j) = sj;
            V.col(j + 1) = p / sj;
        }
        if (k1 != 0) {
            Hm(m + 1, m) = 1.0;
            avnorm = apply_A(V.col(m)).norm();
        }

        int ireject = 0;
        double err_loc = btol;
        Eigen::MatrixXd F;
        while (true) {
            int mx = mb + std::max(1, k1);
            F = (t_step * Hm.topLeftCorner(mx, mx)).exp();
            if (k1 == 0) {
                err_loc = btol;
                break;
            }
            double phi1 = std::abs(beta * F(m, 0));
            double phi2 = std::abs(beta * F(m + 1, 0) * avnorm);
            double xm = 1.0 / m;
            if (phi1 > 10.0 * phi2) {
                err_loc = phi2;
                xm = 1.0 / m;
            } else if (phi1 > phi2) {
                err_loc = phi1 * phi2 / (phi1 - phi2);
                xm = 1.0 / m;
            } else {
                err_loc = phi1;
                xm = 1.0 / (m - 1);
            }
            if (err_loc <= delta * t_step * tol) break;
            t_step = gamma * t_step * std::pow(t_step * tol / err_loc, xm);
            double s2 = std::pow(10.0, std::floor(std::log10(t_step)) - 1.0);
            t_step = std::ceil(t_step / s2) * s2;
            if (++ireject == 10 || ++total_rejects > 200)
                throw std::runtime_error("Krylov propagator failed to converge within the rejection cap");
        }

        int mx = mb + std::max(0, k1 - 1);
        w = beta * (V.leftCols(mx) * F.col(0).head(mx));
        beta = w.norm();
        t_now += t_step;
        if (k1 != 0) {
            double xm = 1.0 / m;
            t_new = gamma * t_step * std::pow(t_step * tol / err_loc, xm);
            double s2 = std::pow(10.0, std::floor(std::log10(t_new)) - 1.0);
            t_new = std::ceil(t_new / s2) * s2;
        }
    }
    return std::vector<double>(w.data(), w.data() + w.size());
}

inline bool is_proper_rate_matrix(const SparseMatrix<double>& H, double tol = 1e-10) {
    bool ok = true;
    std::vector<double> col_sum(static_cast<std::size_t>(H.cols()), 0.0);
    double scale = 0.0;
    H.for_each([&](Index r, Index c, const double& v) {
        if (r != c && v > tol) ok = false;  // off-diagonals of -H are the rates
        col_sum[static_cast<std::size_t>(c)] += v;
        scale = std::max(scale, std::abs(v));
    });
    if (!ok) return false;
    for (double s : col_sum)
        if (std::abs(s) > tol * std::max(1.0, scale)) return false;
    return true;
}

// Uniformization e^{-Ht} = e^{-Lambda t} sum_n (Lambda t)^n/n! P^n with
// P = I - H/Lambda; valid when -H is a proper rate matrix.
inline std::vector<double> expm_uniformization(const SparseMatrix<double>& H, const std::vector<double>& v,
                                               double t, double tol) {
    if (!is_proper_rate_matrix(H))
        throw std::invalid_argument("uniformization requires a proper (stochastic) rate matrix");
    double lambda = 0.0;
    H.for_each([&](Index r, Index c, const double& x) {
        if (r == c) lambda = std::max(lambda, x);
    });
    std::vector<double> w = v;
    if (lambda == 0.0 || t == 0.0) return w;

    const int n_steps = static_cast<int>(std::ceil(lambda * t / 500.0));
    const double dt = t / n_steps;
    const double step_tol = tol / n_steps;
    double v1 = 0.0;
    for (double x : v) v1 += std::abs(x);

    for (int step = 0; step < n_steps; ++step) {
        const double lt = lambda * dt;
        std::vector<double> u = w;
        std::vector<double> acc(w.size(), 0.0);
        double coeff = std::exp(-lt);
        double cum = 0.0;
        const int n_max = static_cast<int>(lt + 50.0 * std::sqrt(lt + 1.0) + 100.0);
        for (int nn = 0;; ++nn) {
            for (std::size_t i = 0; i < u.size(); ++i) acc[i] += coeff * u[i];
            cum += coeff;
            if ((1.0 - cum) * v1 <= step_tol) break;
            if (nn >= n_max) throw std::runtime_error("uniformization series failed to converge");
            // u <- P u = u - (H u)/Lambda
            std::vector<double> hu = H.apply(u);
            for (std::size_t i = 0; i < u.size(); ++i) u[i] -= hu[i] / lambda;
            coeff *= lt / (nn + 1);
        }
        w = std::move(acc);
    }
    return w;
}

} // namespace detail

// e^{-Ht} v to tolerance eps.
inline std::vector<double> expm_action(const SparseMatrix<double>& H, const std::vector<double>& v,
                                       double t, double eps = kDefaultExpmTol,
                                       ExpmMethod method = ExpmMethod::automatic) {
    if (t < 0) throw std::invalid_argument("expm_action needs t >= 0");
    if (H.rows() != H.cols() || static_cast<Index>(v.size()) != H.cols())
        throw std::invalid_argument("expm_action dimension mismatch");
    if (t == 0.0) return v;
    switch (method) {
        case ExpmMethod::dense:
            return detail::expm_dense(H, v, t);
        case ExpmMethod::krylov:
            return detail::expm_krylov(H, v, t, eps / (10.0 * (1.0 + t)));
        case ExpmMethod::uniformization:
            return detail::expm_uniformization(H, v, t, eps * 0.1);
        case ExpmMethod::automatic:
            break;
    }
    if (H.rows() <= 1024) return detail::expm_dense(H, v, t);
    return detail::expm_krylov(H, v, t, eps / (10.0 * (1.0 + t)));
}

// Conditioning parameters of Theorems 2 and 3.
struct DrivingSpec {
    enum class Kind { global, boundary };
    Kind kind = Kind::global;
    int M = 0;  // conditioning particle count

    // global: alpha = q^{1-2M/L}, beta = 1;  boundary: alpha = q, beta = q^{-2M}
    GeneratorSpec<double> generator(int L, double q, double rate = 1.0) const {
        GeneratorSpec<double> g;
        g.L = L;
        g.q = q;
        g.rate = rate;
        g.boundary = Boundary::periodic;
        if (kind == Kind::global) {
            g.alpha = std::pow(q, 1.0 - 2.0 * M / L);
            g.beta = 1.0;
        } else {
            g.alpha = q;
            g.beta = std::pow(q, -2.0 * M);
        }
        return g;
    }
    double driving_strength(int L, double q) const {
        return kind == Kind::global ? -2.0 * M / L * std::log(q) : -2.0 * M * std::log(q);
    }
};

// P(y,t|x,0) over a K-particle sector; entry(y,x) in SectorBasis order.
struct TransitionTable {
    int L = 0, K = 0;
    double q = 1.0, t = 0.0;
    DrivingSpec driving;
    Index dim = 0;
    std::vector<double> p;  // row-major, p[y*dim + x]

    double operator()(Index y, Index x) const { return p[static_cast<std::size_t>(y * dim + x)]; }
};

inline TransitionTable transition_table(int L, int K, const DrivingSpec& driving, double q, double t,
                                        double eps = kDefaultExpmTol,
                                        ExpmMethod method = ExpmMethod::automatic) {
    TransitionTable tab;
    tab.L = L;
    tab.K = K;
    tab.q = q;
    tab.t = t;
    tab.driving = driving;
    SectorBasis sb(L, K);
    tab.dim = static_cast<Index>(sb.dim());
    SparseMatrix<double> Hk = build_sector_generator(driving.generator(L, q), K);
    tab.p.assign(static_cast<std::size_t>(tab.dim) * static_cast<std::size_t>(tab.dim), 0.0);
    for (Index x = 0; x < tab.dim; ++x) {
        std::vector<double> e(static_cast<std::size_t>(tab.dim), 0.0);
        e[static_cast<std::size_t>(x)] = 1.0;
        std::vector<double> col = expm_action(Hk, e, t, eps, method);
        for (Index y = 0; y < tab.dim; ++y)
            tab.p[static_cast<std::size_t>(y * tab.dim + x)] = col[static_cast<std::size_t>(y)];
    }
    return tab;
}

// Least-squares decomposition of a sector vector over the restricted SAM
// family {1_N |mu_y>}.
struct SamDecomposition {
    std::vector<double> weights;  // indexed by the K-sector basis order
    double residual = 0.0;        // ||M c - v|| / ||v||
    double condition = 0.0;       // sigma_max / sigma_min of the family matrix
    Eigen::Index rank = 0;
    bool rank_deficient = false;
};

inline SamDecomposition decompose_onto_sams(const std::vector<double>& v_t, int L, int N, int K,
                                            double z, double q, SamKind kind) {
    SectorBasis sn(L, N), sk(L, K);
    if (v_t.size() != sn.dim()) throw std::invalid_argument("decompose_onto_sams dimension mismatch");
    const double q1L = std::pow(q, 1.0 / L);
    Eigen::MatrixXd M(static_cast<Eigen::Index>(sn.dim()), static_cast<Eigen::Index>(sk.dim()));
    for (std::uint64_t y = 0; y < sk.dim(); ++y) {
        SAMSpec spec;
        spec.L = L;
        spec.kind = kind;
        spec.shocks = to_positions(sk.config(y)).positions;
        std::vector<double> col = restrict_particles(sam_vector(spec, z, q, q1L), L, N);
        for (std::uint64_t r = 0; r < sn.dim(); ++r)
            M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(y)) = col[r];
    }
    Eigen::Map<const Eigen::VectorXd> b(v_t.data(), static_cast<Eigen::Index>(v_t.size()));

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SamDecomposition out;
    const auto& sig = svd.singularValues();
    double smax = sig.size() ? sig(0) : 0.0;
    double smin = sig.size() ? sig(sig.size() - 1) : 0.0;
    out.condition = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
    svd.setThreshold(1e-12);
    out.rank = svd.rank();
    out.rank_deficient = out.rank < M.cols();
    Eigen::VectorXd c = svd.solve(b);
    out.weights.assign(c.data(), c.data() + c.size());
    double bn = b.norm();
    out.residual = bn > 0 ? (M * c - b).norm() / bn : (M * c).norm();
    return out;
}

} // namespace asepq
