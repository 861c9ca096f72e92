// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Tolerances and runtime budgets are pinned here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "asepq/verify.hpp"

using namespace asepq;

namespace {

using Clock = std::chrono::steady_clock;

struct Criterion {
    int id;
    std::string what;
    bool pass;
    double seconds;
};

std::vector<Criterion> results;

void record(int id, const std::string& what, bool pass, double seconds) {
    results.push_back({id, what, pass, seconds});
    std::printf("%-4s criterion-%d %s (%.2f s)\n", pass ? "PASS" : "FAIL", id, what.c_str(), seconds);
    std::fflush(stdout);
}

double elapsed(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

long vm_hwm_kb() {
    std::ifstream in("/proc/self/status");
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("VmHWM:", 0) == 0) return std::stol(line.substr(6));
    return -1;
}

double max_dev(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// --- criterion 1: exact algebra identities, L <= 6, < 60 s ---
void criterion1() {
    auto t0 = Clock::now();
    VerifyConfig cfg;
    cfg.Lcap = 6;
    bool ok = all_pass(run_suite("algebra", cfg));
    double dt = elapsed(t0);
    record(1, "exact algebra suite (Pauli, U_q[sl2], gauge/reflection/transpose, reversibility), L<=6",
           ok && dt < 60.0, dt);
}

// --- criterion 2: Proposition 1 over the full grid, exact, < 10 min ---
void criterion2() {
    auto t0 = Clock::now();
    bool ok = true;
    for (int L : {4, 6, 8})
        for (int K = 0; K <= L; ++K)
            for (int n = 0; n <= std::min(2, L - K); ++n)
                for (Sign sg : {Sign::plus, Sign::minus})
                    ok = ok && check_proposition1(L, K, n, sg, CheckMode::exact, 1.5).pass;
    double dt = elapsed(t0);
    record(2, "Proposition 1 exact, L in {4,6,8}, all K, n<=2, both signs, 3 monomial alphas",
           ok && dt < 600.0, dt);
}

// --- criterion 3: Theorem 1 duality, 20 random instances, < 1 min ---
void criterion3() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(424242);
    const int L = 6;
    const double ts[3] = {0.1, 0.7, 2.0};
    bool ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        int K = 1 + static_cast<int>(rng() % 3);
        std::vector<int> xs;
        while (static_cast<int>(xs.size()) < K) {
            int s = 1 + static_cast<int>(rng() % L);
            if (std::find(xs.begin(), xs.end(), s) == xs.end()) xs.push_back(s);
        }
        std::sort(xs.begin(), xs.end());
        Configuration eta(rng() % (std::uint64_t(1) << L), L);
        auto rep = check_duality_theorem1(L, xs, eta, 1.7, ts[trial % 3], 1e-12);
        ok = ok && rep.pass;
    }
    double dt = elapsed(t0);
    record(3, "Theorem 1 self-duality, L=6, 20 random (x,eta,t) instances, rel 1e-12", ok && dt < 60.0, dt);
}

// --- criteria 4/5: Theorems 2 and 3 on the declared grid, < 5 min each ---
void criterion45() {
    const std::vector<std::array<int, 3>> grid = {{6, 2, 1}, {8, 3, 1}, {8, 3, 2}};
    for (int which : {2, 3}) {
        auto t0 = Clock::now();
        bool ok = true;
        for (auto [L, N, K] : grid) {
            std::vector<int> xs;
            for (int i = 0; i < K; ++i) xs.push_back(2 + 3 * i);
            for (double q : {1.3, 2.0})
                for (double z : {0.5, 1.0})
                    for (double t : {0.1, 1.0}) {
                        auto rep = which == 2 ? check_theorem2(L, N, K, xs, z, q, t, 1e-9, 1e-10)
                                              : check_theorem3(L, N, K, xs, z, q, t, 1e-9, 1e-10);
                        ok = ok && rep.pass;
                    }
        }
        double dt = elapsed(t0);
        record(which == 2 ? 4 : 5,
               which == 2 ? "Theorem 2 shock decomposition grid, weights 1e-9, residual 1e-10"
                          : "Theorem 3 boundary-driven grid, SAM kind I, weights 1e-9, residual 1e-10",
               ok && dt < 300.0, dt);
    }
}

// --- criterion 6: appendix identities, exact, L in {3,4,5}, < 2 min ---
void criterion6() {
    auto t0 = Clock::now();
    bool ok = true;
    for (int L : {3, 4, 5}) {
        ok = ok && check_appendix_boundary_relations(L, CheckMode::exact, 1.5, 1e-12).pass;
        for (Sign sg : {Sign::plus, Sign::minus})
            for (int N = 0; N <= L; ++N)
                ok = ok && check_pseudocommutator(L, N, sg, CheckMode::exact, 1.5, 1e-12).pass;
    }
    double dt = elapsed(t0);
    record(6, "appendix boundary relations, pseudo-commutators, sector-vanishing + contrapositives, exact",
           ok && dt < 120.0, dt);
}

// --- criterion 7: Lemmas 1 and 3, exact L <= 6 exhaustive, numeric L = 8 ---
void criterion7() {
    auto t0 = Clock::now();
    bool ok = true;
    for (int L = 2; L <= 6; ++L) ok = ok && check_lemmas(L, CheckMode::exact, 1.5, 1e-12).pass;
    ok = ok && check_lemmas(8, CheckMode::numeric, 1.3, 1e-12).pass;
    double dt = elapsed(t0);
    record(7, "Lemmas 1 and 3, exhaustive exact L<=6, numeric samples at L=8", ok && dt < 120.0, dt);
}

// --- criterion 8: propagator oracle equivalence on 50 random instances ---
void criterion8() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(314159);
    bool ok = true;
    double worst_k = 0, worst_u = 0, worst_sum = 0;

    // 47 small instances plus dims 1001, 2002, 3003
    std::vector<std::pair<int, int>> shapes;
    for (int i = 0; i < 47; ++i) {
        int L = 6 + static_cast<int>(rng() % 5);  // dims up to C(10,5) = 252
        int N = 1 + static_cast<int>(rng() % (L - 1));
        shapes.push_back({L, N});
    }
    shapes.push_back({14, 4});  // 1001
    shapes.push_back({14, 5});  // 2002
    shapes.push_back({15, 5});  // 3003

    for (auto [L, N] : shapes) {
        double q = 1.1 + 0.1 * static_cast<double>(rng() % 10);
        double t = 0.1 + 0.1 * static_cast<double>(rng() % 10);
        GeneratorSpec<double> g{L, q, q, 1.0, Boundary::periodic, 1.0};
        auto H = build_sector_generator(g, N);
        std::vector<double> v(static_cast<std::size_t>(H.rows()));
        double norm = 0;
        for (auto& x : v) {
            x = 1.0 + static_cast<double>(rng() % 97);
            norm += x;
        }
        for (auto& x : v) x /= norm;

        auto wd = expm_action(H, v, t, 1e-13, ExpmMethod::dense);
        auto wk = expm_action(H, v, t, 1e-12, ExpmMethod::krylov);
        auto wu = expm_action(H, v, t, 1e-12, ExpmMethod::uniformization);
        double dk = max_dev(wd, wk), du = max_dev(wd, wu);
        worst_k = std::max(worst_k, dk);
        worst_u = std::max(worst_u, du);
        ok = ok && dk <= 1e-12 && du <= 1e-12;
        double sk = 0, su = 0;
        for (double x : wk) sk += x;
        for (double x : wu) su += x;
        worst_sum = std::max({worst_sum, std::abs(sk - 1.0), std::abs(su - 1.0)});
        ok = ok && std::abs(sk - 1.0) <= 1e-12 && std::abs(su - 1.0) <= 1e-12;
    }

    // weighted generators exercise the Krylov path off the stochastic cone
    for (int i = 0; i < 5; ++i) {
        int L = 8 + static_cast<int>(rng() % 3);
        int N = 2 + static_cast<int>(rng() % 4);
        GeneratorSpec<double> g{L, 1.4, 0.8, 1.3, Boundary::periodic, 1.0};
        auto H = build_sector_generator(g, N);
        std::vector<double> v(static_cast<std::size_t>(H.rows()), 1.0 / static_cast<double>(H.rows()));
        auto wd = expm_action(H, v, 0.4, 1e-13, ExpmMethod::dense);
        auto wk = expm_action(H, v, 0.4, 1e-12, ExpmMethod::krylov);
        double scale = std::max(1.0, max_abs(wd));
        ok = ok && max_dev(wd, wk) <= 1e-12 * scale;
    }

    double dt = elapsed(t0);
    std::printf("     worst krylov dev %.2e, uniformization dev %.2e, column-sum dev %.2e\n",
                worst_k, worst_u, worst_sum);
    record(8, "Krylov/uniformization vs dense oracle, 50 instances (dims up to 3003), 1e-12", ok, dt);
}

// --- criterion 9: closed-form kind-II profiles vs tanh formulas, L = 100 ---
void criterion9() {
    auto t0 = Clock::now();
    const int L = 100;
    bool ok = true;
    for (double z : {1.0, 0.5, 2.0}) {
        for (double q : {1.1, 1.05}) {
            const double E = std::log(q), kap = std::log(z) / E;
            // K = 1 at x = 30
            SAMSpec s1{L, {30}, SamKind::II};
            auto p1 = fugacity_profile(s1, z, q);
            for (int k = 1; k <= L; ++k) {
                double want;
                if (k == 30) want = 1.0;
                else if (k < 30) want = 0.5 * (1 - std::tanh((E / L) * (k - 30 + L * (1 - kap) / 2)));
                else want = 0.5 * (1 - std::tanh((E / L) * (k - 30 + L * (-1 - kap) / 2)));
                ok = ok && std::abs(p1.density(k) - want) <= 1e-12;
            }
            // K = 2 at x = 25, y = 70
            SAMSpec s2{L, {25, 70}, SamKind::II};
            auto p2 = fugacity_profile(s2, z, q);
            for (int k = 1; k <= L; ++k) {
                double want;
                if (k == 25 || k == 70) want = 1.0;
                else if (k < 25) want = 0.5 * (1 - std::tanh((E / L) * (2 * k - 95 + L * (2 - kap) / 2)));
                else if (k < 70) want = 0.5 * (1 - std::tanh((E / L) * (2 * k - 95 + L * (-kap) / 2)));
                else want = 0.5 * (1 - std::tanh((E / L) * (2 * k - 95 + L * (-2 - kap) / 2)));
                ok = ok && std::abs(p2.density(k) - want) <= 1e-12;
            }
        }
    }
    record(9, "kind-II SAM densities match the tanh closed forms (K=1,2) at L=100, 1e-12", ok, elapsed(t0));
}

// --- criterion 10: large-sector propagator performance ---
void criterion10() {
    GeneratorSpec<double> g{20, 1.5, 1.5, 1.0, Boundary::periodic, 1.0};
    auto H = build_sector_generator(g, 10);  // dim 184756
    std::vector<double> v(static_cast<std::size_t>(H.rows()), 1.0 / static_cast<double>(H.rows()));
    auto t0 = Clock::now();
    auto w = expm_action(H, v, 1.0, 1e-10);
    double dt = elapsed(t0);
    double sum = 0;
    for (double x : w) sum += x;
    long hwm = vm_hwm_kb();
    bool ok = dt < 10.0 && std::abs(sum - 1.0) <= 1e-10 && hwm > 0 && hwm < 2L * 1024 * 1024;
    std::printf("     dim %lld, mass defect %.2e, peak rss %.2f GB\n",
                static_cast<long long>(H.rows()), sum - 1.0, hwm / (1024.0 * 1024.0));
    record(10, "expm_action on the (L=20, N=10) sector, tol 1e-10, < 10 s, < 2 GB", ok, dt);
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion45();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();

    int failures = 0;
    for (const auto& c : results)
        if (!c.pass) ++failures;
    std::printf("acceptance: %zu criteria, %d failed\n", results.size(), failures);
    return failures == 0 ? 0 : 1;
}
