#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asepq/evolution.hpp"
#include "asepq/report.hpp"

namespace asepq {

enum class CheckMode { exact, numeric };

inline const char* mode_name(CheckMode m) { return m == CheckMode::exact ? "exact" : "numeric"; }

struct VerifyConfig {
    int Lcap = 6;
    double q = 1.5;
    double tol_identity = 1e-12;  // single-propagator identities
    double tol_theorem = 1e-9;    // end-to-end theorem checks (two propagators + least squares)
    double tol_residual = 1e-10;  // SAM decomposition residual
    std::uint64_t seed = 20240801;
};

// Theorem 1: sum_xi D(x,xi) <xi|e^{-Ht t}|eta> = sum_y D(y,eta) <y|e^{-Ht t}|x>.
VerificationReport check_duality_theorem1(int L, const std::vector<int>& xs, const Configuration& eta,
                                          double q, double t, double eps);

// Proposition 1 with beta^pm = q^{pm(L-2K)} alpha^{-L}.  Exact mode certifies
// the identity at monomial alpha values (or the one supplied w-exponent);
// numeric mode at generic positive alpha.
VerificationReport check_proposition1(int L, int K, int n, Sign sign, CheckMode mode, double q,
                                      std::optional<long> alpha_w_exp = std::nullopt);

// Theorems 2/3: evolve the restricted SAM, decompose over the SAM family,
// compare against the K-particle conditioned transition column.
VerificationReport check_theorem2(int L, int N, int K, const std::vector<int>& xs, double z, double q,
                                  double t, double tol_weights, double tol_residual);
VerificationReport check_theorem3(int L, int N, int K, const std::vector<int>& xs, double z, double q,
                                  double t, double tol_weights, double tol_residual);

// Proof-chain sub-checks (symb1a)-(symb1d) of Theorem 2, exact where the mode
// allows.
VerificationReport check_theorem2_chain(int L, int N, int K, CheckMode mode, double q, double eps);

// Appendix identity families.
VerificationReport check_appendix_boundary_relations(int L, CheckMode mode, double q, double eps);
VerificationReport check_pseudocommutator(int L, int N_target, Sign sign, CheckMode mode, double q, double eps);

// Lemmas 1 and 3 (exhaustive over shock sets up to L, all K <= N <= L).
VerificationReport check_lemmas(int L, CheckMode mode, double q, double eps);

// Duality-function identities: Eq.-level equivalence with the Q-hat product,
// the D-tilde ratio, and mu-independence of the exact D evaluation.
VerificationReport check_duality_function_identities(int L, CheckMode mode, double q, double eps);

// Suites: algebra, duality, theorems, appendix, all.
std::vector<VerificationReport> run_suite(const std::string& name, const VerifyConfig& cfg);

std::vector<std::string> suite_names();

} // namespace asepq
