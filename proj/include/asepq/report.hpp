#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "asepq/laurent.hpp"
#include "asepq/sparse.hpp"

namespace asepq {

using json = nlohmann::ordered_json;

// Scalars serialize as plain numbers (numeric) or sparse
// (exponent, numerator/denominator) pair lists (exact).
inline json scalar_json(double v) { return v; }
inline json scalar_json(const Laurent& v) {
    json terms = json::array();
    for (const auto& [e, c] : v.terms())
        terms.push_back(json::array({e, c.get_str()}));
    return terms;
}

// Sparse format shared by matrices and (single-column) vectors:
// {dim, triplets: [[row, col, scalar], ...]}.
template <class S>
json matrix_json(const SparseMatrix<S>& m) {
    json out;
    out["dim"] = m.rows();
    if (m.rows() != m.cols()) out["cols"] = m.cols();
    json ts = json::array();
    m.for_each([&](Index r, Index c, const S& v) { ts.push_back(json::array({r, c, scalar_json(v)})); });
    out["triplets"] = std::move(ts);
    return out;
}

template <class S>
json vector_json(const std::vector<S>& v) {
    json out;
    out["dim"] = v.size();
    json ts = json::array();
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!ScalarOps<S>::is_zero(v[i]))
            ts.push_back(json::array({i, 0, scalar_json(v[i])}));
    out["triplets"] = std::move(ts);
    return out;
}

// Outcome of one identity/theorem check.
struct VerificationReport {
    std::string check;
    json params = json::object();
    std::string mode;           // "exact" | "numeric"
    double residual = 0.0;      // max-norm (numeric mode)
    std::string residual_exact; // exact mode: "0" or a witness term
    bool pass = false;
    double runtime_ms = 0.0;
    std::string notes;

    json to_json(bool with_timing = false) const {
        json j;
        j["check"] = check;
        j["params"] = params;
        j["mode"] = mode;
        if (mode == "exact")
            j["residual"] = residual_exact;
        else
            j["residual"] = residual;
        j["pass"] = pass;
        if (with_timing) j["runtime_ms"] = runtime_ms;
        j["notes"] = notes;
        return j;
    }
};

inline json reports_json(const std::vector<VerificationReport>& rs, bool with_timing = false) {
    json arr = json::array();
    for (const auto& r : rs) arr.push_back(r.to_json(with_timing));
    return arr;
}

inline bool all_pass(const std::vector<VerificationReport>& rs) {
    for (const auto& r : rs)
        if (!r.pass) return false;
    return true;
}

} // namespace asepq
