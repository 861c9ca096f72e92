#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "asepq/scalar.hpp"

namespace asepq {

using Index = std::int64_t;

template <class S>
struct Triplet {
    Index row, col;
    S value;
};

// Sparse matrix in CSR form with sorted columns per row and no stored zeros.
// Entry order is deterministic (row-major, columns ascending), so exact-mode
// matrix equality is literal entry comparison.
template <class S>
class SparseMatrix {
public:
    SparseMatrix() : rows_(0), cols_(0), row_ptr_{0} {}

    SparseMatrix(Index rows, Index cols)
        : rows_(rows), cols_(cols), row_ptr_(static_cast<std::size_t>(rows) + 1, 0) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("negative dimension");
    }

    static SparseMatrix from_triplets(Index rows, Index cols, std::vector<Triplet<S>> ts) {
        for (const auto& t : ts)
            if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
                throw std::out_of_range("triplet index out of range");
        std::sort(ts.begin(), ts.end(), [](const Triplet<S>& a, const Triplet<S>& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        SparseMatrix m(rows, cols);
        m.col_.reserve(ts.size());
        m.val_.reserve(ts.size());
        std::size_t i = 0;
        for (Index r = 0; r < rows; ++r) {
            while (i < ts.size() && ts[i].row == r) {
                Index c = ts[i].col;
                S v = ts[i].value;
                ++i;
                while (i < ts.size() && ts[i].row == r && ts[i].col == c) {
                    v = v + ts[i].value;
                    ++i;
                }
                if (!ScalarOps<S>::is_zero(v)) {
                    m.col_.push_back(c);
                    m.val_.push_back(std::move(v));
                }
            }
            m.row_ptr_[static_cast<std::size_t>(r) + 1] = static_cast<Index>(m.col_.size());
        }
        return m;
    }

    static SparseMatrix identity(Index n) {
        std::vector<Triplet<S>> ts;
        ts.reserve(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) ts.push_back({i, i, ScalarOps<S>::one()});
        return from_triplets(n, n, std::move(ts));
    }

    static SparseMatrix diagonal(std::vector<S> d) {
        std::vector<Triplet<S>> ts;
        Index n = static_cast<Index>(d.size());
        for (Index i = 0; i < n; ++i)
            if (!ScalarOps<S>::is_zero(d[static_cast<std::size_t>(i)]))
                ts.push_back({i, i, std::move(d[static_cast<std::size_t>(i)])});
        return from_triplets(n, n, std::move(ts));
    }

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index nnz() const { return static_cast<Index>(col_.size()); }
    bool is_zero() const { return col_.empty(); }

    void for_each(const std::function<void(Index, Index, const S&)>& f) const {
        for (Index r = 0; r < rows_; ++r)
            for (Index k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k)
                f(r, col_[static_cast<std::size_t>(k)], val_[static_cast<std::size_t>(k)]);
    }

    bool operator==(const SparseMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && row_ptr_ == o.row_ptr_ &&
               col_ == o.col_ && val_ == o.val_;
    }

    friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) { return combined(a, b, +1); }
    friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) { return combined(a, b, -1); }

    SparseMatrix operator-() const { return scaled(S(-1)); }

    SparseMatrix scaled(const S& c) const {
        if (ScalarOps<S>::is_zero(c)) return SparseMatrix(rows_, cols_);
        SparseMatrix m = *this;
        for (auto& v : m.val_) v = v * c;
        return m;
    }

    SparseMatrix transpose() const {
        std::vector<Triplet<S>> ts;
        ts.reserve(col_.size());
        for_each([&](Index r, Index c, const S& v) { ts.push_back({c, r, v}); });
        return from_triplets(cols_, rows_, std::move(ts));
    }

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matmul dimension mismatch");
        SparseMatrix out(a.rows_, b.cols_);
        std::vector<S> acc(static_cast<std::size_t>(b.cols_), ScalarOps<S>::zero());
        std::vector<Index> touched;
        std::vector<char> seen(static_cast<std::size_t>(b.cols_), 0);
        for (Index r = 0; r < a.rows_; ++r) {
            touched.clear();
            for (Index ka = a.row_ptr_[static_cast<std::size_t>(r)]; ka < a.row_ptr_[static_cast<std::size_t>(r) + 1]; ++ka) {
                Index mid = a.col_[static_cast<std::size_t>(ka)];
                const S& av = a.val_[static_cast<std::size_t>(ka)];
                for (Index kb = b.row_ptr_[static_cast<std::size_t>(mid)]; kb < b.row_ptr_[static_cast<std::size_t>(mid) + 1]; ++kb) {
                    Index c = b.col_[static_cast<std::size_t>(kb)];
                    if (!seen[static_cast<std::size_t>(c)]) {
                        seen[static_cast<std::size_t>(c)] = 1;
                        acc[static_cast<std::size_t>(c)] = ScalarOps<S>::zero();
                        touched.push_back(c);
                    }
                    acc[static_cast<std::size_t>(c)] = acc[static_cast<std::size_t>(c)] + av * b.val_[static_cast<std::size_t>(kb)];
                }
            }
            std::sort(touched.begin(), touched.end());
            for (Index c : touched) {
                if (!ScalarOps<S>::is_zero(acc[static_cast<std::size_t>(c)])) {
                    out.col_.push_back(c);
                    out.val_.push_back(std::move(acc[static_cast<std::size_t>(c)]));
                }
                seen[static_cast<std::size_t>(c)] = 0;
            }
            out.row_ptr_[static_cast<std::size_t>(r) + 1] = static_cast<Index>(out.col_.size());
        }
        return out;
    }

    std::vector<S> apply(const std::vector<S>& v) const {
        if (static_cast<Index>(v.size()) != cols_) throw std::invalid_argument("matvec dimension mismatch");
        std::vector<S> out(static_cast<std::size_t>(rows_), ScalarOps<S>::zero());
        for (Index r = 0; r < rows_; ++r) {
            S acc = ScalarOps<S>::zero();
            for (Index k = row_ptr_[static_cast<std::size_t>(r)]; k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k) {
                const S& x = v[static_cast<std::size_t>(col_[static_cast<std::size_t>(k)])];
                if (!ScalarOps<S>::is_zero(x)) acc = acc + val_[static_cast<std::size_t>(k)] * x;
            }
            out[static_cast<std::size_t>(r)] = std::move(acc);
        }
        return out;
    }

    // Row vector times matrix.
    std::vector<S> apply_left(const std::vector<S>& v) const {
        if (static_cast<Index>(v.size()) != rows_) throw std::invalid_argument("matvec dimension mismatch");
        std::vector<S> out(static_cast<std::size_t>(cols_), ScalarOps<S>::zero());
        for_each([&](Index r, Index c, const S& m) {
            const S& x = v[static_cast<std::size_t>(r)];
            if (!ScalarOps<S>::is_zero(x))
                out[static_cast<std::size_t>(c)] = out[static_cast<std::size_t>(c)] + x * m;
        });
        return out;
    }

    const std::vector<Index>& row_ptr() const { return row_ptr_; }
    const std::vector<Index>& col_index() const { return col_; }
    const std::vector<S>& values() const { return val_; }

private:
    Index rows_, cols_;
    std::vector<Index> row_ptr_;
    std::vector<Index> col_;
    std::vector<S> val_;

    static SparseMatrix combined(const SparseMatrix& a, const SparseMatrix& b, int sgn) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("shape mismatch");
        SparseMatrix out(a.rows_, a.cols_);
        for (Index r = 0; r < a.rows_; ++r) {
            Index ia = a.row_ptr_[static_cast<std::size_t>(r)], ea = a.row_ptr_[static_cast<std::size_t>(r) + 1];
            Index ib = b.row_ptr_[static_cast<std::size_t>(r)], eb = b.row_ptr_[static_cast<std::size_t>(r) + 1];
            while (ia < ea || ib < eb) {
                bool ta = ia < ea, tb = ib < eb;
                if (ta && (!tb || a.col_[static_cast<std::size_t>(ia)] < b.col_[static_cast<std::size_t>(ib)])) {
                    out.col_.push_back(a.col_[static_cast<std::size_t>(ia)]);
                    out.val_.push_back(a.val_[static_cast<std::size_t>(ia)]);
                    ++ia;
                } else if (tb && (!ta || b.col_[static_cast<std::size_t>(ib)] < a.col_[static_cast<std::size_t>(ia)])) {
                    out.col_.push_back(b.col_[static_cast<std::size_t>(ib)]);
                    out.val_.push_back(sgn > 0 ? b.val_[static_cast<std::size_t>(ib)] : S(-1) * b.val_[static_cast<std::size_t>(ib)]);
                    ++ib;
                } else {
                    S v = sgn > 0 ? a.val_[static_cast<std::size_t>(ia)] + b.val_[static_cast<std::size_t>(ib)]
                                  : a.val_[static_cast<std::size_t>(ia)] - b.val_[static_cast<std::size_t>(ib)];
                    if (!ScalarOps<S>::is_zero(v)) {
                        out.col_.push_back(a.col_[static_cast<std::size_t>(ia)]);
                        out.val_.push_back(std::move(v));
                    }
                    ++ia; ++ib;
                }
            }
            out.row_ptr_[static_cast<std::size_t>(r) + 1] = static_cast<Index>(out.col_.size());
        }
        return out;
    }
};

inline double max_abs(const SparseMatrix<double>& m) {
    double mx = 0;
    for (double v : m.values()) mx = std::max(mx, std::abs(v));
    return mx;
}

inline double max_abs(const std::vector<double>& v) {
    double mx = 0;
    for (double x : v) mx = std::max(mx, std::abs(x));
    return mx;
}

template <class S>
bool all_zero(const std::vector<S>& v) {
    for (const auto& x : v)
        if (!ScalarOps<S>::is_zero(x)) return false;
    return true;
}

} // namespace asepq
