#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace asepq {

// Occupation configuration eta in {0,1}^L. Sites are 1-indexed; site k lives
// in bit k-1, so the basis index of |eta> is iota(eta)-1 = bits.
struct Configuration {
    std::uint64_t bits = 0;
    int L = 0;

    Configuration() = default;
    Configuration(std::uint64_t b, int sites) : bits(b), L(sites) {
        if (sites < 0 || sites > 62) throw std::invalid_argument("L out of range");
        if (sites < 62 && (b >> sites) != 0) throw std::invalid_argument("occupation bits beyond L");
    }

    int occ(int k) const {
        check_site(k);
        return static_cast<int>((bits >> (k - 1)) & 1u);
    }
    int hole(int k) const { return 1 - occ(k); }

    int particles() const { return static_cast<int>(__builtin_popcountll(bits)); }
    int vacancies() const { return L - particles(); }

    // Site 1 printed leftmost.
    std::string str() const {
        std::string s(static_cast<std::size_t>(L), '0');
        for (int k = 1; k <= L; ++k)
            if (occ(k)) s[static_cast<std::size_t>(k - 1)] = '1';
        return s;
    }

    static Configuration parse(const std::string& s) {
        Configuration c;
        c.L = static_cast<int>(s.size());
        if (c.L > 62) throw std::invalid_argument("configuration string too long");
        for (int k = 1; k <= c.L; ++k) {
            char ch = s[static_cast<std::size_t>(k - 1)];
            if (ch == '1')
                c.bits |= std::uint64_t(1) << (k - 1);
            else if (ch != '0')
                throw std::invalid_argument("configuration string must be 0/1");
        }
        return c;
    }

    bool operator==(const Configuration&) const = default;

private:
    void check_site(int k) const {
        if (k < 1 || k > L) throw std::out_of_range("site index out of range");
    }
};

// Position representation: strictly increasing particle coordinates.
struct PositionList {
    std::vector<int> positions;
    int L = 0;

    PositionList() = default;
    PositionList(std::vector<int> xs, int sites) : positions(std::move(xs)), L(sites) {
        for (std::size_t i = 0; i < positions.size(); ++i) {
            if (positions[i] < 1 || positions[i] > L) throw std::invalid_argument("position out of range");
            if (i > 0 && positions[i] <= positions[i - 1])
                throw std::invalid_argument("positions must be strictly increasing");
        }
    }

    int particles() const { return static_cast<int>(positions.size()); }
    bool operator==(const PositionList&) const = default;
};

inline PositionList to_positions(const Configuration& eta) {
    std::vector<int> xs;
    for (int k = 1; k <= eta.L; ++k)
        if (eta.occ(k)) xs.push_back(k);
    return PositionList(std::move(xs), eta.L);
}

inline Configuration to_configuration(const PositionList& xv) {
    Configuration c(0, xv.L);
    for (int x : xv.positions) c.bits |= std::uint64_t(1) << (x - 1);
    return c;
}

// iota(eta) = 1 + sum_k eta(k) 2^{k-1}, a bijection onto {1..2^L}.
inline std::int64_t binary_index(const Configuration& eta) {
    return static_cast<std::int64_t>(eta.bits) + 1;
}

// N_k(eta): particles strictly left of site k.
inline int left_count(const Configuration& eta, int k) {
    if (k < 1 || k > eta.L) throw std::out_of_range("site index out of range");
    std::uint64_t below = eta.bits & ((std::uint64_t(1) << (k - 1)) - 1);
    return static_cast<int>(__builtin_popcountll(below));
}

// eta^{k,k+1}; k = L swaps across the (L,1) bond.
inline Configuration local_swap(const Configuration& eta, int k) {
    if (k < 1 || k > eta.L) throw std::out_of_range("site index out of range");
    int kp = (k == eta.L) ? 1 : k + 1;
    int a = eta.occ(k), b = eta.occ(kp);
    Configuration out = eta;
    if (a != b) {
        out.bits ^= std::uint64_t(1) << (k - 1);
        out.bits ^= std::uint64_t(1) << (kp - 1);
    }
    return out;
}

// R(eta)(k) = eta(L+1-k).
inline Configuration reflect(const Configuration& eta) {
    Configuration out(0, eta.L);
    for (int k = 1; k <= eta.L; ++k)
        if (eta.occ(k)) out.bits |= std::uint64_t(1) << (eta.L - k);
    return out;
}

namespace detail {
// Binomial table, exact in 64 bits for the lattice sizes we admit.
inline std::uint64_t binom(int n, int r) {
    if (r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    std::uint64_t acc = 1;
    for (int i = 1; i <= r; ++i) acc = acc * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
    return acc;
}
} // namespace detail

inline std::uint64_t binomial(int n, int r) { return detail::binom(n, r); }

// Omega_N in lexicographic order of the occupation string (site 1 leftmost,
// '0' < '1'), with O(L) rank/unrank.  Note this is not the iota order.
class SectorBasis {
public:
    SectorBasis(int L, int N) : L_(L), N_(N) {
        if (L < 0 || L > 62) throw std::invalid_argument("L out of range");
        if (N < 0 || N > L) throw std::invalid_argument("particle number out of range");
        dim_ = detail::binom(L, N);
    }

    int L() const { return L_; }
    int N() const { return N_; }
    std::uint64_t dim() const { return dim_; }

    bool contains(std::uint64_t mask) const {
        return static_cast<int>(__builtin_popcountll(mask)) == N_;
    }

    std::uint64_t rank(std::uint64_t mask) const {
        std::uint64_t r = 0;
        int rem = N_;
        for (int k = 1; k <= L_ && rem > 0; ++k) {
            if ((mask >> (k - 1)) & 1u) {
                r += detail::binom(L_ - k, rem);
                --rem;
            }
        }
        return r;
    }

    std::uint64_t unrank(std::uint64_t i) const {
        if (i >= dim_) throw std::out_of_range("sector index out of range");
        std::uint64_t mask = 0;
        int rem = N_;
        for (int k = 1; k <= L_ && rem > 0; ++k) {
            std::uint64_t zeros = detail::binom(L_ - k, rem);
            if (i < zeros) continue;
            i -= zeros;
            mask |= std::uint64_t(1) << (k - 1);
            --rem;
        }
        return mask;
    }

    Configuration config(std::uint64_t i) const { return Configuration(unrank(i), L_); }

private:
    int L_, N_;
    std::uint64_t dim_;
};

inline SectorBasis enumerate_sector(int L, int N) { return SectorBasis(L, N); }

// Full 2^L space with the binary (iota) ordering; mask == basis index.
class FullBasis {
public:
    explicit FullBasis(int L) : L_(L) {
        if (L < 0 || L > 30) throw std::invalid_argument("full-space L out of range");
    }
    int L() const { return L_; }
    std::uint64_t dim() const { return std::uint64_t(1) << L_; }
    bool contains(std::uint64_t) const { return true; }
    std::uint64_t rank(std::uint64_t mask) const { return mask; }
    std::uint64_t unrank(std::uint64_t i) const { return i; }
    Configuration config(std::uint64_t i) const { return Configuration(i, L_); }

private:
    int L_;
};

} // namespace asepq
