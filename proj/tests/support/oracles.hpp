#pragma once

// Test-only oracles, deliberately independent of the library code paths they
// cross-check: integer matrices mod p with their own elimination, counting
// recurrences, and exhaustive set-based enumeration.

#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace oracle {

using IntMat = std::vector<std::vector<long long>>;

inline long long imod(long long x, long long p) {
    long long r = x % p;
    return r < 0 ? r + p : r;
}

inline long long ipow_mod(long long b, long long e, long long p) {
    long long r = 1 % p;
    for (; e > 0; --e) r = imod(r * b, p);
    return r;
}

/// Straightforward Gauss-Jordan over F_p, written independently of the
/// library's elimination.
inline IntMat gauss_canonical(IntMat m, long long p) {
    const std::size_t rows = m.size();
    if (rows == 0) return m;
    const std::size_t cols = m[0].size();
    std::size_t lead = 0;
    for (std::size_t r = 0; r < rows && lead < cols; ++r) {
        std::size_t i = r;
        while (i < rows && imod(m[i][lead], p) == 0) ++i;
        if (i == rows) {
            ++lead;
            --r;
            continue;
        }
        std::swap(m[i], m[r]);
        const long long inv = ipow_mod(imod(m[r][lead], p), p - 2, p);
        for (auto& v : m[r]) v = imod(v * inv, p);
        for (std::size_t k = 0; k < rows; ++k) {
            if (k == r) continue;
            const long long f = imod(m[k][lead], p);
            if (f == 0) continue;
            for (std::size_t c = 0; c < cols; ++c) m[k][c] = imod(m[k][c] - f * m[r][c], p);
        }
        ++lead;
    }
    // drop zero rows
    IntMat out;
    for (const auto& row : m) {
        bool zero = true;
        for (auto v : row)
            if (imod(v, p) != 0) zero = false;
        if (!zero) out.push_back(row);
    }
    return out;
}

/// Gaussian binomial via the q-Pascal recurrence, as unsigned long long.
inline unsigned long long q_binomial_recurrence(std::size_t n, std::size_t m,
                                                unsigned long long q) {
    if (m > n) return 0;
    std::map<std::pair<std::size_t, std::size_t>, unsigned long long> memo;
    auto rec = [&](auto&& self, std::size_t nn, std::size_t mm) -> unsigned long long {
        if (mm == 0 || mm == nn) return 1;
        if (mm > nn) return 0;
        auto key = std::make_pair(nn, mm);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        unsigned long long qe = 1;
        for (std::size_t i = 0; i < mm; ++i) qe *= q;
        unsigned long long v = self(self, nn - 1, mm - 1) + qe * self(self, nn - 1, mm);
        memo[key] = v;
        return v;
    };
    return rec(rec, n, m);
}

/// Count m-dimensional subspaces of F_p^n by brute force over all m-tuples of
/// vectors, canonicalizing each full-rank tuple.  Only feasible for tiny
/// p^(m*n); callers keep within that.
inline unsigned long long count_subspaces_bruteforce(std::size_t n, std::size_t m, long long p) {
    if (m == 0) return 1;
    std::set<IntMat> seen;
    std::vector<long long> digits(m * n, 0);
    const unsigned long long total = [&] {
        unsigned long long t = 1;
        for (std::size_t i = 0; i < m * n; ++i) t *= static_cast<unsigned long long>(p);
        return t;
    }();
    for (unsigned long long it = 0; it < total; ++it) {
        IntMat mat(m, std::vector<long long>(n));
        unsigned long long v = it;
        for (std::size_t i = 0; i < m * n; ++i) {
            mat[i / n][i % n] = static_cast<long long>(v % p);
            v /= p;
        }
        IntMat canon = gauss_canonical(mat, p);
        if (canon.size() == m) seen.insert(canon);
    }
    return seen.size();
}

/// Count RREF matrices directly: sum over pivot patterns of p^(free entries).
inline unsigned long long count_rref_matrices(std::size_t n, std::size_t m, long long p) {
    std::vector<std::size_t> pattern;
    unsigned long long total = 0;
    auto rec = [&](auto&& self, std::size_t next) -> void {
        if (pattern.size() == m) {
            std::size_t free_entries = 0;
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t c = pattern[i] + 1; c < n; ++c) {
                    bool is_pivot = false;
                    for (auto pc : pattern)
                        if (pc == c) is_pivot = true;
                    if (!is_pivot) ++free_entries;
                }
            }
            unsigned long long ways = 1;
            for (std::size_t i = 0; i < free_entries; ++i)
                ways *= static_cast<unsigned long long>(p);
            total += ways;
            return;
        }
        for (std::size_t c = next; c < n; ++c) {
            pattern.push_back(c);
            self(self, c + 1);
            pattern.pop_back();
        }
    };
    rec(rec, 0);
    return total;
}

/// 2x2 minors of a 2xN integer matrix mod p (independent exterior-square
/// oracle), in lexicographic column-pair order.
inline std::vector<long long> wedge2_minors(const IntMat& m, long long p) {
    std::vector<long long> out;
    const std::size_t n = m[0].size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            out.push_back(imod(m[0][i] * m[1][j] - m[0][j] * m[1][i], p));
    return out;
}

}  // namespace oracle
