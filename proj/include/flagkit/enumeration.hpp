#pragma once

#include "flagkit/subspace.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace flagkit {

/// Thrown when an enumeration would exceed the configured point budget.
struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

constexpr std::uint64_t kDefaultPointBudget = 10000;

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
        return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    if (b > std::numeric_limits<std::uint64_t>::max() - a)
        return std::numeric_limits<std::uint64_t>::max();
    return a + b;
}

inline std::uint64_t saturating_pow(std::uint64_t q, std::uint64_t e) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < e; ++i) r = saturating_mul(r, q);
    return r;
}

/// Number of m-dimensional subspaces of F_q^n, saturating at UINT64_MAX.
/// Computed by the Pascal-type recurrence, which stays in the integers.
inline std::uint64_t gaussian_binomial(std::size_t n, std::size_t m, std::uint64_t q) {
    if (m > n) return 0;
    std::vector<std::uint64_t> row(m + 1, 0);
    row[0] = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = std::min(i, m); j >= 1; --j) {
            // [i j] = [i-1 j-1] + q^j [i-1 j]
            row[j] = saturating_add(row[j - 1], saturating_mul(saturating_pow(q, j), row[j]));
        }
    }
    return row[m];
}

namespace detail {

/// Free entry positions of the echelon pattern with the given pivot columns:
/// row i may hold arbitrary values right of its pivot, excluding pivot columns.
inline std::vector<std::pair<std::size_t, std::size_t>> free_positions(
    const std::vector<std::size_t>& pivots, std::size_t n) {
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < pivots.size(); ++i)
        for (std::size_t c = pivots[i] + 1; c < n; ++c)
            if (!is_pivot[c]) out.emplace_back(i, c);
    return out;
}

}  // namespace detail

/// Visits every m-dimensional subspace of F^n exactly once, in a fixed order:
/// pivot-column sets in lexicographic order, and for each pattern the free
/// entries counted as base-p digits with the last (row-major) position moving
/// fastest.  The visitor may return false to stop early.
template <FieldType F>
void for_each_subspace(const F& field, std::size_t ambient, std::size_t m,
                       const std::function<bool(const Subspace<F>&)>& visit) {
    static_assert(F::enumerable, "subspace enumeration requires a finite field");
    if (m > ambient) return;
    if (m == 0) {
        visit(Subspace<F>::zero(field, ambient));
        return;
    }
    const std::uint64_t q = field.size();
    for (const auto& pivots : detail::k_subsets(ambient, m)) {
        const auto free_pos = detail::free_positions(pivots, ambient);
        std::vector<std::uint64_t> digits(free_pos.size(), 0);
        while (true) {
            Matrix<F> basis(field, m, ambient);
            for (std::size_t i = 0; i < m; ++i) basis.at(i, pivots[i]) = field.one();
            for (std::size_t k = 0; k < free_pos.size(); ++k)
                basis.at(free_pos[k].first, free_pos[k].second) = field.from_index(digits[k]);
            if (!visit(Subspace<F>::span(basis))) return;
            // odometer, last position fastest
            std::size_t k = free_pos.size();
            while (k > 0) {
                if (++digits[k - 1] < q) break;
                digits[k - 1] = 0;
                --k;
            }
            if (k == 0) break;
        }
    }
}

/// All m-dimensional subspaces of F^n in enumeration order.
/// Throws BudgetExceeded if the Gaussian-binomial count exceeds the budget.
template <FieldType F>
std::vector<Subspace<F>> enumerate_subspaces(const F& field, std::size_t ambient, std::size_t m,
                                             std::uint64_t budget = kDefaultPointBudget) {
    if (m > ambient) throw std::invalid_argument("enumerate_subspaces: m > ambient");
    const std::uint64_t count = gaussian_binomial(ambient, m, field.size());
    if (count > budget)
        throw BudgetExceeded("enumerate_subspaces: " + std::to_string(count) +
                             " subspaces exceed budget " + std::to_string(budget));
    std::vector<Subspace<F>> out;
    out.reserve(count);
    for_each_subspace<F>(field, ambient, m, [&](const Subspace<F>& s) {
        out.push_back(s);
        return true;
    });
    return out;
}

/// Superspaces of `base` of dimension m, via lifts of subspaces of the
/// quotient by `base`.  Quotient coordinates are the non-pivot columns of the
/// canonical basis of `base`, in increasing column order.
template <FieldType F>
void for_each_superspace(const Subspace<F>& base, std::size_t m,
                         const std::function<bool(const Subspace<F>&)>& visit) {
    const F& f = base.field();
    const std::size_t n = base.ambient_dim();
    if (m < base.dim() || m > n) return;
    std::vector<bool> is_pivot(n, false);
    for (std::size_t i = 0; i < base.dim(); ++i) is_pivot[base.pivot_col(i)] = true;
    std::vector<std::size_t> quot_cols;
    for (std::size_t c = 0; c < n; ++c)
        if (!is_pivot[c]) quot_cols.push_back(c);

    const std::size_t qdim = m - base.dim();
    bool go = true;
    for_each_subspace<F>(f, quot_cols.size(), qdim, [&](const Subspace<F>& t) {
        // lift each quotient basis row into the ambient space
        Matrix<F> gens(f, base.dim() + t.dim(), n);
        for (std::size_t i = 0; i < base.dim(); ++i) gens.set_row(i, base.basis().row(i));
        for (std::size_t i = 0; i < t.dim(); ++i)
            for (std::size_t j = 0; j < quot_cols.size(); ++j)
                gens.at(base.dim() + i, quot_cols[j]) = t.basis().at(i, j);
        go = visit(Subspace<F>::span(gens));
        return go;
    });
}

}  // namespace flagkit
