#pragma once

#include "flagkit/matrix.hpp"

#include <compare>
#include <cstddef>
#include <vector>

namespace flagkit {

/// Linear subspace of F^n in canonical form: the basis matrix is the RREF of
/// any generating set with zero rows dropped.  Two subspaces are equal iff
/// their canonical bases are entry-wise identical.
template <FieldType F>
class Subspace {
public:
    using Elem = typename F::Element;

    static Subspace zero(F field, std::size_t ambient) {
        return Subspace(Matrix<F>(field, 0, ambient));
    }

    static Subspace full(F field, std::size_t ambient) {
        return Subspace(Matrix<F>::identity(field, ambient));
    }

    /// Canonical subspace spanned by the rows of gens.
    static Subspace span(const Matrix<F>& gens) {
        auto red = rref(gens);
        Matrix<F> basis(gens.field(), red.rank, gens.cols());
        for (std::size_t i = 0; i < red.rank; ++i) basis.set_row(i, red.mat.row(i));
        return Subspace(std::move(basis));
    }

    static Subspace span(F field, std::size_t ambient, const std::vector<std::vector<Elem>>& gens) {
        Matrix<F> m(field, gens.size(), ambient);
        for (std::size_t i = 0; i < gens.size(); ++i) {
            if (gens[i].size() != ambient)
                throw std::invalid_argument("Subspace::span: generator has wrong length");
            m.set_row(i, gens[i]);
        }
        return span(m);
    }

    const F& field() const { return basis_.field(); }
    std::size_t ambient_dim() const { return basis_.cols(); }
    std::size_t dim() const { return basis_.rows(); }
    const Matrix<F>& basis() const { return basis_; }

    bool is_zero() const { return dim() == 0; }
    bool is_full() const { return dim() == ambient_dim(); }

    bool contains(const std::vector<Elem>& v) const {
        if (v.size() != ambient_dim()) throw std::invalid_argument("contains: ambient mismatch");
        // reduce v against the echelon basis
        const F& f = field();
        std::vector<Elem> w = v;
        for (std::size_t i = 0; i < dim(); ++i) {
            std::size_t p = pivot_col(i);
            if (f.is_zero(w[p])) continue;
            const Elem c = w[p];
            for (std::size_t j = 0; j < ambient_dim(); ++j)
                w[j] = f.sub(w[j], f.mul(c, basis_.at(i, j)));
        }
        return std::all_of(w.begin(), w.end(), [&](const Elem& e) { return f.is_zero(e); });
    }

    bool contains(const Subspace& other) const {
        if (other.ambient_dim() != ambient_dim())
            throw std::invalid_argument("contains: ambient mismatch");
        for (std::size_t i = 0; i < other.dim(); ++i)
            if (!contains(other.basis_.row(i))) return false;
        return true;
    }

    bool operator==(const Subspace& other) const { return basis_ == other.basis_; }

    /// Deterministic total order: by dimension, then pivot columns, then entries.
    /// Used for sorting enumeration output and report canonicalization.
    bool operator<(const Subspace& other) const {
        if (dim() != other.dim()) return dim() < other.dim();
        for (std::size_t i = 0; i < dim(); ++i) {
            if (pivot_col(i) != other.pivot_col(i)) return pivot_col(i) < other.pivot_col(i);
        }
        const auto& a = basis_.entries();
        const auto& b = other.basis_.entries();
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (a[k] != b[k]) return a[k] < b[k];
        }
        return false;
    }

    std::size_t pivot_col(std::size_t row) const {
        const F& f = field();
        for (std::size_t c = 0; c < ambient_dim(); ++c)
            if (!f.is_zero(basis_.at(row, c))) return c;
        throw std::logic_error("Subspace: zero row in canonical basis");
    }

private:
    explicit Subspace(Matrix<F> basis) : basis_(std::move(basis)) {}

    Matrix<F> basis_;
};

/// Linear map F^domain -> F^codomain given by its matrix (codomain x domain).
template <FieldType F>
struct LinearMap {
    Matrix<F> mat;

    std::size_t domain_dim() const { return mat.cols(); }
    std::size_t codomain_dim() const { return mat.rows(); }
    const F& field() const { return mat.field(); }

    std::vector<typename F::Element> apply(const std::vector<typename F::Element>& v) const {
        return mat.mul_vec(v);
    }
};

template <FieldType F>
void require_same_ambient(const Subspace<F>& a, const Subspace<F>& b, const char* op) {
    if (a.ambient_dim() != b.ambient_dim() || !(a.field() == b.field()))
        throw std::invalid_argument(std::string(op) + ": ambient space mismatch");
}

template <FieldType F>
Subspace<F> sum(const Subspace<F>& a, const Subspace<F>& b) {
    require_same_ambient(a, b, "sum");
    return Subspace<F>::span(a.basis().vstack(b.basis()));
}

/// Intersection of row spaces via the Zassenhaus block trick: rref of
/// [A | A; B | 0] yields rows with zero left half whose right halves span
/// the intersection.
template <FieldType F>
Subspace<F> intersect(const Subspace<F>& a, const Subspace<F>& b) {
    require_same_ambient(a, b, "intersect");
    const F& f = a.field();
    const std::size_t n = a.ambient_dim();
    Matrix<F> top = a.basis().hstack(a.basis());
    Matrix<F> bottom = b.basis().hstack(Matrix<F>(f, b.dim(), n));
    auto red = rref(top.vstack(bottom));
    std::vector<std::vector<typename F::Element>> gens;
    for (std::size_t i = 0; i < red.rank; ++i) {
        if (red.pivots[i] < n) continue;  // row still has support in the left block
        auto r = red.mat.row(i);
        gens.emplace_back(r.begin() + n, r.end());
    }
    return Subspace<F>::span(f, n, gens);
}

template <FieldType F>
Subspace<F> kernel(const LinearMap<F>& m) {
    return Subspace<F>::span(nullspace(m.mat));
}

template <FieldType F>
Subspace<F> image(const LinearMap<F>& m, const Subspace<F>& s) {
    if (s.ambient_dim() != m.domain_dim())
        throw std::invalid_argument("image: domain mismatch");
    return Subspace<F>::span(m.mat.mul(s.basis().transpose()).transpose());
}

template <FieldType F>
Subspace<F> image(const LinearMap<F>& m) {
    return image(m, Subspace<F>::full(m.field(), m.domain_dim()));
}

/// Functionals vanishing on s, as a subspace of the dual space (coordinates
/// in the dual basis).  An involution: annihilator(annihilator(s)) == s.
template <FieldType F>
Subspace<F> annihilator(const Subspace<F>& s) {
    return Subspace<F>::span(nullspace(s.basis()));
}

/// {x : m x in s}.
template <FieldType F>
Subspace<F> preimage(const LinearMap<F>& m, const Subspace<F>& s) {
    if (s.ambient_dim() != m.codomain_dim())
        throw std::invalid_argument("preimage: codomain mismatch");
    const Subspace<F> ann = annihilator(s);
    if (ann.dim() == 0) return Subspace<F>::full(m.field(), m.domain_dim());
    return Subspace<F>::span(nullspace(ann.basis().mul(m.mat)));
}

template <FieldType F>
bool is_surjective(const LinearMap<F>& m) {
    return rank(m.mat) == m.codomain_dim();
}

namespace detail {

inline std::vector<std::vector<std::size_t>> k_subsets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (k > n) return out;
    std::vector<std::size_t> cur(k);
    for (std::size_t i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        std::size_t i = k;
        while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++cur[i - 1];
        for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

/// Determinant by fraction-free-enough Gaussian elimination (exact field, so
/// plain elimination is fine).
template <FieldType F>
typename F::Element det(Matrix<F> a) {
    const F& f = a.field();
    const std::size_t n = a.rows();
    typename F::Element d = f.one();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t sel = c;
        while (sel < n && f.is_zero(a.at(sel, c))) ++sel;
        if (sel == n) return f.zero();
        if (sel != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a.at(sel, j), a.at(c, j));
            d = f.neg(d);
        }
        d = f.mul(d, a.at(c, c));
        const auto inv = f.inv(a.at(c, c));
        for (std::size_t i = c + 1; i < n; ++i) {
            if (f.is_zero(a.at(i, c))) continue;
            const auto factor = f.mul(a.at(i, c), inv);
            for (std::size_t j = c; j < n; ++j)
                a.at(i, j) = f.sub(a.at(i, j), f.mul(factor, a.at(c, j)));
        }
    }
    return d;
}

}  // namespace detail

/// The line wedge^m(s) inside the m-th exterior power of the ambient space,
/// coordinatized by the m-element column subsets in lexicographic order.
/// Requires dim(s) == m.
template <FieldType F>
Subspace<F> wedge_power(const Subspace<F>& s, std::size_t m) {
    if (s.dim() != m) throw std::invalid_argument("wedge_power: dim(s) != m");
    const F& f = s.field();
    const auto subsets = detail::k_subsets(s.ambient_dim(), m);
    Matrix<F> line(f, 1, subsets.size());
    for (std::size_t j = 0; j < subsets.size(); ++j)
        line.at(0, j) = detail::det(s.basis().columns(subsets[j]));
    return Subspace<F>::span(line);
}

}  // namespace flagkit
