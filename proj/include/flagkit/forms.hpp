#pragma once

#include "flagkit/subspace.hpp"

#include <string>
#include <vector>

namespace flagkit {

enum class FormKind { symmetric, symplectic };

inline std::string to_string(FormKind k) {
    return k == FormKind::symmetric ? "symmetric" : "symplectic";
}

/// Vector space with a nondegenerate symmetric or symplectic bilinear form,
/// represented by its Gram matrix: B(v, w) = v^T G w.
///
/// Symmetric forms are rejected in characteristic 2 (orthogonal geometry
/// there is a quadratic-form theory this toolkit does not model).  Symplectic
/// forms in characteristic 2 are the alternating ones: G = G^T with zero
/// diagonal.
template <FieldType F>
class BilinearSpace {
public:
    using Elem = typename F::Element;

    BilinearSpace(FormKind kind, Matrix<F> gram) : kind_(kind), gram_(std::move(gram)) {
        const F& f = gram_.field();
        if (gram_.rows() != gram_.cols())
            throw std::invalid_argument("BilinearSpace: Gram matrix must be square");
        if (!is_invertible(gram_))
            throw std::invalid_argument("BilinearSpace: form is degenerate");
        if (kind_ == FormKind::symmetric) {
            if (f.characteristic() == 2)
                throw std::invalid_argument("BilinearSpace: symmetric form in characteristic 2");
            if (!(gram_ == gram_.transpose()))
                throw std::invalid_argument("BilinearSpace: Gram matrix not symmetric");
        } else {
            if (gram_.rows() % 2 != 0)
                throw std::invalid_argument("BilinearSpace: symplectic form needs even dimension");
            if (!(gram_ == gram_.transpose().scaled(f.neg(f.one()))))
                throw std::invalid_argument("BilinearSpace: Gram matrix not antisymmetric");
            for (std::size_t i = 0; i < gram_.rows(); ++i)
                if (!f.is_zero(gram_.at(i, i)))
                    throw std::invalid_argument("BilinearSpace: symplectic diagonal must vanish");
        }
    }

    FormKind kind() const { return kind_; }
    const Matrix<F>& gram() const { return gram_; }
    const F& field() const { return gram_.field(); }
    std::size_t dim() const { return gram_.rows(); }

    Elem pairing(const std::vector<Elem>& v, const std::vector<Elem>& w) const {
        const F& f = field();
        auto gw = gram_.mul_vec(w);
        Elem acc = f.zero();
        for (std::size_t i = 0; i < dim(); ++i) acc = f.add(acc, f.mul(v[i], gw[i]));
        return acc;
    }

    bool operator==(const BilinearSpace& other) const {
        return kind_ == other.kind_ && gram_ == other.gram_;
    }

private:
    FormKind kind_;
    Matrix<F> gram_;
};

/// Hyperbolic space with labeled basis.  Coordinates are laid out as
/// e_1, ..., e_n, [e_0,] e^n, ..., e^1 so that prefixes of the e_i are
/// isotropic and orthogonal complements of prefixes are again coordinate
/// subspaces.  Pairings: (e_i, e^i) = 1, (e_0, e_0) = 1, all others zero
/// among distinct basis vectors.
template <FieldType F>
struct HyperbolicSpace {
    BilinearSpace<F> space;
    std::vector<std::string> labels;  // per coordinate
};

template <FieldType F>
HyperbolicSpace<F> hyperbolic_space(FormKind kind, const F& field, std::size_t n, bool with_e0) {
    if (with_e0 && kind != FormKind::symmetric)
        throw std::invalid_argument("hyperbolic_space: e_0 requires a symmetric form");
    const std::size_t dim = 2 * n + (with_e0 ? 1 : 0);
    Matrix<F> gram(field, dim, dim);
    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t lo = i - 1;       // e_i
        const std::size_t hi = dim - i;     // e^i
        gram.at(lo, hi) = field.one();
        gram.at(hi, lo) = kind == FormKind::symmetric ? field.one() : field.neg(field.one());
    }
    if (with_e0) gram.at(n, n) = field.one();

    std::vector<std::string> labels(dim);
    for (std::size_t i = 1; i <= n; ++i) {
        labels[i - 1] = "e" + std::to_string(i);
        labels[dim - i] = "e^" + std::to_string(i);
    }
    if (with_e0) labels[n] = "e0";
    return HyperbolicSpace<F>{BilinearSpace<F>(kind, std::move(gram)), std::move(labels)};
}

/// {v : B(v, s) = 0}.
template <FieldType F>
Subspace<F> orth_complement(const BilinearSpace<F>& b, const Subspace<F>& s) {
    if (s.ambient_dim() != b.dim())
        throw std::invalid_argument("orth_complement: dimension mismatch");
    // B(v, w) = 0 for all w in s  <=>  (S G^T) v = 0
    return Subspace<F>::span(nullspace(s.basis().mul(b.gram().transpose())));
}

template <FieldType F>
bool is_isotropic(const BilinearSpace<F>& b, const Subspace<F>& s) {
    return orth_complement(b, s).contains(s);
}

template <FieldType F>
bool is_coisotropic(const BilinearSpace<F>& b, const Subspace<F>& s) {
    return is_isotropic(b, orth_complement(b, s));
}

/// Gram matrix of the form restricted to the canonical basis of s.
template <FieldType F>
Matrix<F> restricted_gram(const BilinearSpace<F>& b, const Subspace<F>& s) {
    const F& f = b.field();
    Matrix<F> g(f, s.dim(), s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i)
        for (std::size_t j = 0; j < s.dim(); ++j)
            g.at(i, j) = b.pairing(s.basis().row(i), s.basis().row(j));
    return g;
}

/// True iff the ambient space is the orthogonal direct sum of the two parts
/// and the form restricts nondegenerately to each.
template <FieldType F>
bool orthogonal_decomposition_check(const BilinearSpace<F>& b, const Subspace<F>& v_part,
                                    const Subspace<F>& w_part) {
    if (v_part.ambient_dim() != b.dim() || w_part.ambient_dim() != b.dim())
        throw std::invalid_argument("orthogonal_decomposition_check: dimension mismatch");
    if (v_part.dim() + w_part.dim() != b.dim()) return false;
    if (!intersect(v_part, w_part).is_zero()) return false;
    const F& f = b.field();
    for (std::size_t i = 0; i < v_part.dim(); ++i)
        for (std::size_t j = 0; j < w_part.dim(); ++j)
            if (!f.is_zero(b.pairing(v_part.basis().row(i), w_part.basis().row(j)))) return false;
    return is_invertible(restricted_gram(b, v_part)) && is_invertible(restricted_gram(b, w_part));
}

}  // namespace flagkit
