#pragma once

#include "flagkit/field.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

namespace flagkit {

/// Dense row-major matrix over an exact field.  All arithmetic is exact;
/// shapes are validated, never inferred.
template <FieldType F>
class Matrix {
public:
    using Elem = typename F::Element;

    Matrix(F field, std::size_t rows, std::size_t cols)
        : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero()) {}

    Matrix(F field, std::size_t rows, std::size_t cols, std::vector<Elem> entries)
        : field_(std::move(field)), rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_)
            throw std::invalid_argument("Matrix: entry count does not match shape");
    }

    static Matrix identity(F field, std::size_t n) {
        Matrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = m.field_.one();
        return m;
    }

    const F& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Elem& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Elem& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<Elem>& entries() const { return data_; }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(),
                           [&](const Elem& e) { return field_.is_zero(e); });
    }

    Matrix transpose() const {
        Matrix t(field_, cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
        return t;
    }

    Matrix mul(const Matrix& rhs) const {
        if (cols_ != rhs.rows_) throw std::invalid_argument("Matrix::mul: shape mismatch");
        if (field_ != rhs.field_) throw std::invalid_argument("Matrix::mul: field mismatch");
        Matrix out(field_, rows_, rhs.cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Elem& a = at(r, k);
                if (field_.is_zero(a)) continue;
                for (std::size_t c = 0; c < rhs.cols_; ++c)
                    out.at(r, c) = field_.add(out.at(r, c), field_.mul(a, rhs.at(k, c)));
            }
        return out;
    }

    std::vector<Elem> mul_vec(const std::vector<Elem>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("Matrix::mul_vec: shape mismatch");
        std::vector<Elem> out(rows_, field_.zero());
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                out[r] = field_.add(out[r], field_.mul(at(r, c), v[c]));
        return out;
    }

    Matrix scaled(const Elem& s) const {
        Matrix out = *this;
        for (auto& e : out.data_) e = field_.mul(e, s);
        return out;
    }

    std::vector<Elem> row(std::size_t r) const {
        return std::vector<Elem>(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
    }

    void set_row(std::size_t r, const std::vector<Elem>& v) {
        std::copy(v.begin(), v.end(), data_.begin() + r * cols_);
    }

    /// Rows of this stacked over rows of other.
    Matrix vstack(const Matrix& other) const {
        if (cols_ != other.cols_) throw std::invalid_argument("Matrix::vstack: shape mismatch");
        Matrix out(field_, rows_ + other.rows_, cols_);
        std::copy(data_.begin(), data_.end(), out.data_.begin());
        std::copy(other.data_.begin(), other.data_.end(), out.data_.begin() + data_.size());
        return out;
    }

    Matrix hstack(const Matrix& other) const {
        if (rows_ != other.rows_) throw std::invalid_argument("Matrix::hstack: shape mismatch");
        Matrix out(field_, rows_, cols_ + other.cols_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) out.at(r, c) = at(r, c);
            for (std::size_t c = 0; c < other.cols_; ++c) out.at(r, cols_ + c) = other.at(r, c);
        }
        return out;
    }

    Matrix columns(const std::vector<std::size_t>& cols) const {
        Matrix out(field_, rows_, cols.size());
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t j = 0; j < cols.size(); ++j) out.at(r, j) = at(r, cols[j]);
        return out;
    }

    bool operator==(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && field_ == other.field_ &&
               data_ == other.data_;
    }

private:
    F field_;
    std::size_t rows_, cols_;
    std::vector<Elem> data_;
};

template <FieldType F>
struct RrefResult {
    Matrix<F> mat;
    std::vector<std::size_t> pivots;  // pivot column of row i, for i < rank
    std::size_t rank = 0;
};

/// Reduced row echelon form.  Row space is preserved; the result is the
/// unique canonical representative of that row space.
template <FieldType F>
RrefResult<F> rref(const Matrix<F>& m) {
    const F& f = m.field();
    Matrix<F> a = m;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t sel = r;
        while (sel < a.rows() && f.is_zero(a.at(sel, c))) ++sel;
        if (sel == a.rows()) continue;
        if (sel != r)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a.at(sel, j), a.at(r, j));
        const auto piv_inv = f.inv(a.at(r, c));
        for (std::size_t j = 0; j < a.cols(); ++j) a.at(r, j) = f.mul(a.at(r, j), piv_inv);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r || f.is_zero(a.at(i, c))) continue;
            const auto factor = a.at(i, c);
            for (std::size_t j = 0; j < a.cols(); ++j)
                a.at(i, j) = f.sub(a.at(i, j), f.mul(factor, a.at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return RrefResult<F>{std::move(a), std::move(pivots), r};
}

template <FieldType F>
std::size_t rank(const Matrix<F>& m) {
    return rref(m).rank;
}

/// Basis of {x : m x = 0}, one solution per row.  Rows are returned in the
/// order of the free columns of m.
template <FieldType F>
Matrix<F> nullspace(const Matrix<F>& m) {
    const F& f = m.field();
    auto r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : r.pivots) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    Matrix<F> basis(f, free_cols.size(), m.cols());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        const std::size_t fc = free_cols[k];
        basis.at(k, fc) = f.one();
        for (std::size_t i = 0; i < r.rank; ++i)
            basis.at(k, r.pivots[i]) = f.neg(r.mat.at(i, fc));
    }
    return basis;
}

/// One solution x of m x = b, or nullopt if the system is inconsistent.
template <FieldType F>
std::optional<std::vector<typename F::Element>> solve(const Matrix<F>& m,
                                                      const std::vector<typename F::Element>& b) {
    if (b.size() != m.rows()) throw std::invalid_argument("solve: shape mismatch");
    const F& f = m.field();
    Matrix<F> aug(f, m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) aug.at(r, c) = m.at(r, c);
        aug.at(r, m.cols()) = b[r];
    }
    auto red = rref(aug);
    for (std::size_t i = 0; i < red.rank; ++i)
        if (red.pivots[i] == m.cols()) return std::nullopt;
    std::vector<typename F::Element> x(m.cols(), f.zero());
    for (std::size_t i = 0; i < red.rank; ++i) x[red.pivots[i]] = red.mat.at(i, m.cols());
    return x;
}

template <FieldType F>
bool is_invertible(const Matrix<F>& m) {
    return m.rows() == m.cols() && rank(m) == m.rows();
}

/// Inverse of a square invertible matrix.
template <FieldType F>
Matrix<F> inverse(const Matrix<F>& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: matrix not square");
    const F& f = m.field();
    auto red = rref(m.hstack(Matrix<F>::identity(f, m.rows())));
    if (red.rank != m.rows() || red.pivots.back() >= m.rows())
        throw std::invalid_argument("inverse: matrix not invertible");
    std::vector<std::size_t> right(m.rows());
    for (std::size_t c = 0; c < m.rows(); ++c) right[c] = m.rows() + c;
    return red.mat.columns(right);
}

}  // namespace flagkit
