#pragma once

// Exact dense linear algebra over Q or Q(i).

#include "qqtrop/scalar.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qqtrop {

template <class F>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols, F(0)) {}
    Matrix(std::initializer_list<std::initializer_list<F>> rows)
    {
        r_ = rows.size();
        c_ = r_ ? rows.begin()->size() : 0;
        for (const auto& row : rows) {
            if (row.size() != c_)
                throw std::invalid_argument("ragged matrix literal");
            a_.insert(a_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = F(1);
        return m;
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    F& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const F& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    std::vector<F> row(std::size_t i) const
    {
        return std::vector<F>(a_.begin() + static_cast<std::ptrdiff_t>(i * c_),
                              a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * c_));
    }
    std::vector<F> col(std::size_t j) const
    {
        std::vector<F> v;
        for (std::size_t i = 0; i < r_; ++i)
            v.push_back((*this)(i, j));
        return v;
    }

    std::vector<F> operator*(const std::vector<F>& x) const
    {
        if (x.size() != c_)
            throw std::invalid_argument("dimension mismatch in matrix-vector product");
        std::vector<F> y(r_, F(0));
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j)
                if (!is_zero((*this)(i, j)))
                    y[i] += (*this)(i, j) * x[j];
        return y;
    }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
    }

private:
    std::size_t r_ = 0;
    std::size_t c_ = 0;
    std::vector<F> a_;
};

template <class F>
std::ostream& operator<<(std::ostream& os, const Matrix<F>& m)
{
    os << "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < m.cols(); ++j)
            os << (j ? ", " : "") << m(i, j);
        os << "]";
    }
    return os << "]";
}

/// Reduced row echelon form with the pivot column of each nonzero row.
template <class F>
struct RowEchelon {
    Matrix<F> reduced;
    std::vector<std::size_t> pivots;
    std::size_t rank() const { return pivots.size(); }
};

template <class F>
RowEchelon<F> rref(Matrix<F> m)
{
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t j = 0; j < m.cols() && r < m.rows(); ++j) {
        std::size_t p = r;
        while (p < m.rows() && is_zero(m(p, j)))
            ++p;
        if (p == m.rows())
            continue;
        if (p != r)
            for (std::size_t k = 0; k < m.cols(); ++k)
                std::swap(m(p, k), m(r, k));
        const F inv = F(1) / m(r, j);
        for (std::size_t k = j; k < m.cols(); ++k)
            m(r, k) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || is_zero(m(i, j)))
                continue;
            const F f = m(i, j);
            for (std::size_t k = j; k < m.cols(); ++k)
                if (!is_zero(m(r, k)))
                    m(i, k) -= f * m(r, k);
        }
        pivots.push_back(j);
        ++r;
    }
    return {std::move(m), std::move(pivots)};
}

template <class F>
std::size_t rank(const Matrix<F>& m)
{
    return rref(m).rank();
}

/// Solves A x = b; free coordinates are pinned to zero. nullopt if inconsistent.
template <class F>
std::optional<std::vector<F>> solve(const Matrix<F>& A, const std::vector<F>& b)
{
    if (b.size() != A.rows())
        throw std::invalid_argument("dimension mismatch in linear solve");
    Matrix<F> aug(A.rows(), A.cols() + 1);
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t j = 0; j < A.cols(); ++j)
            aug(i, j) = A(i, j);
        aug(i, A.cols()) = b[i];
    }
    auto e = rref(std::move(aug));
    if (!e.pivots.empty() && e.pivots.back() == A.cols())
        return std::nullopt;
    std::vector<F> x(A.cols(), F(0));
    for (std::size_t i = 0; i < e.pivots.size(); ++i)
        x[e.pivots[i]] = e.reduced(i, A.cols());
    return x;
}

/// Basis of the right kernel, one vector per free column.
template <class F>
std::vector<std::vector<F>> nullspace(const Matrix<F>& A)
{
    auto e = rref(A);
    std::vector<bool> is_pivot(A.cols(), false);
    for (auto p : e.pivots)
        is_pivot[p] = true;
    std::vector<std::vector<F>> basis;
    for (std::size_t f = 0; f < A.cols(); ++f) {
        if (is_pivot[f])
            continue;
        std::vector<F> v(A.cols(), F(0));
        v[f] = F(1);
        for (std::size_t i = 0; i < e.pivots.size(); ++i)
            v[e.pivots[i]] = -e.reduced(i, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

template <class F>
F determinant(Matrix<F> m)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("determinant of a non-square matrix");
    F det(1);
    const std::size_t n = m.rows();
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t p = j;
        while (p < n && is_zero(m(p, j)))
            ++p;
        if (p == n)
            return F(0);
        if (p != j) {
            for (std::size_t k = 0; k < n; ++k)
                std::swap(m(p, k), m(j, k));
            det = -det;
        }
        det *= m(j, j);
        const F inv = F(1) / m(j, j);
        for (std::size_t i = j + 1; i < n; ++i) {
            if (is_zero(m(i, j)))
                continue;
            const F f = m(i, j) * inv;
            for (std::size_t k = j; k < n; ++k)
                m(i, k) -= f * m(j, k);
        }
    }
    return det;
}

} // namespace qqtrop
