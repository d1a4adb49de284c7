#pragma once

#include "epkit/scalar.hpp"

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

namespace epkit {

// Dense row-major matrix over a single scalar backend. Values are immutable
// in spirit: every operation returns a fresh matrix, so instances are safe
// to share across threads. Empty shapes (0 rows or columns) are allowed so
// that degenerate factorizations (rank 0, empty kernel) have a natural
// representation; the file format is stricter.
template <class S>
class Matrix {
public:
    using scalar_type = S;
    using traits = scalar_traits<S>;

    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, traits::zero()) {}

    Matrix(std::initializer_list<std::initializer_list<S>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) {
                throw std::invalid_argument("Matrix: ragged initializer");
            }
            for (const auto& v : r) data_.push_back(v);
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = traits::one();
        return m;
    }

    static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }
    bool is_square() const { return rows_ == cols_; }

    S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<S>& data() const { return data_; }

    bool is_zero() const {
        for (const auto& v : data_)
            if (!traits::is_zero(v)) return false;
        return true;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    Matrix& operator+=(const Matrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(const S& c) {
        for (auto& v : data_) v *= c;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, const S& c) { return a *= c; }
    friend Matrix operator*(const S& c, Matrix a) { return a *= c; }

    Matrix operator-() const {
        Matrix r(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = -data_[k];
        return r;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) {
            throw std::invalid_argument("Matrix: incompatible shapes for product");
        }
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t t = 0; t < a.cols_; ++t) {
                const S& a_it = a(i, t);
                if (traits::is_zero(a_it)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    r(i, j) += a_it * b(t, j);
                }
            }
        }
        return r;
    }

    Matrix column(std::size_t j) const {
        Matrix c(rows_, 1);
        for (std::size_t i = 0; i < rows_; ++i) c(i, 0) = (*this)(i, j);
        return c;
    }

private:
    void require_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw std::invalid_argument("Matrix: shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<S> data_;
};

using ExactMatrix = Matrix<ExactScalar>;
using FloatMatrix = Matrix<FloatScalar>;

// Conjugate transpose.
template <class S>
Matrix<S> adjoint(const Matrix<S>& m) {
    Matrix<S> r(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            r(j, i) = scalar_traits<S>::conj(m(i, j));
    return r;
}

// [A, B] = AB - BA. Both operands square and of equal size.
template <class S>
Matrix<S> commutator(const Matrix<S>& a, const Matrix<S>& b) {
    if (!a.is_square() || a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("commutator: operands must be square and of equal shape");
    }
    return a * b - b * a;
}

template <class S>
typename scalar_traits<S>::real_type frobenius_sq(const Matrix<S>& m) {
    typename scalar_traits<S>::real_type acc{};
    for (const auto& v : m.data()) acc += scalar_traits<S>::norm_sq(v);
    return acc;
}

// Frobenius norm as a double. In the exact backend the squared norm is a
// rational, so zero stays exactly zero after the conversion.
template <class S>
double frobenius(const Matrix<S>& m) {
    if constexpr (scalar_traits<S>::is_exact) {
        return std::sqrt(to_double(frobenius_sq(m)));
    } else {
        return std::sqrt(frobenius_sq(m));
    }
}

template <class S>
Matrix<S> matrix_power(const Matrix<S>& m, unsigned n) {
    if (!m.is_square()) throw std::invalid_argument("matrix_power: non-square matrix");
    Matrix<S> r = Matrix<S>::identity(m.rows());
    for (unsigned k = 0; k < n; ++k) r = r * m;
    return r;
}

inline FloatMatrix to_float(const ExactMatrix& m) {
    FloatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            r(i, j) = m(i, j).to_complex();
    return r;
}

// [B | A] column concatenation; row counts must agree.
template <class S>
Matrix<S> hcat(const Matrix<S>& b, const Matrix<S>& a) {
    if (b.rows() != a.rows()) throw std::invalid_argument("hcat: row count mismatch");
    Matrix<S> r(b.rows(), b.cols() + a.cols());
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) = b(i, j);
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, b.cols() + j) = a(i, j);
    }
    return r;
}

// Matrix whose columns are the given vectors (all of one length).
template <class S>
Matrix<S> columns_to_matrix(const std::vector<std::vector<S>>& cols, std::size_t rows) {
    Matrix<S> r(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows) throw std::invalid_argument("columns_to_matrix: length mismatch");
        for (std::size_t i = 0; i < rows; ++i) r(i, j) = cols[j][i];
    }
    return r;
}

} // namespace epkit
