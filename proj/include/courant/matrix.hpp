#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "courant/errors.hpp"
#include "courant/rational.hpp"

namespace courant {

using Vector = std::vector<Rational>;

/// Dense row-major matrix over the rationals. Linear maps act on column
/// vectors: the matrix of f: V -> W has dim W rows and dim V columns.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_) throw DimensionMismatch("matrix entry count does not match shape");
    }
    Matrix(std::initializer_list<std::initializer_list<Rational>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols) {
        Matrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw DimensionMismatch("row length does not match column count");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }
    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    static Matrix diagonal(const Vector& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    const std::vector<Rational>& entries() const { return data_; }

    Vector row(std::size_t i) const {
        return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                      data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }
    Vector col(std::size_t j) const {
        Vector v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    std::vector<Vector> row_list() const {
        std::vector<Vector> out;
        out.reserve(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
        return out;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool is_square() const { return rows_ == cols_; }
    bool is_symmetric() const {
        if (!is_square()) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }
    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return x == 0; });
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        require_same_shape(a, b);
        Matrix c = a;
        for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
        return c;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        require_same_shape(a, b);
        Matrix c = a;
        for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] -= b.data_[k];
        return c;
    }
    friend Matrix operator-(const Matrix& a) {
        Matrix c = a;
        for (auto& x : c.data_) x = -x;
        return c;
    }
    friend Matrix operator*(const Rational& s, const Matrix& a) {
        Matrix c = a;
        for (auto& x : c.data_) x *= s;
        return c;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shape mismatch");
        Matrix c(a.rows_, b.cols_);
        Rational t;
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Rational& aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    t = aik * b(k, j);
                    c(i, j) += t;
                }
            }
        return c;
    }
    /// Matrix-vector product (column convention).
    friend Vector operator*(const Matrix& a, const Vector& x) {
        if (a.cols_ != x.size()) throw DimensionMismatch("matrix-vector shape mismatch");
        Vector y(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j)
                if (x[j] != 0) y[i] += a(i, j) * x[j];
        return y;
    }

    /// Rows of this matrix mapped through `map` (each row treated as a vector).
    Matrix map_rows(const Matrix& map) const { return (*this) * map.transpose(); }

private:
    static void require_same_shape(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

// ---------------------------------------------------------------------------
// vector helpers

inline Rational dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot product length mismatch");
    Rational s;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

/// x^T G y
inline Rational bilinear(const Vector& x, const Matrix& gram, const Vector& y) {
    if (gram.rows() != x.size() || gram.cols() != y.size())
        throw DimensionMismatch("bilinear form shape mismatch");
    Rational s;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        Rational row;
        for (std::size_t j = 0; j < y.size(); ++j)
            if (y[j] != 0) row += gram(i, j) * y[j];
        s += x[i] * row;
    }
    return s;
}

inline bool is_zero(const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

inline Vector operator+(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector length mismatch");
    Vector c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
    return c;
}
inline Vector operator-(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector length mismatch");
    Vector c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b[i];
    return c;
}
inline Vector operator*(const Rational& s, const Vector& a) {
    Vector c = a;
    for (auto& x : c) x *= s;
    return c;
}

inline Vector concat(const Vector& a, const Vector& b) {
    Vector c = a;
    c.insert(c.end(), b.begin(), b.end());
    return c;
}

inline Vector unit_vector(std::size_t n, std::size_t i) {
    Vector v(n);
    v[i] = 1;
    return v;
}

inline Vector slice(const Vector& v, std::size_t offset, std::size_t len) {
    if (offset + len > v.size()) throw DimensionMismatch("vector slice out of range");
    return Vector(v.begin() + static_cast<std::ptrdiff_t>(offset),
                  v.begin() + static_cast<std::ptrdiff_t>(offset + len));
}

// ---------------------------------------------------------------------------
// block constructions

inline Matrix hstack(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw DimensionMismatch("hstack row mismatch");
    Matrix c(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
    }
    return c;
}

inline Matrix vstack(const Matrix& a, const Matrix& b) {
    if (a.rows() == 0) return b.rows() == 0 ? Matrix(0, std::max(a.cols(), b.cols())) : b;
    if (b.rows() == 0) return a;
    if (a.cols() != b.cols()) throw DimensionMismatch("vstack column mismatch");
    Matrix c(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) c(a.rows() + i, j) = b(i, j);
    return c;
}

inline Matrix block_diag(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) c(a.rows() + i, a.cols() + j) = b(i, j);
    return c;
}

/// Columns [offset, offset+len) of every row.
inline Matrix column_block(const Matrix& m, std::size_t offset, std::size_t len) {
    if (offset + len > m.cols()) throw DimensionMismatch("column block out of range");
    Matrix c(m.rows(), len);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < len; ++j) c(i, j) = m(i, offset + j);
    return c;
}

// ---------------------------------------------------------------------------
// elimination

struct EchelonForm {
    Matrix reduced;                   // nonzero rows only, RREF
    std::vector<std::size_t> pivots;  // pivot column of each row, strictly increasing
};

/// Reduced row-echelon form with leftmost pivots; zero rows are dropped.
inline EchelonForm rref(Matrix m) {
    const std::size_t R = m.rows(), C = m.cols();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    Rational f;
    for (std::size_t c = 0; c < C && r < R; ++c) {
        std::size_t p = r;
        while (p < R && m(p, c) == 0) ++p;
        if (p == R) continue;
        if (p != r)
            for (std::size_t j = 0; j < C; ++j) std::swap(m(p, j), m(r, j));
        const Rational inv = 1 / m(r, c);
        for (std::size_t j = c; j < C; ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < R; ++i) {
            if (i == r || m(i, c) == 0) continue;
            f = m(i, c);
            for (std::size_t j = c; j < C; ++j)
                if (m(r, j) != 0) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    Matrix out(r, C);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < C; ++j) out(i, j) = m(i, j);
    return {std::move(out), std::move(pivots)};
}

inline std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

/// Basis (as rows) of {x : m x = 0}, one vector per free column, with a 1 in
/// that free column.
inline Matrix nullspace(const Matrix& m) {
    const auto ef = rref(m);
    const std::size_t n = m.cols();
    std::vector<bool> is_pivot(n, false);
    for (auto p : ef.pivots) is_pivot[p] = true;
    std::vector<Vector> basis;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        Vector v(n);
        v[f] = 1;
        for (std::size_t i = 0; i < ef.pivots.size(); ++i) v[ef.pivots[i]] = -ef.reduced(i, f);
        basis.push_back(std::move(v));
    }
    return Matrix::from_rows(basis, n);
}

inline Rational determinant(Matrix m) {
    if (!m.is_square()) throw DimensionMismatch("determinant of non-square matrix");
    const std::size_t n = m.rows();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c) == 0) continue;
            Rational f = m(i, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return det;
}

inline Matrix inverse(const Matrix& m) {
    if (!m.is_square()) throw DimensionMismatch("inverse of non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return Matrix(0, 0);
    auto ef = rref(hstack(m, Matrix::identity(n)));
    if (ef.pivots.size() < n || ef.pivots[n - 1] != n - 1) throw PreconditionViolation("matrix is singular");
    return column_block(ef.reduced, n, n);
}

/// Solves x^T A = b^T for x, i.e. expresses b as a combination of the rows of A.
/// Returns false when b is not in the row space.
inline bool row_combination(const Matrix& rows, const Vector& b, Vector& coeffs) {
    if (rows.cols() != b.size()) throw DimensionMismatch("row combination length mismatch");
    const std::size_t k = rows.rows();
    Matrix aug = hstack(rows.transpose(), Matrix::from_rows({b}, b.size()).transpose());
    auto ef = rref(aug);
    if (!ef.pivots.empty() && ef.pivots.back() == k) return false;
    coeffs.assign(k, Rational(0));
    for (std::size_t i = 0; i < ef.pivots.size(); ++i) coeffs[ef.pivots[i]] = ef.reduced(i, k);
    return true;
}

}  // namespace courant
