#pragma once

#include <cstddef>
#include <vector>

#include "cubic3/numeric.hpp"

namespace cubic3 {

/// Dense matrix over an exact scalar (Int or Rat).  Row-major.
template <typename T>
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
    Mat(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_)
            throw DomainError("MatrixShape", "matrix data size mismatch");
    }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    Mat operator*(const Mat& o) const {
        if (cols_ != o.rows_) throw DomainError("MatrixShape", "matrix product shape mismatch");
        Mat r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const T& a = (*this)(i, k);
                if (a == T(0)) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }

    std::vector<T> operator*(const std::vector<T>& v) const {
        if (cols_ != v.size()) throw DomainError("MatrixShape", "matrix-vector shape mismatch");
        std::vector<T> r(rows_, T(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    Mat transposed() const {
        Mat r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    std::vector<T> column(std::size_t j) const {
        std::vector<T> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

private:
    std::size_t rows_, cols_;
    std::vector<T> data_;
};

using IntMat = Mat<Int>;
using RatMat = Mat<Rat>;

inline RatMat to_rational(const IntMat& m) {
    RatMat r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
    return r;
}

/// Integral matrix back from a rational one; throws if any entry has a denominator.
inline IntMat to_integral(const RatMat& m) {
    IntMat r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = to_int(m(i, j));
    return r;
}

inline Rat det(RatMat m) {
    if (!m.square()) throw DomainError("MatrixShape", "determinant of non-square matrix");
    std::size_t n = m.rows();
    Rat d(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m(piv, col) == 0) ++piv;
        if (piv == n) return Rat(0);
        if (piv != col) {
            for (std::size_t j = col; j < n; ++j) std::swap(m(piv, j), m(col, j));
            d = -d;
        }
        d *= m(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            if (m(i, col) == 0) continue;
            Rat f = m(i, col) / m(col, col);
            for (std::size_t j = col; j < n; ++j) m(i, j) -= f * m(col, j);
        }
    }
    return d;
}

inline Int det(const IntMat& m) { return to_int(det(to_rational(m))); }

inline std::size_t rank(RatMat m) {
    std::size_t n = m.rows(), c = m.cols(), r = 0;
    for (std::size_t col = 0; col < c && r < n; ++col) {
        std::size_t piv = r;
        while (piv < n && m(piv, col) == 0) ++piv;
        if (piv == n) continue;
        if (piv != r)
            for (std::size_t j = col; j < c; ++j) std::swap(m(piv, j), m(r, j));
        for (std::size_t i = r + 1; i < n; ++i) {
            if (m(i, col) == 0) continue;
            Rat f = m(i, col) / m(r, col);
            for (std::size_t j = col; j < c; ++j) m(i, j) -= f * m(r, j);
        }
        ++r;
    }
    return r;
}

inline std::size_t rank(const IntMat& m) { return rank(to_rational(m)); }

inline RatMat inverse(const RatMat& m) {
    if (!m.square()) throw DomainError("MatrixShape", "inverse of non-square matrix");
    std::size_t n = m.rows();
    RatMat a = m, inv = RatMat::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a(piv, col) == 0) ++piv;
        if (piv == n) throw DomainError("SingularMatrix", "matrix is singular");
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        Rat p = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) /= p;
            inv(col, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || a(i, col) == 0) continue;
            Rat f = a(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

/// Column-style Hermite normal form: returns H with the same column span over Z
/// as `m`, columns in echelon form (pivot rows increasing, pivots positive,
/// entries right of a pivot reduced mod the pivot), zero columns dropped.
inline IntMat hermite_columns(IntMat m) {
    std::size_t nr = m.rows(), nc = m.cols();
    std::size_t col = 0;
    for (std::size_t row = 0; row < nr && col < nc; ++row) {
        // gcd-reduce columns col..nc-1 on this row
        while (true) {
            std::size_t nz = nc;
            for (std::size_t j = col; j < nc; ++j)
                if (m(row, j) != 0 && (nz == nc || abs(m(row, j)) < abs(m(row, nz)))) nz = j;
            if (nz == nc) break;  // row is zero from col on
            if (nz != col)
                for (std::size_t i = 0; i < nr; ++i) std::swap(m(i, nz), m(i, col));
            bool done = true;
            for (std::size_t j = col + 1; j < nc; ++j) {
                if (m(row, j) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), m(row, j).get_mpz_t(), m(row, col).get_mpz_t());
                for (std::size_t i = 0; i < nr; ++i) m(i, j) -= q * m(i, col);
                if (m(row, j) != 0) done = false;
            }
            if (done) break;
        }
        if (m(row, col) == 0) continue;
        if (m(row, col) < 0)
            for (std::size_t i = 0; i < nr; ++i) m(i, col) = -m(i, col);
        // reduce earlier columns against this pivot
        for (std::size_t j = 0; j < col; ++j) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), m(row, j).get_mpz_t(), m(row, col).get_mpz_t());
            if (q != 0)
                for (std::size_t i = 0; i < nr; ++i) m(i, j) -= q * m(i, col);
        }
        ++col;
    }
    // drop zero columns (those past `col` are zero by construction)
    IntMat h(nr, col);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < col; ++j) h(i, j) = m(i, j);
    return h;
}

/// Basis of the integer kernel {v in Z^n : A v = 0}, Hermite-reduced for
/// determinism.  Returned as columns of an n x k matrix.
inline IntMat integer_kernel(const IntMat& a) {
    std::size_t nr = a.rows(), nc = a.cols();
    // stack [A; I] and column-reduce A's part
    IntMat m(nr + nc, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < nc; ++j) m(nr + j, j) = 1;

    std::size_t col = 0;
    for (std::size_t row = 0; row < nr && col < nc; ++row) {
        while (true) {
            std::size_t nz = nc;
            for (std::size_t j = col; j < nc; ++j)
                if (m(row, j) != 0 && (nz == nc || abs(m(row, j)) < abs(m(row, nz)))) nz = j;
            if (nz == nc) break;
            if (nz != col)
                for (std::size_t i = 0; i < nr + nc; ++i) std::swap(m(i, nz), m(i, col));
            bool done = true;
            for (std::size_t j = col + 1; j < nc; ++j) {
                if (m(row, j) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), m(row, j).get_mpz_t(), m(row, col).get_mpz_t());
                for (std::size_t i = 0; i < nr + nc; ++i) m(i, j) -= q * m(i, col);
                if (m(row, j) != 0) done = false;
            }
            if (done) break;
        }
        if (m(row, col) != 0) ++col;
    }
    // columns col..nc-1 have zero A-part: their I-part spans the kernel
    IntMat k(nc, nc - col);
    for (std::size_t j = col; j < nc; ++j)
        for (std::size_t i = 0; i < nc; ++i) k(i, j - col) = m(nr + i, j);
    return hermite_columns(k);
}

}  // namespace cubic3
