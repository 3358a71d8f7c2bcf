#pragma once

#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qtrick/error.hpp"
#include "qtrick/numbers.hpp"

namespace qtrick {

// Dense matrix over an exact scalar type (Int or Rat), row-major storage.
// Values are plain data: copyable, comparable, freely shareable.
template <class T>
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        require(entries_.size() == rows_ * cols_, ErrorKind::bad_matrix_shape,
                "entry count does not match shape");
    }

    Matrix(std::initializer_list<std::initializer_list<T>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        entries_.reserve(rows_ * cols_);
        for (const auto& row : rows) {
            require(row.size() == cols_, ErrorKind::bad_matrix_shape, "ragged rows");
            for (const auto& x : row) entries_.push_back(x);
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    const T& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    T& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

    const std::vector<T>& entries() const { return entries_; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix block(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const {
        require(i0 + r <= rows_ && j0 + c <= cols_, ErrorKind::bad_matrix_shape,
                "block outside matrix");
        Matrix b(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
        return b;
    }

    void set_block(std::size_t i0, std::size_t j0, const Matrix& b) {
        require(i0 + b.rows() <= rows_ && j0 + b.cols() <= cols_, ErrorKind::bad_matrix_shape,
                "block outside matrix");
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) (*this)(i0 + i, j0 + j) = b(i, j);
    }

    Matrix column(std::size_t j) const { return block(0, j, rows_, 1); }

    void swap_columns(std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < rows_; ++i)
            std::swap((*this)(i, a), (*this)(i, b));
    }

    void swap_rows(std::size_t a, std::size_t b) {
        for (std::size_t j = 0; j < cols_; ++j)
            std::swap((*this)(a, j), (*this)(b, j));
    }

    // col_b += c * col_a
    void add_column_multiple(std::size_t b, const T& c, std::size_t a) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, b) += c * (*this)(i, a);
    }

    // row_b += c * row_a
    void add_row_multiple(std::size_t b, const T& c, std::size_t a) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(b, j) += c * (*this)(a, j);
    }

    void scale_column(std::size_t j, const T& c) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) *= c;
    }

    void scale_row(std::size_t i, const T& c) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) *= c;
    }

    bool is_zero() const {
        for (const auto& x : entries_)
            if (x != 0) return false;
        return true;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    Matrix operator-() const {
        Matrix m(rows_, cols_);
        for (std::size_t k = 0; k < entries_.size(); ++k) m.entries_[k] = -entries_[k];
        return m;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        require(a.rows_ == b.rows_ && a.cols_ == b.cols_, ErrorKind::bad_matrix_shape,
                "shape mismatch in +");
        Matrix m(a.rows_, a.cols_);
        for (std::size_t k = 0; k < m.entries_.size(); ++k)
            m.entries_[k] = a.entries_[k] + b.entries_[k];
        return m;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        require(a.rows_ == b.rows_ && a.cols_ == b.cols_, ErrorKind::bad_matrix_shape,
                "shape mismatch in -");
        Matrix m(a.rows_, a.cols_);
        for (std::size_t k = 0; k < m.entries_.size(); ++k)
            m.entries_[k] = a.entries_[k] - b.entries_[k];
        return m;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        require(a.cols_ == b.rows_, ErrorKind::bad_matrix_shape, "shape mismatch in *");
        Matrix m(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
            }
        return m;
    }

    friend Matrix operator*(const T& c, const Matrix& a) {
        Matrix m(a.rows_, a.cols_);
        for (std::size_t k = 0; k < m.entries_.size(); ++k) m.entries_[k] = c * a.entries_[k];
        return m;
    }

    std::string str() const {
        std::ostringstream os;
        os << "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            os << (i ? "; " : "");
            for (std::size_t j = 0; j < cols_; ++j)
                os << (j ? " " : "") << to_decimal((*this)(i, j));
        }
        os << "]";
        return os.str();
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> entries_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

template <class T>
Matrix<T> block_diag(const std::vector<Matrix<T>>& blocks) {
    std::size_t r = 0, c = 0;
    for (const auto& b : blocks) r += b.rows(), c += b.cols();
    Matrix<T> m(r, c);
    std::size_t i0 = 0, j0 = 0;
    for (const auto& b : blocks) {
        m.set_block(i0, j0, b);
        i0 += b.rows();
        j0 += b.cols();
    }
    return m;
}

// m copies of the same block on the diagonal.
template <class T>
Matrix<T> block_diag_power(const Matrix<T>& b, std::size_t m) {
    return block_diag(std::vector<Matrix<T>>(m, b));
}

template <class T>
Matrix<T> kronecker(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> m(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j) == 0) continue;
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q)
                    m(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
        }
    return m;
}

// Glue [A | B] side by side.
template <class T>
Matrix<T> hconcat(const Matrix<T>& a, const Matrix<T>& b) {
    require(a.rows() == b.rows(), ErrorKind::bad_matrix_shape, "hconcat row mismatch");
    Matrix<T> m(a.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(0, a.cols(), b);
    return m;
}

// Stack [A; B].
template <class T>
Matrix<T> vconcat(const Matrix<T>& a, const Matrix<T>& b) {
    require(a.cols() == b.cols(), ErrorKind::bad_matrix_shape, "vconcat column mismatch");
    Matrix<T> m(a.rows() + b.rows(), a.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), 0, b);
    return m;
}

inline RatMatrix to_rational(const IntMatrix& a) {
    RatMatrix m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = Rat(a(i, j));
    return m;
}

inline bool is_integral(const RatMatrix& a) {
    for (const auto& x : a.entries())
        if (!is_integer(x)) return false;
    return true;
}

inline IntMatrix to_integral(const RatMatrix& a) {
    IntMatrix m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            require(is_integer(a(i, j)), ErrorKind::not_integral,
                    "entry " + to_decimal(a(i, j)) + " is not an integer");
            m(i, j) = a(i, j).get_num();
        }
    return m;
}

// Least common multiple of all entry denominators (1 for an integral matrix).
inline Int common_denominator(const RatMatrix& a) {
    Int d = 1;
    for (const auto& x : a.entries()) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.get_den().get_mpz_t());
    return d;
}

inline IntMatrix scale_to_integral(const RatMatrix& a, const Int& d) {
    IntMatrix m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            Rat scaled = Rat(d) * a(i, j);
            scaled.canonicalize();
            require(is_integer(scaled), ErrorKind::not_integral, "scale does not clear denominator");
            m(i, j) = scaled.get_num();
        }
    return m;
}

}  // namespace qtrick
