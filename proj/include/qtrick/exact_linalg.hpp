#pragma once

#include <cstddef>
#include <vector>

#include "qtrick/error.hpp"
#include "qtrick/matrix.hpp"
#include "qtrick/numbers.hpp"

namespace qtrick {

// Exact determinant by fraction-free (Bareiss) elimination.  Intermediate
// entries are minors of A, which keeps growth polynomial instead of the
// exponential blowup of naive integer Gaussian elimination.
inline Int det(const IntMatrix& a) {
    require(a.is_square(), ErrorKind::bad_matrix_shape, "det of non-square matrix");
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    IntMatrix m = a;
    Int sign = 1;
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0) ++p;
            if (p == n) return 0;
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Int num = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(m(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            m(i, k) = 0;
        }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

// Exact inverse over Q by Gauss-Jordan elimination.
inline RatMatrix inv(const RatMatrix& a) {
    require(a.is_square(), ErrorKind::bad_matrix_shape, "inv of non-square matrix");
    const std::size_t n = a.rows();
    RatMatrix m = a;
    RatMatrix x = RatMatrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && m(p, k) == 0) ++p;
        if (p == n) fail(ErrorKind::singular, "matrix has no inverse");
        if (p != k) {
            m.swap_rows(k, p);
            x.swap_rows(k, p);
        }
        Rat inv_pivot = 1 / m(k, k);
        m.scale_row(k, inv_pivot);
        x.scale_row(k, inv_pivot);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || m(i, k) == 0) continue;
            Rat c = -m(i, k);
            m.add_row_multiple(i, c, k);
            x.add_row_multiple(i, c, k);
        }
    }
    return x;
}

inline RatMatrix inv(const IntMatrix& a) { return inv(to_rational(a)); }

// Rank over Q, by fraction-free elimination on a working copy.
inline std::size_t rank(const IntMatrix& a) {
    IntMatrix m = a;
    const std::size_t rows = m.rows(), cols = m.cols();
    std::size_t r = 0;
    Int prev = 1;
    for (std::size_t j = 0; j < cols && r < rows; ++j) {
        std::size_t p = r;
        while (p < rows && m(p, j) == 0) ++p;
        if (p == rows) continue;
        if (p != r) m.swap_rows(r, p);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t k = j + 1; k < cols; ++k) {
                Int num = m(i, k) * m(r, j) - m(i, j) * m(r, k);
                mpz_divexact(m(i, k).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            m(i, j) = 0;
        }
        prev = m(r, j);
        ++r;
    }
    return r;
}

struct HnfResult {
    IntMatrix h;  // canonical basis of the column lattice, zero columns stripped
    IntMatrix u;  // unimodular, a * u = [h | 0]
};

// Column-style Hermite normal form of the column lattice of A.
//
// H is lower echelon with positive pivots; in each pivot row the entries in
// earlier columns are reduced into [0, pivot).  Equal column lattices give
// bit-identical H, which is what every lattice-equality test in this library
// rests on.
inline HnfResult hnf(const IntMatrix& a) {
    const std::size_t rows = a.rows(), cols = a.cols();
    IntMatrix h = a;
    IntMatrix u = IntMatrix::identity(cols);
    std::vector<std::size_t> pivot_row;  // pivot_row[k] = row of k-th pivot column
    std::size_t k = 0;                   // next pivot column
    for (std::size_t i = 0; i < rows && k < cols; ++i) {
        // gcd-combine columns k..cols-1 so row i has a single nonzero at column k
        std::size_t p = k;
        while (p < cols && h(i, p) == 0) ++p;
        if (p == cols) continue;
        if (p != k) {
            h.swap_columns(k, p);
            u.swap_columns(k, p);
        }
        for (std::size_t j = k + 1; j < cols; ++j) {
            while (h(i, j) != 0) {
                Int q = h(i, k) / h(i, j);  // truncated division is fine for the Euclid loop
                if (q != 0) {
                    h.add_column_multiple(k, -q, j);
                    u.add_column_multiple(k, -q, j);
                }
                h.swap_columns(k, j);
                u.swap_columns(k, j);
            }
        }
        if (h(i, k) < 0) {
            h.scale_column(k, Int(-1));
            u.scale_column(k, Int(-1));
        }
        // reduce earlier columns of the pivot row into [0, pivot)
        for (std::size_t j = 0; j < k; ++j) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), h(i, j).get_mpz_t(), h(i, k).get_mpz_t());
            if (q != 0) {
                h.add_column_multiple(j, -q, k);
                u.add_column_multiple(j, -q, k);
            }
        }
        pivot_row.push_back(i);
        ++k;
    }
    HnfResult res;
    res.h = h.block(0, 0, rows, k);
    res.u = u;
    return res;
}

struct SnfResult {
    IntMatrix s;  // diagonal, nonnegative, each entry divides the next
    IntMatrix u;  // unimodular row transform
    IntMatrix v;  // unimodular column transform; u * a * v = s
};

// Smith normal form with both transforms.
inline SnfResult snf(const IntMatrix& a) {
    const std::size_t rows = a.rows(), cols = a.cols();
    IntMatrix s = a;
    IntMatrix u = IntMatrix::identity(rows);
    IntMatrix v = IntMatrix::identity(cols);
    const std::size_t t = rows < cols ? rows : cols;

    for (std::size_t k = 0; k < t; ++k) {
        // move a nonzero entry to (k, k)
        std::size_t pi = k, pj = k;
        bool found = false;
        for (std::size_t i = k; i < rows && !found; ++i)
            for (std::size_t j = k; j < cols; ++j)
                if (s(i, j) != 0) {
                    pi = i;
                    pj = j;
                    found = true;
                    break;
                }
        if (!found) break;
        if (pi != k) {
            s.swap_rows(k, pi);
            u.swap_rows(k, pi);
        }
        if (pj != k) {
            s.swap_columns(k, pj);
            v.swap_columns(k, pj);
        }

        while (true) {
            // alternate row/column elimination until row k and column k are clear
            bool dirty = true;
            while (dirty) {
                dirty = false;
                for (std::size_t i = k + 1; i < rows; ++i) {
                    while (s(i, k) != 0) {
                        Int q = s(i, k) / s(k, k);
                        if (q != 0) {
                            s.add_row_multiple(i, -q, k);
                            u.add_row_multiple(i, -q, k);
                        }
                        if (s(i, k) != 0) {
                            s.swap_rows(k, i);
                            u.swap_rows(k, i);
                            dirty = true;
                        }
                    }
                }
                for (std::size_t j = k + 1; j < cols; ++j) {
                    while (s(k, j) != 0) {
                        Int q = s(k, j) / s(k, k);
                        if (q != 0) {
                            s.add_column_multiple(j, -q, k);
                            v.add_column_multiple(j, -q, k);
                        }
                        if (s(k, j) != 0) {
                            s.swap_columns(k, j);
                            v.swap_columns(k, j);
                            dirty = true;
                        }
                    }
                }
            }

            // the pivot must divide every later entry; fold an offender into
            // row k and re-eliminate (the pivot then shrinks to a gcd)
            std::size_t fold_row = rows;
            for (std::size_t i = k + 1; i < rows && fold_row == rows; ++i)
                for (std::size_t j = k + 1; j < cols; ++j)
                    if (s(i, j) % s(k, k) != 0) {
                        fold_row = i;
                        break;
                    }
            if (fold_row == rows) break;
            s.add_row_multiple(k, Int(1), fold_row);
            u.add_row_multiple(k, Int(1), fold_row);
        }

        if (s(k, k) < 0) {
            s.scale_row(k, Int(-1));
            u.scale_row(k, Int(-1));
        }
    }
    return {s, u, v};
}

// Nontrivial invariant factors (> 1) of coker(A) = Z^rows / A Z^cols.
inline std::vector<Int> invariant_factors(const IntMatrix& a) {
    SnfResult r = snf(a);
    std::vector<Int> f;
    const std::size_t t = a.rows() < a.cols() ? a.rows() : a.cols();
    for (std::size_t k = 0; k < t; ++k)
        if (r.s(k, k) > 1) f.push_back(r.s(k, k));
    return f;
}

// Elementary divisors (d_1 | d_2 | ... | d_g) of a nondegenerate alternating
// form.  The Smith form of such a matrix is diag(d_1, d_1, ..., d_g, d_g);
// we peel off the pairs.
inline std::vector<Int> symplectic_type(const IntMatrix& e) {
    require(e.is_square(), ErrorKind::bad_matrix_shape, "form matrix must be square");
    require(e.transpose() == -e, ErrorKind::not_alternating, "form is not alternating");
    require(e.rows() % 2 == 0, ErrorKind::bad_matrix_shape, "alternating form of odd rank");
    const std::size_t n = e.rows();
    SnfResult r = snf(e);
    for (std::size_t k = 0; k < n; ++k)
        require(r.s(k, k) != 0, ErrorKind::degenerate, "form is degenerate");
    std::vector<Int> type;
    for (std::size_t k = 0; k < n; k += 2) {
        require(r.s(k, k) == r.s(k + 1, k + 1), ErrorKind::internal_inconsistency,
                "Smith form of an alternating matrix must pair up");
        type.push_back(r.s(k, k));
    }
    return type;
}

// True iff the column lattices of A and B coincide.  Both must span
// full-rank lattices of the same ambient rank; decided by comparing
// Hermite forms after clearing denominators by a common factor.
inline bool lattice_equal(const RatMatrix& a, const RatMatrix& b) {
    require(a.rows() == b.rows(), ErrorKind::bad_matrix_shape,
            "lattices live in different ambient spaces");
    Int d = 1;
    mpz_lcm(d.get_mpz_t(), common_denominator(a).get_mpz_t(),
            common_denominator(b).get_mpz_t());
    IntMatrix ia = scale_to_integral(a, d);
    IntMatrix ib = scale_to_integral(b, d);
    require(rank(ia) == a.rows() && rank(ib) == b.rows(), ErrorKind::rank_deficient,
            "columns do not span a full-rank lattice");
    return hnf(ia).h == hnf(ib).h;
}

}  // namespace qtrick
