#pragma once

#include <utility>

#include "qtrick/error.hpp"
#include "qtrick/matrix.hpp"
#include "qtrick/numbers.hpp"

namespace qtrick {

// A quadruple a^2 + b^2 + c^2 + d^2 = s with s >= 1.  The quaternion trick
// needs s = -1 mod n; four_squares always produces such an s, a manual
// override may not (congruence_holds tells which).
struct FourSquares {
    Int n;  // the modulus the quadruple is for (= deg lambda)
    Int s;
    Int a, b, c, d;

    FourSquares(Int n_, Int a_, Int b_, Int c_, Int d_)
        : n(std::move(n_)), a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
        require(n >= 1, ErrorKind::bad_type, "modulus must be positive");
        s = a * a + b * b + c * c + d * d;
        require(s >= 1, ErrorKind::bad_type, "the quadruple must not be all zero");
    }

    bool congruence_holds() const { return (s + 1) % n == 0; }
};

inline Int isqrt(const Int& x) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
    return r;
}

// Decompose s into four squares, returning the lexicographically largest
// quadruple with a >= b >= c >= d >= 0.  Termination is Lagrange's theorem;
// the descending scan makes the choice deterministic.
inline FourSquares decompose_four_squares(const Int& n, const Int& s) {
    for (Int a = isqrt(s); a >= 0; --a) {
        Int ra = s - a * a;
        Int b = isqrt(ra);
        if (b > a) b = a;
        for (; b >= 0; --b) {
            Int rb = ra - b * b;
            Int c = isqrt(rb);
            if (c > b) c = b;
            for (; c >= 0; --c) {
                Int rc = rb - c * c;
                if (mpz_perfect_square_p(rc.get_mpz_t())) {
                    Int d = isqrt(rc);
                    if (d <= c) return FourSquares(n, a, b, c, d);
                }
            }
        }
    }
    fail(ErrorKind::internal_inconsistency, "four-square decomposition not found");
}

// Minimal s >= 1 with s = -1 mod n, decomposed deterministically.
inline FourSquares four_squares(const Int& n) {
    require(n >= 1, ErrorKind::bad_type, "four_squares needs a positive modulus");
    Int s = n > 1 ? Int(n - 1) : Int(1);
    FourSquares q = decompose_four_squares(n, s);
    require(q.s == s && q.congruence_holds(), ErrorKind::internal_inconsistency,
            "four-square search violated its contract");
    return q;
}

// The integer 4x4 "quaternion" built from the quadruple; satisfies
// I^T I = I I^T = s * Id_4.
inline IntMatrix quaternion_matrix(const FourSquares& q) {
    const Int &a = q.a, &b = q.b, &c = q.c, &d = q.d;
    return IntMatrix{{a, -b, -c, -d},
                     {b, a, d, -c},
                     {c, -d, a, b},
                     {d, c, -b, a}};
}

}  // namespace qtrick
