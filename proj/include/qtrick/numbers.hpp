#pragma once

#include <gmpxx.h>

#include <string>

#include "qtrick/error.hpp"

namespace qtrick {

// All arithmetic in this library is exact.  Int is an arbitrary-precision
// integer, Rat a fraction kept in lowest terms with positive denominator
// (gmp canonical form).
using Int = mpz_class;
using Rat = mpq_class;

inline Int int_from_string(const std::string& s) {
    if (s.empty()) fail(ErrorKind::non_integer_entry, "empty integer literal");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) fail(ErrorKind::non_integer_entry, "sign without digits: '" + s + "'");
    for (std::size_t k = i; k < s.size(); ++k)
        if (s[k] < '0' || s[k] > '9')
            fail(ErrorKind::non_integer_entry, "not a decimal integer: '" + s + "'");
    // gmp does not take a leading '+'
    return s[0] == '+' ? Int(s.substr(1), 10) : Int(s, 10);
}

// Accepts "p" or "p/q" with q > 0 after canonicalization.
inline Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(int_from_string(s));
    Int num = int_from_string(s.substr(0, slash));
    Int den = int_from_string(s.substr(slash + 1));
    if (den == 0) fail(ErrorKind::non_integer_entry, "zero denominator: '" + s + "'");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline std::string to_decimal(const Int& x) { return x.get_str(10); }

inline std::string to_decimal(const Rat& x) {
    if (x.get_den() == 1) return x.get_num().get_str(10);
    return x.get_num().get_str(10) + "/" + x.get_den().get_str(10);
}

inline bool is_integer(const Rat& x) { return x.get_den() == 1; }

// Canonical representative of x in Q/Z, i.e. the fractional part in [0, 1).
inline Rat mod_one(const Rat& x) {
    Int floor_q;
    mpz_fdiv_q(floor_q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    Rat r = x - Rat(floor_q);
    r.canonicalize();
    return r;
}

}  // namespace qtrick
