#pragma once

#include <cstddef>
#include <vector>

#include "qtrick/error.hpp"
#include "qtrick/exact_linalg.hpp"
#include "qtrick/matrix.hpp"
#include "qtrick/numbers.hpp"

namespace qtrick {

// A finite abelian group presented as (Z^r + span of rational columns) / Z^r.
// Construction canonicalizes: the stored generators are one column per
// nontrivial invariant factor, entries reduced into [0, 1), so equal
// subgroups compare equal entrywise.
class FiniteQuotient {
public:
    FiniteQuotient(std::size_t ambient_rank, const RatMatrix& raw_generators)
        : ambient_rank_(ambient_rank) {
        require(raw_generators.rows() == ambient_rank || raw_generators.cols() == 0,
                ErrorKind::bad_matrix_shape, "generator columns must live in the ambient space");
        canonicalize(raw_generators);
    }

    static FiniteQuotient trivial(std::size_t ambient_rank) {
        return FiniteQuotient(ambient_rank, RatMatrix(ambient_rank, 0));
    }

    std::size_t ambient_rank() const { return ambient_rank_; }

    // Canonical coset representatives, one column per invariant factor,
    // entries in [0, 1); generator i has exact order invariant_factors()[i].
    const RatMatrix& generators() const { return generators_; }

    const std::vector<Int>& invariant_factors() const { return factors_; }

    const Int& order() const { return order_; }

    bool is_trivial() const { return order_ == 1; }

    bool is_killed_by(const Int& n) const {
        for (std::size_t j = 0; j < generators_.cols(); ++j)
            for (std::size_t i = 0; i < ambient_rank_; ++i) {
                Rat scaled = Rat(n) * generators_(i, j);
                scaled.canonicalize();
                if (!is_integer(scaled)) return false;
            }
        return true;
    }

    // Rational basis (columns) of the overlattice Z^r + span(generators).
    const RatMatrix& overlattice_basis() const { return basis_; }

    friend bool operator==(const FiniteQuotient& a, const FiniteQuotient& b) {
        return a.ambient_rank_ == b.ambient_rank_ && a.generators_ == b.generators_;
    }

private:
    void canonicalize(const RatMatrix& raw) {
        const std::size_t r = ambient_rank_;
        Int d = common_denominator(raw);

        // Hermite basis of d*(Z^r + span(raw)); full rank because it
        // contains d*Z^r.
        IntMatrix stacked = hconcat(d * IntMatrix::identity(r), scale_to_integral(raw, d));
        IntMatrix hb = hnf(stacked).h;
        require(hb.cols() == r, ErrorKind::internal_inconsistency,
                "overlattice basis is not full rank");

        basis_ = RatMatrix(r, r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                basis_(i, j) = Rat(hb(i, j), d);
                basis_(i, j).canonicalize();
            }

        // Z^r written in the overlattice basis: integral because Z^r is a
        // sublattice of the overlattice.
        IntMatrix rel = to_integral(inv(basis_));
        SnfResult s = snf(rel);

        order_ = 1;
        for (std::size_t k = 0; k < r; ++k) order_ *= s.s(k, k);

        // Quotient generators: columns of basis * U^{-1} whose invariant
        // factor exceeds 1, reduced into [0, 1).
        IntMatrix u_inv = to_integral(inv(to_rational(s.u)));
        RatMatrix gen_cols = basis_ * to_rational(u_inv);
        std::size_t count = 0;
        for (std::size_t k = 0; k < r; ++k)
            if (s.s(k, k) > 1) ++count;
        generators_ = RatMatrix(r, count);
        factors_.clear();
        std::size_t out = 0;
        for (std::size_t k = 0; k < r; ++k) {
            if (s.s(k, k) <= 1) continue;
            factors_.push_back(s.s(k, k));
            for (std::size_t i = 0; i < r; ++i) generators_(i, out) = mod_one(gen_cols(i, k));
            ++out;
        }
    }

    std::size_t ambient_rank_ = 0;
    RatMatrix generators_;
    RatMatrix basis_;
    std::vector<Int> factors_;
    Int order_ = 1;
};

}  // namespace qtrick
