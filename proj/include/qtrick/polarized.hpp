#pragma once

#include <cstddef>
#include <cstdlib>
#include <vector>

#include "qtrick/error.hpp"
#include "qtrick/exact_linalg.hpp"
#include "qtrick/finite_quotient.hpp"
#include "qtrick/matrix.hpp"
#include "qtrick/numbers.hpp"

namespace qtrick {

// Lattice model of a polarized abelian variety: Z^{2g} carrying a
// nondegenerate integral alternating form E, the matrix of the polarization
// in (basis, dual basis) coordinates.  deg = |det E| = (d_1 ... d_g)^2 where
// (d_1, ..., d_g) is the symplectic type.
class PolarizedLattice {
public:
    explicit PolarizedLattice(IntMatrix e) : e_(std::move(e)) {
        require(e_.is_square(), ErrorKind::bad_matrix_shape, "polarization matrix must be square");
        require(e_.rows() % 2 == 0, ErrorKind::odd_rank, "polarized lattice has odd rank");
        require(e_.rows() > 0, ErrorKind::bad_matrix_shape, "empty polarization");
        require(e_.transpose() == -e_, ErrorKind::not_alternating,
                "polarization form must be alternating");
        type_ = symplectic_type(e_);  // throws Degenerate if det = 0
        degree_ = abs(det(e_));
        Int prod = 1;
        for (const auto& d : type_) prod *= d;
        require(prod * prod == degree_, ErrorKind::internal_inconsistency,
                "degree is not the square of the type product");
    }

    std::size_t g() const { return e_.rows() / 2; }
    std::size_t rank() const { return e_.rows(); }
    const IntMatrix& form() const { return e_; }
    const Int& degree() const { return degree_; }
    const std::vector<Int>& type() const { return type_; }

    bool is_principal() const { return degree_ == 1; }

    friend bool operator==(const PolarizedLattice& a, const PolarizedLattice& b) {
        return a.e_ == b.e_;
    }

private:
    IntMatrix e_;
    std::vector<Int> type_;
    Int degree_;
};

inline PolarizedLattice make_polarized(IntMatrix e) { return PolarizedLattice(std::move(e)); }

inline Int degree(const PolarizedLattice& x) { return x.degree(); }

// The product polarization on X^m: block-diagonal copies of E in copy-major
// coordinates (vector of X^m = (x^(1), ..., x^(m)), each block of length 2g).
inline PolarizedLattice power_polarization(const PolarizedLattice& x, std::size_t m) {
    require(m >= 1, ErrorKind::bad_matrix_shape, "power must be positive");
    return PolarizedLattice(block_diag_power(x.form(), m));
}

// A homomorphism of lattice models; rational entries are permitted as
// intermediate Q-isogeny data, integral M means an actual homomorphism.
struct Morphism {
    std::size_t source_rank = 0;
    std::size_t target_rank = 0;
    RatMatrix m;

    bool is_homomorphism() const { return is_integral(m); }
};

inline Morphism make_morphism(RatMatrix m) {
    Morphism h;
    h.source_rank = m.cols();
    h.target_rank = m.rows();
    h.m = std::move(m);
    return h;
}

// In (basis, dual basis) coordinates the dual of a morphism is the plain
// transpose; it reverses composition order.
inline Morphism dual_morphism(const Morphism& u) {
    Morphism d;
    d.source_rank = u.target_rank;
    d.target_rank = u.source_rank;
    d.m = u.m.transpose();
    return d;
}

// ker(lambda) as a finite quotient: E^{-1} Z^{2g} / Z^{2g}, of order deg(lambda).
inline FiniteQuotient kernel_of_polarization(const PolarizedLattice& x) {
    return FiniteQuotient(x.rank(), inv(x.form()));
}

// Canonical representative of a value in Q/Z.
class PairingValue {
public:
    PairingValue() : q_(0) {}
    explicit PairingValue(const Rat& q) : q_(mod_one(q)) {}

    const Rat& value() const { return q_; }
    bool is_zero() const { return q_ == 0; }

    friend bool operator==(const PairingValue& a, const PairingValue& b) { return a.q_ == b.q_; }

private:
    Rat q_;
};

namespace detail {

// Mutation hook for the selftest: when QTRICK_DEBUG_FLIP_PAIRING is set the
// pairing is wrong on purpose, so the isotropy checks must go red.  Read
// once, never mutated.
inline bool debug_flip_pairing() {
    static const bool flip = std::getenv("QTRICK_DEBUG_FLIP_PAIRING") != nullptr;
    return flip;
}

}  // namespace detail

// The pairing on ker(form) modeling the Riemann form: (u, v) -> u^T E v mod Z
// on rational lifts.  Well-defined because E maps Z^r into Z^r and the lifts
// lie in E^{-1} Z^r.
inline PairingValue riemann_pairing(const IntMatrix& form, const RatMatrix& u, const RatMatrix& v) {
    require(u.rows() == form.rows() && u.cols() == 1 && v.rows() == form.rows() && v.cols() == 1,
            ErrorKind::bad_matrix_shape, "pairing arguments must be column vectors");
    RatMatrix ef = to_rational(form);
    require(is_integral(ef * u) && is_integral(ef * v), ErrorKind::not_in_kernel,
            "pairing argument is not in the kernel of the form");
    RatMatrix val = u.transpose() * ef * v;
    if (detail::debug_flip_pairing()) return PairingValue(val(0, 0) + Rat(1, 2));
    return PairingValue(val(0, 0));
}

enum class IsotropyStatus { not_isotropic, isotropic, maximal_isotropic };

// Classify a subgroup H of ker(E) under the pairing.  Isotropic iff all
// pairwise generator pairings vanish; maximal iff additionally
// order(H)^2 = |det E|.
inline IsotropyStatus subgroup_isotropy(const IntMatrix& e, const FiniteQuotient& h) {
    require(e.rows() == h.ambient_rank(), ErrorKind::bad_matrix_shape,
            "subgroup lives in a different ambient space");
    RatMatrix ef = to_rational(e);
    const RatMatrix& gens = h.generators();
    require(is_integral(ef * gens), ErrorKind::not_a_subgroup_of_kernel,
            "generators do not lie in the kernel of the form");
    for (std::size_t i = 0; i < gens.cols(); ++i)
        for (std::size_t j = i; j < gens.cols(); ++j) {
            if (!riemann_pairing(e, gens.column(i), gens.column(j)).is_zero())
                return IsotropyStatus::not_isotropic;
        }
    if (h.order() * h.order() == abs(det(e))) return IsotropyStatus::maximal_isotropic;
    return IsotropyStatus::isotropic;
}

}  // namespace qtrick
