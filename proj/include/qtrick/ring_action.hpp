#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qtrick/error.hpp"
#include "qtrick/exact_linalg.hpp"
#include "qtrick/matrix.hpp"
#include "qtrick/numbers.hpp"
#include "qtrick/polarized.hpp"

namespace qtrick {

// Rosati conjugation with respect to the form E: M -> E^{-1} M^T E.  For a
// valid action this is the matrix of iota(e^*), forced by
// lambda . iota(e) = iota(e^*)^t . lambda since lambda is an isogeny.
inline RatMatrix rosati(const IntMatrix& e, const IntMatrix& m) {
    return inv(e) * to_rational(m.transpose()) * to_rational(e);
}

// One named ring generator e with its matrix iota(e); the star image may be
// declared by the user or left to the Rosati formula.
struct ActionGenerator {
    std::string name;
    IntMatrix matrix;
    std::optional<IntMatrix> star;
};

// An involutive ring (O, *) acting on a polarized lattice through named
// integer matrix generators.  The identity of O is implicit and always
// maps to the identity matrix.
struct RingAction {
    PolarizedLattice lattice;
    std::vector<ActionGenerator> generators;
};

// The same action with every star image resolved and every compatibility
// condition checked; the only way to get one is validate_action.
struct ValidatedAction {
    PolarizedLattice lattice;
    std::vector<std::string> names;
    std::vector<IntMatrix> matrices;       // iota(e) per generator
    std::vector<IntMatrix> star_matrices;  // iota(e^*) per generator

    std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return i;
        fail(ErrorKind::unknown_generator, "no generator named '" + name + "'");
    }
};

// Checks, for every generator M:
//   - shape 2g x 2g,
//   - the Rosati image E^{-1} M^T E is integral,
//   - a declared star matrix equals the Rosati image exactly,
//   - conjugation is involutive on M,
// and that {Id} together with the non-identity generators is Z-linearly
// independent (iota must embed a free Z-module).
inline ValidatedAction validate_action(const RingAction& action) {
    const IntMatrix& e = action.lattice.form();
    const std::size_t r = action.lattice.rank();

    ValidatedAction out{action.lattice, {}, {}, {}};
    for (const auto& gen : action.generators) {
        require(gen.matrix.rows() == r && gen.matrix.cols() == r, ErrorKind::bad_matrix_shape,
                "generator '" + gen.name + "' has wrong shape");
        RatMatrix star_rat = rosati(e, gen.matrix);
        require(is_integral(star_rat), ErrorKind::non_integral_rosati,
                "Rosati image of generator '" + gen.name + "' is not integral");
        IntMatrix star = to_integral(star_rat);
        if (gen.star) {
            require(*gen.star == star, ErrorKind::involution_mismatch,
                    "declared star of '" + gen.name + "' differs from the Rosati image");
        }
        RatMatrix back = rosati(e, star);
        require(is_integral(back) && to_integral(back) == gen.matrix,
                ErrorKind::internal_inconsistency, "Rosati conjugation failed to be involutive");
        if (gen.matrix == IntMatrix::identity(r)) {
            // explicit identity generator: keep the name usable but do not
            // count it against independence
            require(star == IntMatrix::identity(r), ErrorKind::involution_mismatch,
                    "identity generator must be fixed by the involution");
            out.names.push_back(gen.name);
            out.matrices.push_back(gen.matrix);
            out.star_matrices.push_back(star);
            continue;
        }
        out.names.push_back(gen.name);
        out.matrices.push_back(gen.matrix);
        out.star_matrices.push_back(star);
    }

    // Z-linear independence of {Id} and the non-identity generators,
    // as flattened vectors.
    std::vector<IntMatrix> basis;
    basis.push_back(IntMatrix::identity(r));
    for (const auto& m : out.matrices)
        if (m != IntMatrix::identity(r)) basis.push_back(m);
    IntMatrix flat(r * r, basis.size());
    for (std::size_t c = 0; c < basis.size(); ++c)
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) flat(i * r + j, c) = basis[c](i, j);
    require(rank(flat) == basis.size(), ErrorKind::dependent_generators,
            "generators are Z-linearly dependent with the identity");

    return out;
}

// A word is a product of atoms, evaluated left to right.  An atom is either
// a generator name or a decimal integer scalar.
using Word = std::vector<std::string>;

namespace detail {

inline bool is_scalar_atom(const std::string& atom) {
    if (atom.empty()) return false;
    std::size_t i = (atom[0] == '-' || atom[0] == '+') ? 1 : 0;
    if (i == atom.size()) return false;
    for (; i < atom.size(); ++i)
        if (atom[i] < '0' || atom[i] > '9') return false;
    return true;
}

}  // namespace detail

// iota(word): the product of the generator matrices.
inline IntMatrix iota(const ValidatedAction& a, const Word& word) {
    const std::size_t r = a.lattice.rank();
    IntMatrix acc = IntMatrix::identity(r);
    for (const auto& atom : word) {
        if (detail::is_scalar_atom(atom))
            acc = acc * (int_from_string(atom) * IntMatrix::identity(r));
        else
            acc = acc * a.matrices[a.index_of(atom)];
    }
    return acc;
}

// iota(word^*): the involution is an antiautomorphism, so the star of a
// product is the reversed product of the stars.
inline IntMatrix iota_of_star(const ValidatedAction& a, const Word& word) {
    const std::size_t r = a.lattice.rank();
    IntMatrix acc = IntMatrix::identity(r);
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        if (detail::is_scalar_atom(*it))
            acc = acc * (int_from_string(*it) * IntMatrix::identity(r));
        else
            acc = acc * a.star_matrices[a.index_of(*it)];
    }
    return acc;
}

// The dual action iota^*: e -> (iota(e^*))^t, a ring embedding of O into
// End(X^t) sending 1 to the identity.
inline IntMatrix iota_star(const ValidatedAction& a, const Word& word) {
    return iota_of_star(a, word).transpose();
}

// Diagonal embedding: m block-diagonal copies of M in copy-major order,
// i.e. Id_m (x) M.  Its image commutes with Mat_m(Z) (x) Id.
inline IntMatrix delta_m(const IntMatrix& m, std::size_t copies) {
    require(m.is_square(), ErrorKind::bad_matrix_shape, "delta_m of non-square matrix");
    require(copies >= 1, ErrorKind::bad_matrix_shape, "copies must be positive");
    return block_diag_power(m, copies);
}

// kappa_4(e) on (X^t)^4 x X^4: block-diagonal of Delta_4(iota^*(e)) acting on
// the first 8g coordinates and Delta_4(iota(e)) on the last 8g.
inline IntMatrix kappa4(const ValidatedAction& a, const Word& word) {
    IntMatrix dual_block = delta_m(iota_star(a, word), 4);
    IntMatrix primal_block = delta_m(iota(a, word), 4);
    return block_diag(std::vector<IntMatrix>{dual_block, primal_block});
}

}  // namespace qtrick
