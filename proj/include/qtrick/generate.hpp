#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qtrick/error.hpp"
#include "qtrick/exact_linalg.hpp"
#include "qtrick/instance.hpp"
#include "qtrick/matrix.hpp"

namespace qtrick {

// Seeded RNG with fully specified output: mt19937_64 plus modulo sampling,
// so identical seeds give byte-identical instances on every platform
// (std::uniform_int_distribution is not pinned by the standard).
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : gen_(seed) {}

    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 gen_;
};

enum class RingKind { integers, gauss, sqrt_minus2, zeta3 };

inline RingKind ring_from_string(const std::string& s) {
    if (s == "integers") return RingKind::integers;
    if (s == "gauss") return RingKind::gauss;
    if (s == "sqrt_minus2") return RingKind::sqrt_minus2;
    if (s == "zeta3") return RingKind::zeta3;
    fail(ErrorKind::ring_incompatible, "unknown ring '" + s + "'");
}

inline std::string to_string(RingKind r) {
    switch (r) {
        case RingKind::integers: return "integers";
        case RingKind::gauss: return "gauss";
        case RingKind::sqrt_minus2: return "sqrt_minus2";
        case RingKind::zeta3: return "zeta3";
    }
    return "?";
}

namespace detail {

// The standard 2x2 model of the quadratic generator on one J-block; its
// Rosati image is integral for every block scale d.
inline IntMatrix ring_block(RingKind ring) {
    switch (ring) {
        case RingKind::gauss:  // x^2 = -1
            return IntMatrix{{Int(0), Int(-1)}, {Int(1), Int(0)}};
        case RingKind::sqrt_minus2:  // x^2 = -2
            return IntMatrix{{Int(0), Int(-2)}, {Int(1), Int(0)}};
        case RingKind::zeta3:  // x^2 + x + 1 = 0
            return IntMatrix{{Int(0), Int(-1)}, {Int(1), Int(-1)}};
        case RingKind::integers: break;
    }
    fail(ErrorKind::ring_incompatible, "ring has no generator block");
}

inline const char* ring_generator_name(RingKind ring) {
    switch (ring) {
        case RingKind::gauss: return "i";
        case RingKind::sqrt_minus2: return "t";
        case RingKind::zeta3: return "z";
        case RingKind::integers: break;
    }
    return "?";
}

}  // namespace detail

// Random unimodular matrix: a seeded product of 20*(2g)^2 elementary
// operations (transvections with coefficients in [-3, 3], swaps, sign
// flips).  Bounded coefficients keep entry growth manageable for exact
// arithmetic downstream.
inline IntMatrix random_unimodular(DetRng& rng, std::size_t n) {
    IntMatrix u = IntMatrix::identity(n);
    if (n < 2) return u;
    const std::size_t ops = 20 * n * n;
    for (std::size_t t = 0; t < ops; ++t) {
        auto i = static_cast<std::size_t>(rng.between(0, static_cast<std::int64_t>(n) - 1));
        auto j = static_cast<std::size_t>(rng.between(0, static_cast<std::int64_t>(n) - 2));
        if (j >= i) ++j;  // distinct pair, uniformly
        std::int64_t kind = rng.between(0, 9);
        if (kind < 8) {
            std::int64_t c = rng.between(1, 3) * (rng.between(0, 1) ? 1 : -1);
            u.add_column_multiple(j, Int(c), i);
        } else if (kind == 8) {
            u.swap_columns(i, j);
        } else {
            u.scale_column(i, Int(-1));
        }
    }
    return u;
}

// The standard-form instance of the given polarization type: E is the block
// sum of d_i-scaled symplectic planes, the ring generator acts blockwise.
inline InstanceFile standard_instance(std::size_t g, const std::vector<Int>& type,
                                      RingKind ring) {
    require(g >= 1, ErrorKind::bad_type, "g must be positive");
    require(type.size() == g, ErrorKind::bad_type, "type must list g elementary divisors");
    for (std::size_t i = 0; i < g; ++i) {
        require(type[i] >= 1, ErrorKind::bad_type, "elementary divisors must be positive");
        if (i + 1 < g)
            require(type[i + 1] % type[i] == 0, ErrorKind::bad_type,
                    "elementary divisors must form a divisibility chain");
    }

    const std::size_t n = 2 * g;
    std::vector<IntMatrix> e_blocks;
    for (const auto& d : type)
        e_blocks.push_back(IntMatrix{{Int(0), d}, {-d, Int(0)}});

    InstanceFile inst;
    inst.rank = n;
    inst.e = block_diag(e_blocks);
    inst.action.push_back({"one", IntMatrix::identity(n), std::nullopt, std::nullopt});
    if (ring != RingKind::integers)
        inst.action.push_back({detail::ring_generator_name(ring),
                               block_diag_power(detail::ring_block(ring), g), std::nullopt,
                               std::nullopt});
    return inst;
}

// Standard instance conjugated by a seeded random unimodular basis change.
// Deterministic per (g, type, ring, seed).
inline InstanceFile generate_instance(std::size_t g, const std::vector<Int>& type, RingKind ring,
                                      std::uint64_t seed) {
    InstanceFile inst = standard_instance(g, type, ring);

    DetRng rng(seed);
    IntMatrix u = random_unimodular(rng, inst.rank);
    IntMatrix u_inv = to_integral(inv(to_rational(u)));

    inst.e = u.transpose() * inst.e * u;
    for (auto& entry : inst.action) entry.matrix = u_inv * entry.matrix * u;
    return inst;
}

}  // namespace qtrick
