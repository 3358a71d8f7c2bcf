#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "qtrick/trick.hpp"
#include "test_support.hpp"

using namespace qtrick;
using qtest::Rng;

namespace {

IntMatrix j2() { return qtest::standard_symplectic_j2(); }

IntMatrix scaled_j2(long d) {
    return IntMatrix{{Int(0), Int(d)}, {Int(-d), Int(0)}};
}

IntMatrix rotation() { return IntMatrix{{Int(0), Int(-1)}, {Int(1), Int(0)}}; }

IntMatrix sqrt_minus2_gen() { return IntMatrix{{Int(0), Int(-2)}, {Int(1), Int(0)}}; }

ValidatedAction trivial_action(IntMatrix e) {
    return validate_action(RingAction{PolarizedLattice(std::move(e)), {}});
}

bool kind_is(const Error& e, ErrorKind k) { return e.kind() == k; }

// Brute-force reference: smallest s >= 1 with s = -1 mod n, and the
// lexicographically largest quadruple a >= b >= c >= d >= 0 for it, found
// by exhaustive scan.
struct BruteQuad {
    long s, a, b, c, d;
};

BruteQuad brute_four_squares(long n) {
    for (long s = 1;; ++s) {
        if ((s + 1) % n != 0) continue;
        BruteQuad best{-1, -1, -1, -1, -1};
        for (long a = 0; a * a <= s; ++a)
            for (long b = 0; b <= a; ++b)
                for (long c = 0; c <= b; ++c) {
                    long rem = s - a * a - b * b - c * c;
                    if (rem < 0) continue;
                    for (long d = 0; d <= c; ++d)
                        if (d * d == rem) {
                            BruteQuad cand{s, a, b, c, d};
                            auto key = [](const BruteQuad& q) {
                                return std::array<long, 4>{q.a, q.b, q.c, q.d};
                            };
                            if (best.s < 0 || key(cand) > key(best)) best = cand;
                        }
                }
        if (best.s >= 0) return best;
    }
}

}  // namespace

TEST_CASE("four_squares on pinned examples") {
    FourSquares q1 = four_squares(Int(1));
    CHECK(q1.s == 1);
    CHECK((q1.a == 1 && q1.b == 0 && q1.c == 0 && q1.d == 0));

    FourSquares q2 = four_squares(Int(2));
    CHECK(q2.s == 1);
    CHECK((q2.a == 1 && q2.b == 0 && q2.c == 0 && q2.d == 0));

    FourSquares q5 = four_squares(Int(5));
    CHECK(q5.s == 4);
    CHECK((q5.a == 2 && q5.b == 0 && q5.c == 0 && q5.d == 0));

    FourSquares q9 = four_squares(Int(9));
    CHECK(q9.s == 8);
    CHECK((q9.a == 2 && q9.b == 2 && q9.c == 0 && q9.d == 0));
}

TEST_CASE("four_squares matches the brute-force reference up to 120") {
    for (long n = 1; n <= 120; ++n) {
        BruteQuad ref = brute_four_squares(n);
        FourSquares got = four_squares(Int(n));
        CHECK(got.s == ref.s);
        CHECK(got.a == ref.a);
        CHECK(got.b == ref.b);
        CHECK(got.c == ref.c);
        CHECK(got.d == ref.d);
        CHECK(got.congruence_holds());
        CHECK(got.a >= got.b);
        CHECK(got.b >= got.c);
        CHECK(got.c >= got.d);
        CHECK(got.d >= 0);
    }
}

TEST_CASE("quaternion_matrix on pinned examples") {
    CHECK(quaternion_matrix(FourSquares(Int(1), Int(1), Int(0), Int(0), Int(0))) ==
          IntMatrix::identity(4));

    IntMatrix b_only = quaternion_matrix(FourSquares(Int(1), Int(0), Int(1), Int(0), Int(0)));
    IntMatrix expected{{Int(0), Int(-1), Int(0), Int(0)},
                       {Int(1), Int(0), Int(0), Int(0)},
                       {Int(0), Int(0), Int(0), Int(1)},
                       {Int(0), Int(0), Int(-1), Int(0)}};
    CHECK(b_only == expected);

    IntMatrix ones = quaternion_matrix(FourSquares(Int(1), Int(1), Int(1), Int(1), Int(1)));
    CHECK(ones.transpose() * ones == Int(4) * IntMatrix::identity(4));
}

TEST_CASE("quaternion norm identity holds for random quadruples") {
    Rng rng(41);
    for (int t = 0; t < 40; ++t) {
        Int a(rng.between(-9, 9)), b(rng.between(-9, 9)), c(rng.between(-9, 9)),
            d(rng.between(-9, 9));
        if (a == 0 && b == 0 && c == 0 && d == 0) a = 1;
        FourSquares q(Int(1), a, b, c, d);
        IntMatrix i = quaternion_matrix(q);
        CHECK(i.transpose() * i == q.s * IntMatrix::identity(4));
        CHECK(i * i.transpose() == q.s * IntMatrix::identity(4));
    }
}

TEST_CASE("quaternion I commutes with diagonal scalar blocks") {
    Rng rng(42);
    for (int t = 0; t < 15; ++t) {
        Int a(rng.between(-5, 5)), b(rng.between(-5, 5)), c(rng.between(-5, 5)),
            d(rng.between(-5, 5));
        if (a == 0 && b == 0 && c == 0 && d == 0) a = 1;
        IntMatrix i_tilde = kronecker(quaternion_matrix(FourSquares(Int(1), a, b, c, d)),
                                      IntMatrix::identity(2));
        IntMatrix m = qtest::random_int_matrix(rng, 2, 2);
        CHECK(i_tilde * delta_m(m, 4) == delta_m(m, 4) * i_tilde);
    }
}

TEST_CASE("build_pi layout and determinant") {
    PolarizedLattice x(j2());
    FourSquares q = four_squares(x.degree());
    IntMatrix pi = build_pi(x, q);
    REQUIRE(pi.rows() == 16);
    IntMatrix e4 = block_diag_power(j2(), 4);
    CHECK(pi.block(0, 0, 8, 8) == e4);
    CHECK(pi.block(0, 8, 8, 8).is_zero());
    CHECK(pi.block(8, 0, 8, 8) == IntMatrix::identity(8));  // I = Id for s = 1
    CHECK(pi.block(8, 8, 8, 8) == -IntMatrix::identity(8));
    CHECK(abs(det(pi)) == 1);

    PolarizedLattice y(scaled_j2(2));
    IntMatrix pi_y = build_pi(y, four_squares(y.degree()));
    CHECK(abs(det(pi_y)) == 256);  // n^4 with n = 4

    CHECK_THROWS_MATCHES(build_pi(y, four_squares(Int(9))), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return kind_is(e, ErrorKind::degree_mismatch);
                         }));
}

TEST_CASE("pi sends graph lifts to integral vectors") {
    PolarizedLattice y(scaled_j2(2));
    FourSquares q = four_squares(y.degree());
    IntMatrix pi = build_pi(y, q);
    FiniteQuotient v = graph_V(y, q);
    RatMatrix image = to_rational(pi) * v.generators();
    CHECK(is_integral(image));
}

TEST_CASE("graph_V order") {
    PolarizedLattice x(j2());
    CHECK(graph_V(x, four_squares(x.degree())).is_trivial());

    PolarizedLattice y(scaled_j2(2));
    FiniteQuotient v = graph_V(y, four_squares(y.degree()));
    CHECK(v.order() == 256);

    Int ker8 = kernel_of_polarization(power_polarization(y, 8)).order();
    CHECK(v.order() * v.order() == ker8);
}

TEST_CASE("check_graph_isotropy classifies valid and mutated quadruples") {
    PolarizedLattice y(scaled_j2(2));  // n = 4, type (2)
    FourSquares good = four_squares(y.degree());
    CHECK(good.s == 3);
    CHECK((good.a == 1 && good.b == 1 && good.c == 1 && good.d == 0));
    CHECK(check_graph_isotropy(y, good) == IsotropyStatus::maximal_isotropic);

    // s = 2 violates the congruence and the type exponent does not divide
    // 1 + s, so the graph pairs nontrivially
    FourSquares bad(y.degree(), Int(1), Int(1), Int(0), Int(0));
    CHECK_FALSE(bad.congruence_holds());
    CHECK(check_graph_isotropy(y, bad) == IsotropyStatus::not_isotropic);

    // s = 1 also violates the congruence, but 1 + s = 2 is a multiple of
    // the kernel exponent 2, so the graph is still (maximal) isotropic;
    // the pairing only sees s modulo the exponent of ker(lambda)
    FourSquares subtle(y.degree(), Int(1), Int(0), Int(0), Int(0));
    CHECK_FALSE(subtle.congruence_holds());
    CHECK(check_graph_isotropy(y, subtle) == IsotropyStatus::maximal_isotropic);

    PolarizedLattice principal(j2());
    CHECK(check_graph_isotropy(principal, four_squares(Int(1))) ==
          IsotropyStatus::maximal_isotropic);
}

TEST_CASE("principal_mu matches the frozen principal-case block identity") {
    PolarizedLattice x(j2());
    IntMatrix pi = build_pi(x, four_squares(Int(1)));
    IntMatrix mu = principal_mu(x, pi);

    IntMatrix a = block_diag_power(j2(), 4);
    IntMatrix expected(16, 16);
    expected.set_block(0, 0, Int(2) * a);
    expected.set_block(0, 8, IntMatrix::identity(8));
    expected.set_block(8, 0, -IntMatrix::identity(8));
    expected.set_block(8, 8, a);
    CHECK(mu == expected);
    CHECK(det(mu) == 1);
    CHECK(pi.transpose() * mu * pi == block_diag_power(j2(), 8));
}

TEST_CASE("principal_mu rejects a non-descending instance") {
    PolarizedLattice y(scaled_j2(2));
    FourSquares bad(y.degree(), Int(1), Int(1), Int(0), Int(0));  // s = 2
    IntMatrix pi = build_pi(y, bad);
    CHECK_THROWS_MATCHES(principal_mu(y, pi), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return kind_is(e, ErrorKind::not_integral);
                         }));
}

TEST_CASE("descend on pinned examples") {
    IntMatrix e = scaled_j2(2);
    DescentResult trivial = descend(e, FiniteQuotient::trivial(2));
    CHECK(trivial.form == e);

    RatMatrix half(2, 1);
    half(0, 0) = Rat(1, 2);
    DescentResult r = descend(e, FiniteQuotient(2, half));
    CHECK(r.form == j2());
    CHECK(abs(det(r.form)) == 1);
    RatMatrix expected_basis{{Rat(1, 2), Rat(0)}, {Rat(0), Rat(1)}};
    CHECK(r.basis == expected_basis);

    FiniteQuotient full = kernel_of_polarization(PolarizedLattice(e));
    CHECK_THROWS_MATCHES(descend(e, full), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e_) {
                             return kind_is(e_, ErrorKind::not_isotropic);
                         }));

    RatMatrix third(2, 1);
    third(0, 0) = Rat(1, 3);
    CHECK_THROWS_MATCHES(descend(e, FiniteQuotient(2, third)), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e_) {
                             return kind_is(e_, ErrorKind::not_a_subgroup_of_kernel);
                         }));
}

TEST_CASE("descend drops the determinant by the squared order") {
    PolarizedLattice y(scaled_j2(2));
    FourSquares q = four_squares(y.degree());
    IntMatrix e8 = block_diag_power(y.form(), 8);
    FiniteQuotient v = graph_V(y, q);
    DescentResult r = descend(e8, v);
    Int expected = abs(det(e8)) / (v.order() * v.order());
    CHECK(abs(det(r.form)) == expected);
    CHECK(expected == 1);
}

TEST_CASE("transport_action confirms the identity transport") {
    IntMatrix lambda = j2();
    std::vector<TransportEntry> entries{{"r", rotation(), -rotation(), rotation(), -rotation()}};
    VerificationReport rep =
        transport_action(RatMatrix::identity(2), lambda, lambda, entries);
    CHECK(rep.all_passed());
    // the report names every hypothesis and the conclusion per element
    REQUIRE(rep.find("lambdaMu") != nullptr);
    REQUIRE(rep.find("lambdaJ[r]") != nullptr);
    REQUIRE(rep.find("Desc[r]") != nullptr);
    REQUIRE(rep.find("muJpi[r]") != nullptr);

    // a pi that does not pull mu back to lambda fails the first hypothesis
    bool raised = false;
    try {
        transport_action(Rat(2) * RatMatrix::identity(2), lambda, lambda, entries);
    } catch (const Error& e) {
        raised = true;
        CHECK(e.kind() == ErrorKind::hypothesis_failed);
        CHECK(std::string(e.what()).find("lambdaMu") != std::string::npos);
    }
    CHECK(raised);
}

TEST_CASE("transport_action raises HypothesisFailed(Desc) on perturbed j_pi") {
    // an action where iota^*(t) != iota(t), so swapping the diagonal blocks
    // of kappa_4(t) genuinely changes it
    RingAction a{PolarizedLattice(j2()), {}};
    a.generators.push_back({"t", sqrt_minus2_gen(), std::nullopt});
    ValidatedAction v = validate_action(a);
    TrickResult res = run_trick(v);
    REQUIRE(res.ok());

    IntMatrix dual_block = delta_m(iota_star(v, Word{"t"}), 4);
    IntMatrix primal_block = delta_m(iota(v, Word{"t"}), 4);
    REQUIRE(dual_block != primal_block);
    IntMatrix swapped = block_diag(std::vector<IntMatrix>{primal_block, dual_block});

    TransportEntry entry;
    entry.name = "t";
    entry.j = delta_m(v.matrices[0], 8);
    entry.j_star = delta_m(v.star_matrices[0], 8);
    entry.j_pi = swapped;
    entry.j_pi_star = block_diag(std::vector<IntMatrix>{
        delta_m(v.matrices[0].transpose(), 4), delta_m(v.star_matrices[0], 4)});

    IntMatrix e8 = block_diag_power(j2(), 8);
    bool raised = false;
    try {
        transport_action(to_rational(res.pi), e8, *res.mu, {entry});
    } catch (const Error& e) {
        raised = true;
        CHECK(e.kind() == ErrorKind::hypothesis_failed);
        CHECK(std::string(e.what()).find("Desc") != std::string::npos);
    }
    CHECK(raised);
}

TEST_CASE("run_trick on the scalar principal instance") {
    TrickResult r = run_trick(trivial_action(j2()));
    CHECK(r.ok());
    CHECK_FALSE(r.internal_inconsistency);
    CHECK(r.squares.s == 1);
    CHECK(r.quaternion == IntMatrix::identity(4));
    REQUIRE(r.mu.has_value());
    CHECK(abs(det(*r.mu)) == 1);
    REQUIRE(r.kappa4_images.size() == 1);
    CHECK(r.kappa4_images[0].second == IntMatrix::identity(16));
}

TEST_CASE("run_trick on the Gaussian elliptic instance") {
    RingAction a{PolarizedLattice(j2()), {}};
    a.generators.push_back({"i", rotation(), std::nullopt});
    ValidatedAction v = validate_action(a);
    TrickResult r = run_trick(v);
    CHECK(r.ok());

    // mu . kappa_4(i) = kappa_4(i^*)^t . mu, checked directly
    IntMatrix k = kappa4(v, Word{"i"});
    IntMatrix k_star = block_diag(std::vector<IntMatrix>{
        delta_m(iota(v, Word{"i"}).transpose(), 4), delta_m(iota_of_star(v, Word{"i"}), 4)});
    CHECK(*r.mu * k == k_star.transpose() * *r.mu);
}

TEST_CASE("run_trick on a degree-16 instance") {
    TrickResult r = run_trick(trivial_action(scaled_j2(2)));
    CHECK(r.ok());
    CHECK(r.squares.s == 3);
    CHECK(r.graph.order() == 256);
    CHECK(abs(det(*r.mu)) == 1);
}

TEST_CASE("run_trick reports failures for a congruence-violating override") {
    TrickOptions opt;
    opt.quaternion_override = std::array<Int, 4>{Int(1), Int(1), Int(0), Int(0)};  // s = 2
    TrickResult r = run_trick(trivial_action(scaled_j2(2)), opt);
    CHECK_FALSE(r.ok());
    CHECK_FALSE(r.internal_inconsistency);  // the congruence was violated on purpose
    REQUIRE(r.report.find("V_maximal_isotropic") != nullptr);
    CHECK(r.report.find("V_maximal_isotropic")->status == CheckStatus::fail);
    REQUIRE(r.report.find("mu_integral") != nullptr);
    CHECK(r.report.find("mu_integral")->status == CheckStatus::fail);
    REQUIRE(r.report.find("kappa4_compat") != nullptr);
    CHECK(r.report.find("kappa4_compat")->status == CheckStatus::skip);
}

TEST_CASE("run_trick accepts a valid non-minimal override") {
    TrickOptions opt;
    opt.quaternion_override = std::array<Int, 4>{Int(3), Int(1), Int(1), Int(0)};  // s = 11 = 3 mod 4
    TrickResult r = run_trick(trivial_action(scaled_j2(2)), opt);
    CHECK(r.squares.s == 11);
    CHECK(r.squares.congruence_holds());
    CHECK(r.ok());
}

TEST_CASE("run_trick handles generators swapped by the involution") {
    // nilpotent u with star image v = rosati(u) != u, both declared by name
    IntMatrix e = block_diag_power(j2(), 2);
    IntMatrix u(4, 4);
    u(0, 2) = 1;
    u(1, 3) = 1;
    IntMatrix v = to_integral(rosati(e, u));
    RingAction a{PolarizedLattice(e), {}};
    a.generators.push_back({"u", u, v});
    a.generators.push_back({"v", v, u});
    TrickResult r = run_trick(validate_action(a));
    CHECK(r.ok());
}

TEST_CASE("unimodular change of basis preserves the trick") {
    Rng rng(43);
    IntMatrix e = scaled_j2(2);
    RingAction base{PolarizedLattice(e), {}};
    base.generators.push_back({"i", rotation(), std::nullopt});
    for (int t = 0; t < 3; ++t) {
        IntMatrix u = qtest::random_unimodular_small(rng, 2, 30);
        IntMatrix u_inv = to_integral(inv(to_rational(u)));
        RingAction conj{PolarizedLattice(u.transpose() * e * u), {}};
        conj.generators.push_back({"i", u_inv * rotation() * u, std::nullopt});
        TrickResult r = run_trick(validate_action(conj));
        CHECK(r.ok());
        std::vector<Int> ones(8, Int(1));
        CHECK(symplectic_type(*r.mu) == ones);
    }
}
