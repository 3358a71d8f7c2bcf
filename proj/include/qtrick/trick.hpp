#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qtrick/error.hpp"
#include "qtrick/exact_linalg.hpp"
#include "qtrick/finite_quotient.hpp"
#include "qtrick/four_squares.hpp"
#include "qtrick/matrix.hpp"
#include "qtrick/numbers.hpp"
#include "qtrick/polarized.hpp"
#include "qtrick/ring_action.hpp"

namespace qtrick {

enum class CheckStatus { pass, fail, skip };

inline std::string_view to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::skip: return "skip";
    }
    return "?";
}

struct CheckOutcome {
    std::string name;
    CheckStatus status = CheckStatus::skip;
    std::string detail;
};

struct VerificationReport {
    std::vector<CheckOutcome> checks;

    void add(const std::string& name, bool ok, const std::string& detail = "") {
        checks.push_back({name, ok ? CheckStatus::pass : CheckStatus::fail, detail});
    }
    void skip(const std::string& name, const std::string& detail) {
        checks.push_back({name, CheckStatus::skip, detail});
    }
    bool all_passed() const {
        for (const auto& c : checks)
            if (c.status != CheckStatus::pass) return false;
        return true;
    }
    const CheckOutcome* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

// pi: X^4 x X^4 -> (X^t)^4 x X^4, (x, y) -> (lambda^4 x, I x - y), as a
// 16g x 16g integer matrix in copy-major coordinates.  |det pi| = n^4.
inline IntMatrix build_pi(const PolarizedLattice& x, const FourSquares& q) {
    require(q.n == x.degree(), ErrorKind::degree_mismatch,
            "quadruple modulus does not match deg(lambda)");
    const std::size_t r = x.rank();  // 2g
    IntMatrix e4 = block_diag_power(x.form(), 4);
    IntMatrix i_tilde = kronecker(quaternion_matrix(q), IntMatrix::identity(r));
    IntMatrix pi(8 * r, 8 * r);
    pi.set_block(0, 0, e4);
    pi.set_block(4 * r, 0, i_tilde);
    pi.set_block(4 * r, 4 * r, -IntMatrix::identity(4 * r));
    return pi;
}

// The graph of I acting on ker(lambda^4), as a subgroup of ker(lambda^8):
// generated by (v, I v) for v running over kernel generators.  Its order is
// n^4 whatever the quadruple is; isotropy is what depends on s.
inline FiniteQuotient graph_V(const PolarizedLattice& x, const FourSquares& q) {
    require(q.n == x.degree(), ErrorKind::degree_mismatch,
            "quadruple modulus does not match deg(lambda)");
    const std::size_t r = x.rank();
    FiniteQuotient ker4 = kernel_of_polarization(power_polarization(x, 4));
    const RatMatrix& v = ker4.generators();
    RatMatrix i_tilde = to_rational(kronecker(quaternion_matrix(q), IntMatrix::identity(r)));
    return FiniteQuotient(8 * r, vconcat(v, i_tilde * v));
}

inline IsotropyStatus check_graph_isotropy(const PolarizedLattice& x, const FourSquares& q) {
    IntMatrix e8 = block_diag_power(x.form(), 8);
    return subgroup_isotropy(e8, graph_V(x, q));
}

namespace detail {

// mu as a rational matrix: the form of lambda^8 rewritten in the basis
// pi^{-1} of the overlattice pi^{-1} Z^{16g}.
inline RatMatrix mu_rational(const PolarizedLattice& x, const RatMatrix& pi_inv) {
    IntMatrix e8 = block_diag_power(x.form(), 8);
    return pi_inv.transpose() * to_rational(e8) * pi_inv;
}

}  // namespace detail

// The principal form: mu = (pi^{-1})^T E_8 pi^{-1}, verified integral,
// alternating and unimodular before it is returned.
inline IntMatrix principal_mu(const PolarizedLattice& x, const IntMatrix& pi) {
    RatMatrix mu_rat = detail::mu_rational(x, inv(to_rational(pi)));
    require(is_integral(mu_rat), ErrorKind::not_integral, "mu has fractional entries");
    IntMatrix mu = to_integral(mu_rat);
    require(mu.transpose() == -mu, ErrorKind::not_alternating, "mu is not alternating");
    require(abs(det(mu)) == 1, ErrorKind::not_unimodular, "mu is not unimodular");
    IntMatrix e8 = block_diag_power(x.form(), 8);
    require(pi.transpose() * mu * pi == e8, ErrorKind::internal_inconsistency,
            "pullback of mu along pi is not lambda^8");
    return mu;
}

struct DescentResult {
    IntMatrix form;    // the descended polarization on the quotient
    RatMatrix basis;   // Hermite basis of the overlattice Z^r + span(H)
};

// Polarization descent along the quotient by an isotropic subgroup H of
// ker(E): restrict the Q-extended form to the overlattice.  det drops by
// order(H)^2.
inline DescentResult descend(const IntMatrix& e, const FiniteQuotient& h) {
    require(e.rows() == h.ambient_rank() && e.is_square(), ErrorKind::bad_matrix_shape,
            "form and subgroup live in different spaces");
    RatMatrix ef = to_rational(e);
    require(is_integral(ef * h.generators()), ErrorKind::not_a_subgroup_of_kernel,
            "subgroup does not lie in ker of the form");
    const RatMatrix& basis = h.overlattice_basis();
    RatMatrix form_rat = basis.transpose() * ef * basis;
    require(is_integral(form_rat), ErrorKind::not_isotropic,
            "form does not descend: subgroup is not isotropic");
    return {to_integral(form_rat), basis};
}

// One ring element for the descent verifier: j and j_pi images of e and e^*.
struct TransportEntry {
    std::string name;
    IntMatrix j, j_star;
    IntMatrix j_pi, j_pi_star;
};

// Hypothesis-checked verifier for transport of a ring action along an
// isogeny pi with lambda = pi^t mu pi.  Checks the three hypotheses as
// exact matrix identities, then the conclusion
//     mu . j_pi(e) = j_pi(e^*)^t . mu.
// A failed hypothesis raises HypothesisFailed naming it; a failed
// conclusion after valid hypotheses is an internal error, never user error.
inline VerificationReport transport_action(const RatMatrix& pi, const IntMatrix& lambda,
                                           const IntMatrix& mu,
                                           const std::vector<TransportEntry>& entries) {
    VerificationReport report;
    inv(pi);  // pi must be a Q-isogeny; throws Singular otherwise

    RatMatrix lambda_rat = to_rational(lambda);
    RatMatrix mu_rat = to_rational(mu);
    bool lambda_mu = pi.transpose() * mu_rat * pi == lambda_rat;
    report.add("lambdaMu", lambda_mu);
    if (!lambda_mu) fail(ErrorKind::hypothesis_failed, "lambdaMu: lambda != pi^t mu pi");

    for (const auto& t : entries) {
        bool lambda_j = lambda * t.j == t.j_star.transpose() * lambda &&
                        lambda * t.j_star == t.j.transpose() * lambda;
        report.add("lambdaJ[" + t.name + "]", lambda_j);
        if (!lambda_j)
            fail(ErrorKind::hypothesis_failed,
                 "lambdaJ: lambda does not intertwine j for '" + t.name + "'");

        RatMatrix jr = to_rational(t.j), jsr = to_rational(t.j_star);
        RatMatrix jpr = to_rational(t.j_pi), jpsr = to_rational(t.j_pi_star);
        bool desc = jpr * pi == pi * jr && jpsr * pi == pi * jsr;
        report.add("Desc[" + t.name + "]", desc);
        if (!desc)
            fail(ErrorKind::hypothesis_failed,
                 "Desc: j_pi does not cover j along pi for '" + t.name + "'");

        bool conclusion = mu * t.j_pi == t.j_pi_star.transpose() * mu;
        report.add("muJpi[" + t.name + "]", conclusion);
        if (!conclusion)
            fail(ErrorKind::internal_inconsistency,
                 "conclusion failed although all hypotheses hold ('" + t.name + "')");
    }
    return report;
}

struct TrickResult {
    FourSquares squares;
    IntMatrix quaternion;                                        // the 4x4 matrix I
    IntMatrix pi;                                                // 16g x 16g
    std::optional<IntMatrix> mu;                                 // absent if mu failed to be integral
    FiniteQuotient graph;                                        // the subgroup V
    std::vector<std::pair<std::string, IntMatrix>> kappa4_images;
    VerificationReport report;
    bool internal_inconsistency = false;  // a check failed although the congruence held

    bool ok() const { return report.all_passed(); }
};

struct TrickOptions {
    // Manual (a, b, c, d); bypasses the minimal-s choice and the congruence.
    std::optional<std::array<Int, 4>> quaternion_override;
};

// The full construction and verification pipeline for one instance.
// Every named check lands in the report; mu-dependent checks are skipped
// when mu does not exist.  With a valid quadruple every check passes for
// every valid action; a failure in that situation is flagged as an internal
// inconsistency rather than blamed on the input.
inline TrickResult run_trick(const ValidatedAction& action, const TrickOptions& options = {}) {
    const PolarizedLattice& x = action.lattice;
    const Int n = x.degree();
    const std::size_t r = x.rank();

    FourSquares q = options.quaternion_override
                        ? FourSquares(n, (*options.quaternion_override)[0],
                                      (*options.quaternion_override)[1],
                                      (*options.quaternion_override)[2],
                                      (*options.quaternion_override)[3])
                        : four_squares(n);

    IntMatrix qmat = quaternion_matrix(q);
    IntMatrix pi = build_pi(x, q);
    FiniteQuotient v = graph_V(x, q);

    TrickResult result{q, qmat, pi, std::nullopt, v, {}, {}, false};
    VerificationReport& report = result.report;

    report.add("action_valid", true, "Rosati-compatible action with independent generators");

    Int n4, n8;
    mpz_pow_ui(n4.get_mpz_t(), n.get_mpz_t(), 4);
    mpz_pow_ui(n8.get_mpz_t(), n.get_mpz_t(), 8);

    IntMatrix e4 = block_diag_power(x.form(), 4);
    IntMatrix e8 = block_diag_power(x.form(), 8);
    report.add("degree_power_law", abs(det(e4)) == n4 && abs(det(e8)) == n8,
               "deg(lambda^4) = n^4 and deg(lambda^8) = n^8");

    Int ker8_order = kernel_of_polarization(power_polarization(x, 8)).order();
    report.add("V_order", v.order() == n4 && v.order() * v.order() == ker8_order,
               "order(V) = n^4 = sqrt(order(ker lambda^8)), got " + to_decimal(v.order()));

    IsotropyStatus iso = subgroup_isotropy(e8, v);
    report.add("V_maximal_isotropic", iso == IsotropyStatus::maximal_isotropic,
               iso == IsotropyStatus::not_isotropic ? "graph subgroup pairs nontrivially"
                                                    : "");

    for (const auto& name : action.names)
        result.kappa4_images.emplace_back(name, kappa4(action, Word{name}));
    if (result.kappa4_images.empty())
        result.kappa4_images.emplace_back("1", IntMatrix::identity(8 * r));

    RatMatrix pi_inv = inv(to_rational(pi));
    RatMatrix mu_rat = detail::mu_rational(x, pi_inv);
    bool mu_integral = is_integral(mu_rat);
    report.add("mu_integral", mu_integral);

    if (mu_integral) {
        IntMatrix mu = to_integral(mu_rat);
        result.mu = mu;
        report.add("mu_alternating", mu.transpose() == -mu);
        report.add("mu_unimodular", abs(det(mu)) == 1, "det mu = " + to_decimal(det(mu)));
        report.add("pullback_identity", pi.transpose() * mu * pi == e8,
                   "pi^t mu pi = lambda^8");

        // kappa_4 compatibility on all generators and all length-2 words
        bool kappa_ok = true;
        std::string kappa_detail;
        std::vector<Word> words;
        for (const auto& name : action.names) words.push_back(Word{name});
        for (const auto& n1 : action.names)
            for (const auto& n2 : action.names) words.push_back(Word{n1, n2});
        if (words.empty()) words.push_back(Word{"1"});
        for (const auto& w : words) {
            IntMatrix k = kappa4(action, w);
            IntMatrix k_star = block_diag(std::vector<IntMatrix>{
                delta_m(iota(action, w).transpose(), 4),
                delta_m(iota_of_star(action, w), 4)});
            if (mu * k != k_star.transpose() * mu) {
                kappa_ok = false;
                kappa_detail = "failed on word of length " + std::to_string(w.size());
                break;
            }
        }
        report.add("kappa4_compat", kappa_ok, kappa_detail);

        // oracle route: descent along V must reproduce both the overlattice
        // pi^{-1} Z^{16g} and, after the base change T = pi * B, mu itself
        bool oracle_ok = false;
        std::string oracle_detail;
        try {
            DescentResult desc = descend(e8, v);
            bool same_lattice = lattice_equal(pi_inv, desc.basis);
            RatMatrix t_rat = to_rational(pi) * desc.basis;
            bool t_unimodular = is_integral(t_rat) && abs(det(to_integral(t_rat))) == 1;
            bool form_matches = false;
            if (t_unimodular) {
                IntMatrix t = to_integral(t_rat);
                form_matches = t.transpose() * mu * t == desc.form;
            }
            oracle_ok = same_lattice && t_unimodular && form_matches;
            if (!oracle_ok) oracle_detail = "descent route disagrees with inverse route";
        } catch (const Error& e) {
            oracle_detail = e.what();
        }
        report.add("oracle_lattice_equal", oracle_ok, oracle_detail);

        // independent confirmation through the general descent verifier
        std::vector<TransportEntry> entries;
        for (std::size_t i = 0; i < action.names.size(); ++i) {
            TransportEntry t;
            t.name = action.names[i];
            t.j = delta_m(action.matrices[i], 8);
            t.j_star = delta_m(action.star_matrices[i], 8);
            t.j_pi = kappa4(action, Word{action.names[i]});
            t.j_pi_star = block_diag(std::vector<IntMatrix>{
                delta_m(action.matrices[i].transpose(), 4),
                delta_m(action.star_matrices[i], 4)});
            entries.push_back(std::move(t));
        }
        if (entries.empty()) {
            TransportEntry t;
            t.name = "1";
            t.j = t.j_star = IntMatrix::identity(8 * r);
            t.j_pi = t.j_pi_star = IntMatrix::identity(8 * r);
            entries.push_back(std::move(t));
        }
        bool transport_ok = false;
        std::string transport_detail;
        try {
            transport_action(to_rational(pi), e8, mu, entries);
            transport_ok = true;
        } catch (const Error& e) {
            transport_detail = e.what();
        }
        report.add("prop21_transport", transport_ok, transport_detail);
    } else {
        report.skip("mu_alternating", "mu is not integral");
        report.skip("mu_unimodular", "mu is not integral");
        report.skip("pullback_identity", "mu is not integral");
        report.skip("kappa4_compat", "mu is not integral");
        report.skip("oracle_lattice_equal", "mu is not integral");
        report.skip("prop21_transport", "mu is not integral");
    }

    if (!report.all_passed() && q.congruence_holds())
        result.internal_inconsistency = true;

    return result;
}

inline TrickResult run_trick(const RingAction& action, const TrickOptions& options = {}) {
    return run_trick(validate_action(action), options);
}

}  // namespace qtrick
