#pragma once

// The acceptance suite: nine verifiable properties of the construction, each
// run exactly and reported as a single pass/fail line.  `qtrick selftest`
// and the acceptance test binary both drive run_acceptance.

#include <array>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qtrick/generate.hpp"
#include "qtrick/instance.hpp"
#include "qtrick/trick.hpp"

namespace qtrick {

struct CriterionResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

namespace selftest_detail {

using ItemResult = std::pair<bool, std::string>;

// Runs fn(i) for 0 <= i < count on up to `jobs` threads; results come back
// in index order, so output is deterministic whatever the parallelism.
// An exception from fn becomes a failed item instead of escaping a thread.
inline std::vector<ItemResult> parallel_map(std::size_t count, unsigned jobs,
                                            const std::function<ItemResult(std::size_t)>& fn) {
    std::vector<ItemResult> results(count);
    auto run_one = [&](std::size_t i) {
        try {
            results[i] = fn(i);
        } catch (const std::exception& e) {
            results[i] = {false, std::string("unexpected exception: ") + e.what()};
        }
    };
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) run_one(i);
        return results;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            run_one(i);
        }
    };
    std::vector<std::thread> pool;
    unsigned spawn = jobs < count ? jobs : static_cast<unsigned>(count);
    for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return results;
}

inline ItemResult first_failure(const std::vector<ItemResult>& items) {
    for (std::size_t i = 0; i < items.size(); ++i)
        if (!items[i].first)
            return {false, "item " + std::to_string(i) + ": " + items[i].second};
    return {true, std::to_string(items.size()) + " items"};
}

inline std::string failed_checks(const VerificationReport& rep) {
    std::string out;
    for (const auto& c : rep.checks)
        if (c.status != CheckStatus::pass) {
            if (!out.empty()) out += ", ";
            out += c.name;
        }
    return out.empty() ? "none" : out;
}

inline IntMatrix j_block(const Int& d) { return IntMatrix{{Int(0), d}, {-d, Int(0)}}; }

// The d-grid shared by criteria 1-4: g in {1, 2}, types (d) and (1, d).
inline std::vector<PolarizedLattice> grid_lattices() {
    std::vector<PolarizedLattice> grid;
    for (long d : {1L, 2L, 3L, 5L, 6L}) {
        grid.emplace_back(j_block(Int(d)));
        grid.emplace_back(block_diag(std::vector<IntMatrix>{j_block(Int(1)), j_block(Int(d))}));
    }
    return grid;
}

inline ValidatedAction trivial_action(const PolarizedLattice& x) {
    return validate_action(RingAction{x, {}});
}

// Mix of generator parameters used by the randomized criteria.
struct GenParams {
    std::size_t g;
    std::vector<Int> type;
    RingKind ring;
};

inline GenParams gen_params(std::size_t i) {
    static const std::vector<std::vector<long>> types1 = {{1}, {2}, {3}, {4}};
    static const std::vector<std::vector<long>> types2 = {{1, 1}, {1, 2}, {2, 2}, {1, 3}};
    static const std::vector<std::vector<long>> types3 = {{1, 1, 1}, {1, 1, 2}, {1, 2, 2}, {1, 1, 3}};
    static const RingKind rings[] = {RingKind::integers, RingKind::gauss, RingKind::sqrt_minus2,
                                     RingKind::zeta3};
    std::size_t g = i % 3 + 1;
    const auto& pool = g == 1 ? types1 : (g == 2 ? types2 : types3);
    const auto& t = pool[(i / 3) % pool.size()];
    std::vector<Int> type;
    for (long d : t) type.emplace_back(d);
    return {g, type, rings[(i / 7) % 4]};
}

inline std::vector<TransportEntry> transport_entries(const ValidatedAction& a) {
    std::vector<TransportEntry> entries;
    for (std::size_t i = 0; i < a.names.size(); ++i) {
        TransportEntry t;
        t.name = a.names[i];
        t.j = delta_m(a.matrices[i], 8);
        t.j_star = delta_m(a.star_matrices[i], 8);
        t.j_pi = kappa4(a, Word{a.names[i]});
        t.j_pi_star = block_diag(std::vector<IntMatrix>{
            delta_m(a.matrices[i].transpose(), 4), delta_m(a.star_matrices[i], 4)});
        entries.push_back(std::move(t));
    }
    return entries;
}

}  // namespace selftest_detail

// 1. deg(lambda^m) = deg(lambda)^m for the grid, m = 1..8.
inline CriterionResult criterion_degree_power_law() {
    using namespace selftest_detail;
    for (const auto& x : grid_lattices()) {
        Int n = x.degree();
        Int expect = 1;
        for (std::size_t m = 1; m <= 8; ++m) {
            expect *= n;
            if (degree(power_polarization(x, m)) != expect)
                return {"degree_power_law", false,
                        "failed at type product " + to_decimal(n) + ", m = " + std::to_string(m)};
        }
    }
    return {"degree_power_law", true, "grid of 10 lattices, m = 1..8, exact"};
}

// 2. run_trick with O = Z yields an integral alternating unimodular mu with
//    pi^t mu pi = lambda^8 on every grid instance.
inline CriterionResult criterion_principality(unsigned jobs) {
    using namespace selftest_detail;
    auto grid = grid_lattices();
    auto items = parallel_map(grid.size(), jobs, [&](std::size_t i) -> ItemResult {
        TrickResult r = run_trick(trivial_action(grid[i]));
        if (!r.mu) return {false, "mu not integral"};
        if (r.mu->transpose() != -*r.mu) return {false, "mu not alternating"};
        if (abs(det(*r.mu)) != 1) return {false, "mu not unimodular"};
        IntMatrix e8 = block_diag_power(grid[i].form(), 8);
        if (r.pi.transpose() * *r.mu * r.pi != e8) return {false, "pullback identity failed"};
        if (!r.ok()) return {false, "checks failed: " + failed_checks(r.report)};
        return {true, ""};
    });
    auto [ok, detail] = first_failure(items);
    return {"principality", ok, ok ? "grid of 10 instances, O = Z, exact" : detail};
}

// 3. order(V) = n^4 and order(V)^2 = order(ker lambda^8) on the grid.
inline CriterionResult criterion_v_structure(unsigned jobs) {
    using namespace selftest_detail;
    auto grid = grid_lattices();
    auto items = parallel_map(grid.size(), jobs, [&](std::size_t i) -> ItemResult {
        const auto& x = grid[i];
        FourSquares q = four_squares(x.degree());
        FiniteQuotient v = graph_V(x, q);
        Int n4;
        mpz_pow_ui(n4.get_mpz_t(), x.degree().get_mpz_t(), 4);
        if (v.order() != n4) return {false, "order(V) != n^4"};
        Int ker8 = kernel_of_polarization(power_polarization(x, 8)).order();
        if (v.order() * v.order() != ker8) return {false, "order(V)^2 != order(ker lambda^8)"};
        return {true, ""};
    });
    auto [ok, detail] = first_failure(items);
    return {"v_structure", ok, ok ? "order(V) = n^4 = sqrt(n^8) on the grid" : detail};
}

// 4. The graph is maximal isotropic for the constructed quadruple, and not
//    isotropic for an override with s = 0 mod d_g (hence s != -1 mod n).
inline CriterionResult criterion_maximal_isotropy(unsigned jobs) {
    using namespace selftest_detail;
    auto grid = grid_lattices();
    auto items = parallel_map(grid.size(), jobs, [&](std::size_t i) -> ItemResult {
        const auto& x = grid[i];
        if (check_graph_isotropy(x, four_squares(x.degree())) !=
            IsotropyStatus::maximal_isotropic)
            return {false, "valid quadruple not maximal isotropic"};
        Int dg = x.type().back();
        if (x.degree() > 1) {
            FourSquares bad = decompose_four_squares(x.degree(), dg);
            if (bad.congruence_holds()) return {false, "mutated s still satisfies congruence"};
            if (check_graph_isotropy(x, bad) != IsotropyStatus::not_isotropic)
                return {false, "mutated quadruple not detected"};
        }
        return {true, ""};
    });
    auto [ok, detail] = first_failure(items);
    return {"maximal_isotropy", ok,
            ok ? "valid quadruples maximal isotropic, mutated ones rejected" : detail};
}

// 5. kappa_4 compatibility holds exactly for all generators and length-2
//    words over Z, Z[i], Z[sqrt(-2)], Z[zeta_3] on compatible lattices.
inline CriterionResult criterion_endomorphism_compat(unsigned jobs) {
    using namespace selftest_detail;
    struct Case {
        RingKind ring;
        std::size_t g;
        std::vector<Int> type;
        std::optional<std::uint64_t> seed;  // absent = standard model, else conjugated
    };
    std::vector<Case> cases;
    for (RingKind ring : {RingKind::integers, RingKind::gauss, RingKind::sqrt_minus2,
                          RingKind::zeta3}) {
        cases.push_back({ring, 1, {Int(1)}, std::nullopt});
        cases.push_back({ring, 1, {Int(3)}, std::nullopt});
        cases.push_back({ring, 2, {Int(1), Int(2)}, std::nullopt});
        cases.push_back({ring, 1, {Int(2)}, 5});
        cases.push_back({ring, 2, {Int(1), Int(2)}, 6});
    }
    auto items = parallel_map(cases.size(), jobs, [&](std::size_t i) -> ItemResult {
        const auto& c = cases[i];
        InstanceFile inst = c.seed ? generate_instance(c.g, c.type, c.ring, *c.seed)
                                   : standard_instance(c.g, c.type, c.ring);
        TrickResult r = run_trick(to_ring_action(inst));
        const CheckOutcome* k = r.report.find("kappa4_compat");
        if (!k || k->status != CheckStatus::pass)
            return {false, "kappa4_compat failed for ring " + to_string(c.ring)};
        if (!r.ok())
            return {false,
                    "ring " + to_string(c.ring) + ", checks failed: " + failed_checks(r.report)};
        return {true, ""};
    });
    auto [ok, detail] = first_failure(items);
    return {"endomorphism_compat", ok,
            ok ? "4 rings x 5 lattices, generators and length-2 words, exact" : detail};
}

// 6. transport verifier: 50 valid transports pass; 50 mutated j_pi inputs
//    raise HypothesisFailed(Desc) and never InternalInconsistency.
inline CriterionResult criterion_transport_verifier(unsigned jobs) {
    using namespace selftest_detail;
    static const RingKind rings[] = {RingKind::gauss, RingKind::sqrt_minus2, RingKind::zeta3};
    auto items = parallel_map(50, jobs, [&](std::size_t i) -> ItemResult {
        std::size_t g = i % 2 + 1;
        std::vector<Int> type = g == 1 ? std::vector<Int>{Int(1 + (i % 3))}
                                       : std::vector<Int>{Int(1), Int(1 + (i % 3))};
        InstanceFile inst = generate_instance(g, type, rings[i % 3], 100 + i);
        ValidatedAction a = validate_action(to_ring_action(inst));
        TrickResult r = run_trick(a);
        if (!r.mu) return {false, "trick failed before transport"};
        IntMatrix e8 = block_diag_power(a.lattice.form(), 8);
        auto entries = transport_entries(a);

        // valid transport must confirm the conclusion
        try {
            VerificationReport rep = transport_action(to_rational(r.pi), e8, *r.mu, entries);
            if (!rep.all_passed()) return {false, "valid transport reported failures"};
        } catch (const Error& e) {
            return {false, std::string("valid transport raised: ") + e.what()};
        }

        // mutate j_pi of the last (non-identity) entry: swap the diagonal
        // blocks when that changes the matrix, else bump an entry; either
        // way j_pi != pi j pi^{-1}, so Desc must fail
        auto mutated = entries;
        TransportEntry& t = mutated.back();
        const std::size_t half = t.j_pi.rows() / 2;
        IntMatrix a_block = t.j_pi.block(0, 0, half, half);
        IntMatrix b_block = t.j_pi.block(half, half, half, half);
        if (a_block != b_block) {
            t.j_pi = block_diag(std::vector<IntMatrix>{b_block, a_block});
        } else {
            t.j_pi(0, 0) += 1;
        }
        try {
            transport_action(to_rational(r.pi), e8, *r.mu, mutated);
            return {false, "mutated transport was not rejected"};
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::internal_inconsistency)
                return {false, "mutation misclassified as InternalInconsistency"};
            if (e.kind() != ErrorKind::hypothesis_failed ||
                std::string(e.what()).find("Desc") == std::string::npos)
                return {false, std::string("unexpected rejection: ") + e.what()};
        }
        return {true, ""};
    });
    auto [ok, detail] = first_failure(items);
    return {"transport_verifier", ok,
            ok ? "50 valid + 50 mutated transports, Desc failures identified" : detail};
}

// 7. Oracle equivalence on 100 generated instances, g <= 3: the descent
//    overlattice equals the pi^{-1} column lattice and the descended form,
//    transported, equals mu entrywise.
inline CriterionResult criterion_oracle_equivalence(unsigned jobs) {
    using namespace selftest_detail;
    auto items = parallel_map(100, jobs, [&](std::size_t i) -> ItemResult {
        GenParams p = gen_params(i);
        InstanceFile inst = generate_instance(p.g, p.type, p.ring, 1000 + i);
        TrickResult r = run_trick(to_ring_action(inst));
        const CheckOutcome* oracle = r.report.find("oracle_lattice_equal");
        if (!oracle || oracle->status != CheckStatus::pass)
            return {false, "oracle disagreement (g = " + std::to_string(p.g) + ")"};
        if (!r.ok()) return {false, "checks failed: " + failed_checks(r.report)};
        return {true, ""};
    });
    auto [ok, detail] = first_failure(items);
    return {"oracle_equivalence", ok,
            ok ? "100 seeded instances, descent route = inverse route" : detail};
}

// 8. four_squares contract for all n <= 10^4, brute-force cross-check for
//    n <= 200.
inline CriterionResult criterion_four_squares_oracle() {
    for (long n = 1; n <= 10000; ++n) {
        FourSquares q = four_squares(Int(n));
        if (q.s != (n > 1 ? Int(n - 1) : Int(1)))
            return {"four_squares_oracle", false, "s not minimal at n = " + std::to_string(n)};
        if (!q.congruence_holds() || q.s < 1 ||
            q.s != q.a * q.a + q.b * q.b + q.c * q.c + q.d * q.d)
            return {"four_squares_oracle", false, "contract violated at n = " + std::to_string(n)};
        if (!(q.a >= q.b && q.b >= q.c && q.c >= q.d && q.d >= 0))
            return {"four_squares_oracle", false, "ordering violated at n = " + std::to_string(n)};
    }
    // independent exhaustive search
    for (long n = 1; n <= 200; ++n) {
        long best_s = -1;
        std::array<long, 4> best{};
        for (long s = 1; best_s < 0; ++s) {
            if ((s + 1) % n != 0) continue;
            for (long a = 0; a * a <= s; ++a)
                for (long b = 0; b <= a; ++b)
                    for (long c = 0; c <= b; ++c) {
                        long rem = s - a * a - b * b - c * c;
                        if (rem < 0) continue;
                        for (long d = 0; d <= c; ++d)
                            if (d * d == rem) {
                                std::array<long, 4> cand{a, b, c, d};
                                if (best_s < 0 || cand > best) {
                                    best_s = s;
                                    best = cand;
                                }
                            }
                    }
        }
        FourSquares q = four_squares(Int(n));
        if (q.s != best_s || q.a != best[0] || q.b != best[1] || q.c != best[2] ||
            q.d != best[3])
            return {"four_squares_oracle", false,
                    "disagrees with brute force at n = " + std::to_string(n)};
    }
    return {"four_squares_oracle", true, "n <= 10^4 contract, n <= 200 brute-force, exact"};
}

// 9. 50 unimodular conjugations of a fixed instance: all reports pass and
//    mu always has symplectic type (1, ..., 1).
inline CriterionResult criterion_congruence_invariance(unsigned jobs) {
    using namespace selftest_detail;
    auto items = parallel_map(50, jobs, [&](std::size_t i) -> ItemResult {
        InstanceFile inst =
            generate_instance(2, {Int(1), Int(2)}, RingKind::gauss, 9000 + i);
        TrickResult r = run_trick(to_ring_action(inst));
        if (!r.ok()) return {false, "report has failures at seed " + std::to_string(9000 + i)};
        std::vector<Int> ones(r.mu->rows() / 2, Int(1));
        if (symplectic_type(*r.mu) != ones) return {false, "mu is not of principal type"};
        return {true, ""};
    });
    auto [ok, detail] = first_failure(items);
    return {"congruence_invariance", ok,
            ok ? "50 conjugations of the (1,2) Gaussian surface, type(mu) = (1,...,1)" : detail};
}

inline unsigned default_jobs() {
    if (const char* env = std::getenv("QTRICK_JOBS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

inline std::vector<CriterionResult> run_acceptance(unsigned jobs) {
    std::vector<CriterionResult> results;
    auto timed = [&](CriterionResult r, std::chrono::steady_clock::time_point t0) {
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results.push_back(std::move(r));
    };
    auto now = [] { return std::chrono::steady_clock::now(); };
    auto t = now();
    timed(criterion_degree_power_law(), t);
    t = now();
    timed(criterion_principality(jobs), t);
    t = now();
    timed(criterion_v_structure(jobs), t);
    t = now();
    timed(criterion_maximal_isotropy(jobs), t);
    t = now();
    timed(criterion_endomorphism_compat(jobs), t);
    t = now();
    timed(criterion_transport_verifier(jobs), t);
    t = now();
    timed(criterion_oracle_equivalence(jobs), t);
    t = now();
    timed(criterion_four_squares_oracle(), t);
    t = now();
    timed(criterion_congruence_invariance(jobs), t);
    return results;
}

// Stable pass/fail lines go to `out` (byte-identical across repeated runs);
// timing lands on `err` so it never perturbs the report.
inline int run_acceptance_main(std::ostream& out, std::ostream& err, unsigned jobs) {
    auto results = run_acceptance(jobs);
    bool all = true;
    char buf[32];
    for (const auto& r : results) {
        out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
        std::snprintf(buf, sizeof(buf), "%8.2fs", r.seconds);
        err << buf << "  " << r.name << "\n";
        if (!r.passed) all = false;
    }
    out << (all ? "acceptance: all criteria passed\n" : "acceptance: FAILURES present\n");
    return all ? 0 : 1;
}

}  // namespace qtrick
