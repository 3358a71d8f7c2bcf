#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qtrick/commands.hpp"
#include "test_support.hpp"

using namespace qtrick;

namespace {

bool kind_is(const Error& e, ErrorKind k) { return e.kind() == k; }

std::string minimal_instance_text() {
    return R"({
  "version": "qtrick-1",
  "rank": 2,
  "E": [["0", "1"], ["-1", "0"]],
  "action": [{"name": "one", "matrix": [["1", "0"], ["0", "1"]]}]
})";
}

std::string gaussian_instance_text() {
    return R"({
  "version": "qtrick-1",
  "rank": 2,
  "E": [["0", "1"], ["-1", "0"]],
  "action": [{"name": "i", "matrix": [["0", "-1"], ["1", "0"]]}]
})";
}

class TempDir {
public:
    TempDir() {
        dir_ = std::filesystem::temp_directory_path() /
               ("qtrick_test_" + std::to_string(std::rand()) + std::to_string(std::rand()));
        std::filesystem::create_directories(dir_);
    }
    ~TempDir() { std::filesystem::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

private:
    std::filesystem::path dir_;
};

}  // namespace

TEST_CASE("parse_instance accepts the minimal principal elliptic instance") {
    InstanceFile inst = parse_instance(minimal_instance_text());
    CHECK(inst.rank == 2);
    CHECK(inst.e == qtest::standard_symplectic_j2());
    REQUIRE(inst.action.size() == 1);
    CHECK(inst.action[0].name == "one");
    TrickResult r = run_trick(to_ring_action(inst));
    CHECK(r.ok());
}

TEST_CASE("parse_instance rejects bad inputs with the right error kinds") {
    CHECK_THROWS_MATCHES(parse_instance("{ not json"), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return kind_is(e, ErrorKind::malformed_json);
                         }));

    std::string odd_rank = R"({"version": "qtrick-1", "rank": 3,
        "E": [["0","1","0"],["-1","0","0"],["0","0","0"]]})";
    CHECK_THROWS_MATCHES(parse_instance(odd_rank), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return kind_is(e, ErrorKind::bad_matrix_shape);
                         }));

    std::string fractional = R"({"version": "qtrick-1", "rank": 2,
        "E": [["0","1.5"],["-1.5","0"]]})";
    CHECK_THROWS_MATCHES(parse_instance(fractional), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return kind_is(e, ErrorKind::non_integer_entry);
                         }));

    std::string native_numbers = R"({"version": "qtrick-1", "rank": 2,
        "E": [["0", 1], [-1, "0"]]})";
    CHECK_THROWS_MATCHES(parse_instance(native_numbers), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return kind_is(e, ErrorKind::non_integer_entry);
                         }));

    std::string wrong_version = R"({"version": "qtrick-0", "rank": 2,
        "E": [["0","1"],["-1","0"]]})";
    CHECK_THROWS_MATCHES(parse_instance(wrong_version), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return kind_is(e, ErrorKind::malformed_json);
                         }));

    std::string duplicate = R"({"version": "qtrick-1", "rank": 2,
        "E": [["0","1"],["-1","0"]],
        "action": [{"name": "x", "matrix": [["1","0"],["0","1"]]},
                   {"name": "x", "matrix": [["2","0"],["0","2"]]}]})";
    CHECK_THROWS_MATCHES(parse_instance(duplicate), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return kind_is(e, ErrorKind::malformed_json);
                         }));

    std::string mismatched_action = R"({"version": "qtrick-1", "rank": 2,
        "E": [["0","1"],["-1","0"]],
        "action": [{"name": "x", "matrix": [["1"]]}]})";
    CHECK_THROWS_MATCHES(parse_instance(mismatched_action), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return kind_is(e, ErrorKind::bad_matrix_shape);
                         }));
}

TEST_CASE("star references resolve by name") {
    // two independent generators swapped by the involution: a nilpotent
    // block map u and its Rosati image
    IntMatrix e = block_diag_power(qtest::standard_symplectic_j2(), 2);
    IntMatrix u(4, 4);
    u(0, 2) = 1;
    u(1, 3) = 1;
    IntMatrix v = to_integral(rosati(e, u));
    REQUIRE(v != u);

    InstanceFile inst;
    inst.rank = 4;
    inst.e = e;
    inst.action.push_back({"u", u, std::nullopt, "v"});
    inst.action.push_back({"v", v, std::nullopt, "u"});

    InstanceFile back = parse_instance(serialize_instance(inst));
    CHECK(back == inst);
    RingAction a = to_ring_action(back);
    REQUIRE(a.generators[0].star.has_value());
    CHECK(*a.generators[0].star == v);
    ValidatedAction validated = validate_action(a);
    CHECK(validated.star_matrices[0] == v);
    CHECK(validated.star_matrices[1] == u);

    std::string dangling = R"({"version": "qtrick-1", "rank": 2,
        "E": [["0","1"],["-1","0"]],
        "action": [{"name": "i", "matrix": [["0","-1"],["1","0"]], "star": "ghost"}]})";
    CHECK_THROWS_MATCHES(to_ring_action(parse_instance(dangling)), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e_) {
                             return kind_is(e_, ErrorKind::unknown_generator);
                         }));
}

TEST_CASE("instance serialization round-trips") {
    std::vector<InstanceFile> cases;
    cases.push_back(parse_instance(minimal_instance_text()));
    cases.push_back(generate_instance(2, {Int(1), Int(2)}, RingKind::gauss, 7));
    InstanceFile with_override = generate_instance(1, {Int(2)}, RingKind::integers, 3);
    with_override.quaternion_override = std::array<Int, 4>{Int(1), Int(1), Int(0), Int(0)};
    cases.push_back(with_override);

    for (const auto& inst : cases) {
        InstanceFile back = parse_instance(serialize_instance(inst));
        CHECK(back == inst);
        CHECK(serialize_instance(back) == serialize_instance(inst));
        CHECK(instance_digest(back) == instance_digest(inst));
    }

    CHECK(instance_digest(cases[0]) != instance_digest(cases[1]));
}

TEST_CASE("report serialization round-trips") {
    InstanceFile inst = parse_instance(gaussian_instance_text());
    TrickResult result = run_trick(to_ring_action(inst));
    for (bool matrices : {true, false}) {
        ReportFile r = make_report(inst, result, matrices);
        ReportFile back = parse_report(serialize_report(r));
        CHECK(back == r);
        CHECK(serialize_report(back) == serialize_report(r));
    }
}

TEST_CASE("standard_instance is the unconjugated block model") {
    InstanceFile std_inst = standard_instance(2, {Int(1), Int(2)}, RingKind::gauss);
    IntMatrix expected_e = block_diag(std::vector<IntMatrix>{
        IntMatrix{{Int(0), Int(1)}, {Int(-1), Int(0)}},
        IntMatrix{{Int(0), Int(2)}, {Int(-2), Int(0)}}});
    CHECK(std_inst.e == expected_e);
    REQUIRE(std_inst.action.size() == 2);
    CHECK(std_inst.action[0].matrix == IntMatrix::identity(4));
    CHECK(run_trick(to_ring_action(std_inst)).ok());

    // conjugation changes the basis but never the type
    InstanceFile conj = generate_instance(2, {Int(1), Int(2)}, RingKind::gauss, 1);
    CHECK(conj.e != std_inst.e);
    CHECK(symplectic_type(conj.e) == symplectic_type(std_inst.e));
}

TEST_CASE("generator output is deterministic and type-preserving") {
    InstanceFile a = generate_instance(2, {Int(1), Int(2)}, RingKind::gauss, 7);
    InstanceFile b = generate_instance(2, {Int(1), Int(2)}, RingKind::gauss, 7);
    CHECK(a == b);
    CHECK(serialize_instance(a) == serialize_instance(b));

    InstanceFile c = generate_instance(2, {Int(1), Int(2)}, RingKind::gauss, 8);
    CHECK(instance_digest(a) != instance_digest(c));

    // type preserved by the unimodular conjugation
    CHECK(symplectic_type(a.e) == (std::vector<Int>{Int(1), Int(2)}));
    InstanceFile d = generate_instance(1, {Int(1)}, RingKind::integers, 0);
    CHECK(symplectic_type(d.e) == std::vector<Int>{Int(1)});
    CHECK(PolarizedLattice(a.e).degree() == 4);
    REQUIRE(a.action.size() == 2);  // identity and the Gaussian generator
}

TEST_CASE("generator rejects bad parameters") {
    CHECK_THROWS_MATCHES(generate_instance(2, {Int(2), Int(3)}, RingKind::integers, 0), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return kind_is(e, ErrorKind::bad_type);
                         }));
    CHECK_THROWS_MATCHES(generate_instance(0, {}, RingKind::integers, 0), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return kind_is(e, ErrorKind::bad_type);
                         }));
    CHECK_THROWS_MATCHES(ring_from_string("octonions"), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return kind_is(e, ErrorKind::ring_incompatible);
                         }));
}

TEST_CASE("generated instances pass verification") {
    struct Case {
        std::size_t g;
        std::vector<Int> type;
        RingKind ring;
        std::uint64_t seed;
    };
    std::vector<Case> cases = {
        {1, {Int(1)}, RingKind::integers, 0},
        {1, {Int(4)}, RingKind::zeta3, 11},
        {2, {Int(2), Int(2)}, RingKind::sqrt_minus2, 12},
        {3, {Int(1), Int(1), Int(2)}, RingKind::gauss, 13},
    };
    for (const auto& c : cases) {
        InstanceFile inst = generate_instance(c.g, c.type, c.ring, c.seed);
        TrickResult r = run_trick(to_ring_action(inst));
        CHECK(r.ok());
    }
}

TEST_CASE("cmd_build writes a passing report for the Gaussian instance") {
    TempDir tmp;
    write_file(tmp.path("inst.json"), gaussian_instance_text());
    std::ostringstream err;
    int code = cmd_build(tmp.path("inst.json"), tmp.path("report.json"), err);
    CHECK(code == kExitPass);
    ReportFile r = parse_report(read_file(tmp.path("report.json")));
    CHECK(r.overall);
    REQUIRE(r.mu.has_value());
    CHECK(abs(det(*r.mu)) == 1);
    REQUIRE(r.pi.has_value());
    REQUIRE(r.quaternion.has_value());
    // principal instance: s = 1 and I = Id_4 recorded in the report
    CHECK(r.s == 1);
    CHECK(*r.quaternion == IntMatrix::identity(4));
    // the required check names are all present
    for (const char* name :
         {"action_valid", "degree_power_law", "V_order", "V_maximal_isotropic", "mu_integral",
          "mu_alternating", "mu_unimodular", "pullback_identity", "kappa4_compat",
          "oracle_lattice_equal", "prop21_transport"}) {
        bool found = false;
        for (const auto& c : r.checks) found = found || c.name == name;
        CHECK(found);
    }
}

TEST_CASE("cmd_build classifies an inconsistent star as input error") {
    TempDir tmp;
    std::string text = R"({"version": "qtrick-1", "rank": 2,
        "E": [["0","1"],["-1","0"]],
        "action": [{"name": "i", "matrix": [["0","-1"],["1","0"]],
                    "star": [["0","-1"],["1","0"]]}]})";
    write_file(tmp.path("inst.json"), text);
    std::ostringstream err;
    int code = cmd_build(tmp.path("inst.json"), tmp.path("report.json"), err);
    CHECK(code == kExitInputError);
    CHECK(err.str().find("InvolutionMismatch") != std::string::npos);
}

TEST_CASE("cmd_verify exit codes") {
    TempDir tmp;
    std::ostringstream out, err;

    write_file(tmp.path("good.json"), minimal_instance_text());
    CHECK(cmd_verify(tmp.path("good.json"), out, err) == kExitPass);
    ReportFile r = parse_report(out.str());
    CHECK(r.overall);
    CHECK_FALSE(r.mu.has_value());  // matrices elided in verify mode

    CHECK(cmd_verify(tmp.path("missing.json"), out, err) == kExitInputError);

    // override violating the congruence: checks fail, exit 1
    InstanceFile bad = generate_instance(1, {Int(2)}, RingKind::integers, 1);
    bad.quaternion_override = std::array<Int, 4>{Int(1), Int(1), Int(0), Int(0)};  // s = 2
    write_file(tmp.path("bad.json"), serialize_instance(bad));
    std::ostringstream out2;
    CHECK(cmd_verify(tmp.path("bad.json"), out2, err) == kExitCheckFailure);
    ReportFile rb = parse_report(out2.str());
    CHECK_FALSE(rb.overall);
    bool iso_failed = false;
    for (const auto& c : rb.checks)
        if (c.name == "V_maximal_isotropic") iso_failed = c.status == CheckStatus::fail;
    CHECK(iso_failed);
}

TEST_CASE("big and signed integer entries survive the file format") {
    std::string big = "123456789012345678901234567890123456789012345678901234567890";
    std::string text = std::string(R"({"version": "qtrick-1", "rank": 2,
        "E": [["0", ")") + big + R"("], ["-)" + big + R"(", "+0"]]})";
    InstanceFile inst = parse_instance(text);
    CHECK(to_decimal(inst.e(0, 1)) == big);
    CHECK(inst.e(1, 0) == -inst.e(0, 1));
    CHECK(inst.e(1, 1) == 0);
    CHECK(parse_instance(serialize_instance(inst)) == inst);
    CHECK(int_from_string("+17") == 17);
    CHECK_THROWS_AS(int_from_string("+"), Error);
    CHECK_THROWS_AS(int_from_string(""), Error);
    CHECK_THROWS_AS(int_from_string("0x10"), Error);
    CHECK(rat_from_string("6/4") == Rat(3, 2));
    CHECK_THROWS_AS(rat_from_string("1/0"), Error);
}

TEST_CASE("parallel_map returns results in index order for any job count") {
    auto fn = [](std::size_t i) {
        return selftest_detail::ItemResult{true, std::to_string(i * i)};
    };
    auto serial = selftest_detail::parallel_map(17, 1, fn);
    for (unsigned jobs : {2u, 3u, 8u}) {
        auto parallel = selftest_detail::parallel_map(17, jobs, fn);
        REQUIRE(parallel.size() == serial.size());
        for (std::size_t i = 0; i < serial.size(); ++i) {
            CHECK(parallel[i].first == serial[i].first);
            CHECK(parallel[i].second == serial[i].second);
        }
    }
}

TEST_CASE("cmd_gen writes deterministic files") {
    TempDir tmp;
    std::ostringstream err;
    CHECK(cmd_gen(2, {Int(1), Int(2)}, "gauss", 7, tmp.path("a.json"), err) == kExitPass);
    CHECK(cmd_gen(2, {Int(1), Int(2)}, "gauss", 7, tmp.path("b.json"), err) == kExitPass);
    CHECK(read_file(tmp.path("a.json")) == read_file(tmp.path("b.json")));

    CHECK(cmd_gen(2, {Int(2), Int(3)}, "gauss", 7, tmp.path("c.json"), err) == kExitInputError);
    CHECK(cmd_gen(1, {Int(1)}, "octonions", 7, tmp.path("d.json"), err) == kExitInputError);
}
