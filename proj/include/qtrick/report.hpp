#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtrick/error.hpp"
#include "qtrick/instance.hpp"
#include "qtrick/trick.hpp"

namespace qtrick {

// Machine-readable verification report.  `build` persists the matrices,
// `verify` elides them.
struct ReportFile {
    std::string version = kFormatVersion;
    std::string instance_digest;
    Int s, a, b, c, d;
    std::optional<IntMatrix> quaternion;  // 4x4 I
    std::optional<IntMatrix> pi;
    std::optional<IntMatrix> mu;
    Int v_order;
    std::vector<Int> v_invariant_factors;
    std::vector<CheckOutcome> checks;
    bool overall = false;

    friend bool operator==(const ReportFile& x, const ReportFile& y) {
        auto chk = [](const std::vector<CheckOutcome>& u, const std::vector<CheckOutcome>& v) {
            if (u.size() != v.size()) return false;
            for (std::size_t i = 0; i < u.size(); ++i)
                if (u[i].name != v[i].name || u[i].status != v[i].status ||
                    u[i].detail != v[i].detail)
                    return false;
            return true;
        };
        return x.version == y.version && x.instance_digest == y.instance_digest && x.s == y.s &&
               x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d &&
               x.quaternion == y.quaternion && x.pi == y.pi && x.mu == y.mu &&
               x.v_order == y.v_order && x.v_invariant_factors == y.v_invariant_factors &&
               chk(x.checks, y.checks) && x.overall == y.overall;
    }
};

inline ReportFile make_report(const InstanceFile& inst, const TrickResult& result,
                              bool include_matrices) {
    ReportFile r;
    r.instance_digest = instance_digest(inst);
    r.s = result.squares.s;
    r.a = result.squares.a;
    r.b = result.squares.b;
    r.c = result.squares.c;
    r.d = result.squares.d;
    if (include_matrices) {
        r.quaternion = result.quaternion;
        r.pi = result.pi;
        r.mu = result.mu;
    }
    r.v_order = result.graph.order();
    r.v_invariant_factors = result.graph.invariant_factors();
    r.checks = result.report.checks;
    r.overall = result.ok();
    return r;
}

inline std::string serialize_report(const ReportFile& r) {
    nlohmann::json j;
    j["version"] = r.version;
    j["instance_digest"] = r.instance_digest;
    j["s"] = to_decimal(r.s);
    j["a"] = to_decimal(r.a);
    j["b"] = to_decimal(r.b);
    j["c"] = to_decimal(r.c);
    j["d"] = to_decimal(r.d);
    if (r.quaternion) j["I"] = detail::matrix_to_json(*r.quaternion);
    if (r.pi) j["pi"] = detail::matrix_to_json(*r.pi);
    if (r.mu) j["mu"] = detail::matrix_to_json(*r.mu);
    nlohmann::json v;
    v["order"] = to_decimal(r.v_order);
    nlohmann::json fac = nlohmann::json::array();
    for (const auto& f : r.v_invariant_factors) fac.push_back(to_decimal(f));
    v["invariant_factors"] = std::move(fac);
    j["V"] = std::move(v);
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
        nlohmann::json o;
        o["name"] = c.name;
        o["status"] = std::string(to_string(c.status));
        o["detail"] = c.detail;
        checks.push_back(std::move(o));
    }
    j["checks"] = std::move(checks);
    j["overall"] = r.overall ? "pass" : "fail";
    return j.dump(2) + "\n";
}

inline ReportFile parse_report(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorKind::malformed_json, e.what());
    }
    require(j.is_object() && j.contains("version") && j["version"] == kFormatVersion,
            ErrorKind::malformed_json, "not a report file");
    ReportFile r;
    r.instance_digest = j.at("instance_digest").get<std::string>();
    r.s = int_from_string(j.at("s").get<std::string>());
    r.a = int_from_string(j.at("a").get<std::string>());
    r.b = int_from_string(j.at("b").get<std::string>());
    r.c = int_from_string(j.at("c").get<std::string>());
    r.d = int_from_string(j.at("d").get<std::string>());
    if (j.contains("I")) r.quaternion = detail::matrix_from_json(j["I"], "I");
    if (j.contains("pi")) r.pi = detail::matrix_from_json(j["pi"], "pi");
    if (j.contains("mu")) r.mu = detail::matrix_from_json(j["mu"], "mu");
    r.v_order = int_from_string(j.at("V").at("order").get<std::string>());
    for (const auto& f : j.at("V").at("invariant_factors"))
        r.v_invariant_factors.push_back(int_from_string(f.get<std::string>()));
    for (const auto& c : j.at("checks")) {
        CheckOutcome o;
        o.name = c.at("name").get<std::string>();
        std::string st = c.at("status").get<std::string>();
        o.status = st == "pass" ? CheckStatus::pass
                                : (st == "fail" ? CheckStatus::fail : CheckStatus::skip);
        o.detail = c.at("detail").get<std::string>();
        r.checks.push_back(std::move(o));
    }
    r.overall = j.at("overall") == "pass";
    return r;
}

}  // namespace qtrick
