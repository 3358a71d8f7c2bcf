#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtrick/error.hpp"
#include "qtrick/matrix.hpp"
#include "qtrick/numbers.hpp"
#include "qtrick/ring_action.hpp"

namespace qtrick {

inline constexpr const char* kFormatVersion = "qtrick-1";

// On-disk description of one problem instance.  Every integer is a decimal
// string so arbitrary precision survives any JSON toolchain.
struct InstanceFile {
    std::string version = kFormatVersion;
    std::size_t rank = 0;  // 2g
    IntMatrix e;
    struct ActionEntry {
        std::string name;
        IntMatrix matrix;
        std::optional<IntMatrix> star;       // explicit star matrix
        std::optional<std::string> star_name;  // or the name of another entry

        friend bool operator==(const ActionEntry&, const ActionEntry&) = default;
    };
    std::vector<ActionEntry> action;
    std::optional<std::array<Int, 4>> quaternion_override;

    friend bool operator==(const InstanceFile&, const InstanceFile&) = default;
};

namespace detail {

inline nlohmann::json matrix_to_json(const IntMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_decimal(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline IntMatrix matrix_from_json(const nlohmann::json& j, const std::string& what) {
    require(j.is_array() && !j.empty(), ErrorKind::bad_matrix_shape,
            what + " must be a non-empty array of rows");
    std::size_t rows = j.size();
    require(j[0].is_array(), ErrorKind::bad_matrix_shape, what + " rows must be arrays");
    std::size_t cols = j[0].size();
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        require(j[i].is_array() && j[i].size() == cols, ErrorKind::bad_matrix_shape,
                what + " has ragged rows");
        for (std::size_t c = 0; c < cols; ++c) {
            require(j[i][c].is_string(), ErrorKind::non_integer_entry,
                    what + " entries must be decimal strings");
            m(i, c) = int_from_string(j[i][c].get<std::string>());
        }
    }
    return m;
}

inline std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

}  // namespace detail

inline std::string serialize_instance(const InstanceFile& inst) {
    nlohmann::json j;
    j["version"] = inst.version;
    j["rank"] = inst.rank;
    j["E"] = detail::matrix_to_json(inst.e);
    nlohmann::json action = nlohmann::json::array();
    for (const auto& entry : inst.action) {
        nlohmann::json a;
        a["name"] = entry.name;
        a["matrix"] = detail::matrix_to_json(entry.matrix);
        if (entry.star) a["star"] = detail::matrix_to_json(*entry.star);
        if (entry.star_name) a["star"] = *entry.star_name;
        action.push_back(std::move(a));
    }
    j["action"] = std::move(action);
    if (inst.quaternion_override) {
        const auto& q = *inst.quaternion_override;
        j["quaternion_override"] = {{"a", to_decimal(q[0])},
                                    {"b", to_decimal(q[1])},
                                    {"c", to_decimal(q[2])},
                                    {"d", to_decimal(q[3])}};
    }
    return j.dump(2) + "\n";
}

inline InstanceFile parse_instance(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorKind::malformed_json, e.what());
    }
    require(j.is_object(), ErrorKind::malformed_json, "instance must be a JSON object");
    require(j.contains("version") && j["version"].is_string(), ErrorKind::malformed_json,
            "missing version tag");
    InstanceFile inst;
    inst.version = j["version"].get<std::string>();
    require(inst.version == kFormatVersion, ErrorKind::malformed_json,
            "unsupported format version '" + inst.version + "'");

    require(j.contains("rank") && j["rank"].is_number_unsigned(), ErrorKind::malformed_json,
            "missing or invalid rank");
    inst.rank = j["rank"].get<std::size_t>();
    require(inst.rank >= 2 && inst.rank % 2 == 0, ErrorKind::bad_matrix_shape,
            "rank must be a positive even number");

    require(j.contains("E"), ErrorKind::malformed_json, "missing polarization matrix E");
    inst.e = detail::matrix_from_json(j["E"], "E");
    require(inst.e.rows() == inst.rank && inst.e.cols() == inst.rank,
            ErrorKind::bad_matrix_shape, "E must be rank x rank");

    if (j.contains("action")) {
        require(j["action"].is_array(), ErrorKind::malformed_json, "action must be an array");
        for (const auto& a : j["action"]) {
            require(a.is_object() && a.contains("name") && a["name"].is_string() &&
                        a.contains("matrix"),
                    ErrorKind::malformed_json, "action entries need a name and a matrix");
            InstanceFile::ActionEntry entry;
            entry.name = a["name"].get<std::string>();
            entry.matrix = detail::matrix_from_json(a["matrix"], "action matrix");
            require(entry.matrix.rows() == inst.rank && entry.matrix.cols() == inst.rank,
                    ErrorKind::bad_matrix_shape, "action matrices must be rank x rank");
            if (a.contains("star")) {
                if (a["star"].is_string())
                    entry.star_name = a["star"].get<std::string>();
                else
                    entry.star = detail::matrix_from_json(a["star"], "star matrix");
            }
            for (const auto& prev : inst.action)
                require(prev.name != entry.name, ErrorKind::malformed_json,
                        "duplicate generator name '" + entry.name + "'");
            inst.action.push_back(std::move(entry));
        }
    }

    if (j.contains("quaternion_override")) {
        const auto& q = j["quaternion_override"];
        require(q.is_object() && q.contains("a") && q.contains("b") && q.contains("c") &&
                    q.contains("d"),
                ErrorKind::malformed_json, "quaternion_override needs fields a, b, c, d");
        auto get = [&](const char* k) {
            require(q[k].is_string(), ErrorKind::non_integer_entry,
                    "quaternion_override entries must be decimal strings");
            return int_from_string(q[k].get<std::string>());
        };
        inst.quaternion_override = std::array<Int, 4>{get("a"), get("b"), get("c"), get("d")};
    }
    return inst;
}

// Stable fingerprint of an instance, independent of input formatting.
inline std::string instance_digest(const InstanceFile& inst) {
    return detail::hex64(detail::fnv1a(serialize_instance(inst)));
}

// Interpret the file as a ring action on a polarized lattice; star names
// are resolved to the named generator's matrix.
inline RingAction to_ring_action(const InstanceFile& inst) {
    RingAction action{PolarizedLattice(inst.e), {}};
    for (const auto& entry : inst.action) {
        ActionGenerator gen{entry.name, entry.matrix, std::nullopt};
        if (entry.star) gen.star = *entry.star;
        if (entry.star_name) {
            bool found = false;
            for (const auto& other : inst.action)
                if (other.name == *entry.star_name) {
                    gen.star = other.matrix;
                    found = true;
                    break;
                }
            require(found, ErrorKind::unknown_generator,
                    "star reference to unknown generator '" + *entry.star_name + "'");
        }
        action.generators.push_back(std::move(gen));
    }
    return action;
}

}  // namespace qtrick
