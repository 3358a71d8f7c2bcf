#pragma once

#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qtrick/generate.hpp"
#include "qtrick/instance.hpp"
#include "qtrick/report.hpp"
#include "qtrick/selftest.hpp"
#include "qtrick/trick.hpp"

namespace qtrick {

// Exit-code contract shared by every subcommand:
//   0 = all checks passed, 1 = a verification check failed, 2 = bad input.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitInputError = 2;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorKind::io_failure, "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), ErrorKind::io_failure, "cannot write '" + path + "'");
    out << content;
    require(out.good(), ErrorKind::io_failure, "write to '" + path + "' failed");
}

namespace detail {

inline TrickResult run_instance(const InstanceFile& inst) {
    RingAction action = to_ring_action(inst);
    TrickOptions options;
    if (inst.quaternion_override) options.quaternion_override = inst.quaternion_override;
    return run_trick(action, options);
}

}  // namespace detail

// build: run the full pipeline and persist the report with all matrices.
inline int cmd_build(const std::string& instance_path, const std::string& output_path,
                     std::ostream& err) {
    try {
        InstanceFile inst = parse_instance(read_file(instance_path));
        TrickResult result = detail::run_instance(inst);
        write_file(output_path, serialize_report(make_report(inst, result, true)));
        if (!result.ok()) {
            err << "qtrick: checks failed (see " << output_path << ")\n";
            if (result.internal_inconsistency)
                err << "qtrick: InternalInconsistency: a guaranteed identity failed; "
                       "this is a bug, not an input problem\n";
            return kExitCheckFailure;
        }
        return kExitPass;
    } catch (const Error& e) {
        err << "qtrick: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "qtrick: " << e.what() << "\n";
        return kExitInputError;
    }
}

// verify: same pipeline, report to stdout with matrices elided.
inline int cmd_verify(const std::string& instance_path, std::ostream& out, std::ostream& err) {
    try {
        InstanceFile inst = parse_instance(read_file(instance_path));
        TrickResult result = detail::run_instance(inst);
        out << serialize_report(make_report(inst, result, false));
        if (!result.ok()) {
            if (result.internal_inconsistency)
                err << "qtrick: InternalInconsistency: a guaranteed identity failed\n";
            return kExitCheckFailure;
        }
        return kExitPass;
    } catch (const Error& e) {
        err << "qtrick: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "qtrick: " << e.what() << "\n";
        return kExitInputError;
    }
}

// gen: deterministic random instance of the requested shape.
inline int cmd_gen(std::size_t g, const std::vector<Int>& type, const std::string& ring,
                   std::uint64_t seed, const std::string& output_path, std::ostream& err) {
    try {
        InstanceFile inst = generate_instance(g, type, ring_from_string(ring), seed);
        write_file(output_path, serialize_instance(inst));
        return kExitPass;
    } catch (const Error& e) {
        err << "qtrick: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "qtrick: " << e.what() << "\n";
        return kExitInputError;
    }
}

// selftest: the acceptance suite, one line per criterion on stdout;
// timings go to stderr so repeated runs give byte-identical reports.
inline int cmd_selftest(std::ostream& out, std::ostream& err) {
    return run_acceptance_main(out, err, default_jobs());
}

}  // namespace qtrick
