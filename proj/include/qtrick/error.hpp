#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qtrick {

// Every failure the library reports deliberately.  input_* kinds mean the
// caller handed us something bad; internal_inconsistency means a verified
// instance violated a guaranteed identity, i.e. a bug in this library.
enum class ErrorKind {
    singular,
    not_alternating,
    degenerate,
    odd_rank,
    rank_deficient,
    not_in_kernel,
    not_a_subgroup_of_kernel,
    not_isotropic,
    involution_mismatch,
    non_integral_rosati,
    dependent_generators,
    unknown_generator,
    degree_mismatch,
    not_integral,
    not_unimodular,
    hypothesis_failed,
    internal_inconsistency,
    malformed_json,
    bad_matrix_shape,
    non_integer_entry,
    bad_type,
    ring_incompatible,
    io_failure,
};

inline std::string_view to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::singular: return "Singular";
        case ErrorKind::not_alternating: return "NotAlternating";
        case ErrorKind::degenerate: return "Degenerate";
        case ErrorKind::odd_rank: return "OddRank";
        case ErrorKind::rank_deficient: return "RankDeficient";
        case ErrorKind::not_in_kernel: return "NotInKernel";
        case ErrorKind::not_a_subgroup_of_kernel: return "NotASubgroupOfKernel";
        case ErrorKind::not_isotropic: return "NotIsotropic";
        case ErrorKind::involution_mismatch: return "InvolutionMismatch";
        case ErrorKind::non_integral_rosati: return "NonIntegralRosati";
        case ErrorKind::dependent_generators: return "DependentGenerators";
        case ErrorKind::unknown_generator: return "UnknownGenerator";
        case ErrorKind::degree_mismatch: return "DegreeMismatch";
        case ErrorKind::not_integral: return "NotIntegral";
        case ErrorKind::not_unimodular: return "NotUnimodular";
        case ErrorKind::hypothesis_failed: return "HypothesisFailed";
        case ErrorKind::internal_inconsistency: return "InternalInconsistency";
        case ErrorKind::malformed_json: return "MalformedJson";
        case ErrorKind::bad_matrix_shape: return "BadMatrixShape";
        case ErrorKind::non_integer_entry: return "NonIntegerEntry";
        case ErrorKind::bad_type: return "BadType";
        case ErrorKind::ring_incompatible: return "RingIncompatible";
        case ErrorKind::io_failure: return "IoFailure";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) fail(kind, message);
}

}  // namespace qtrick
