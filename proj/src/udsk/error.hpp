#pragma once

#include <stdexcept>
#include <string>

namespace udsk {

/// Library error codes. Values are stable: the C API exposes them verbatim.
enum class Status : int {
    ok = 0,
    null_argument = 1,
    bad_dimensions = 2,
    dimension_mismatch = 3,
    non_finite_input = 4,
    index_out_of_range = 5,
    not_symmetric = 6,
    admissibility_violated = 7,
    degenerate_plane = 8,
    length_mismatch = 9,
    bad_sign_value = 10,
    empty_encoder = 11,
    too_few_points = 12,
    size_mismatch = 13,
    io_failure = 14,
    truncated_record = 15,
    inconsistent_dimension = 16,
    negative_dimension = 17,
    bad_spec = 18,
};

inline const char* status_name(Status s) noexcept {
    switch (s) {
        case Status::ok: return "ok";
        case Status::null_argument: return "null argument";
        case Status::bad_dimensions: return "bad dimensions";
        case Status::dimension_mismatch: return "dimension mismatch";
        case Status::non_finite_input: return "non-finite input";
        case Status::index_out_of_range: return "index out of range";
        case Status::not_symmetric: return "matrix not symmetric";
        case Status::admissibility_violated: return "target outside admissible interval";
        case Status::degenerate_plane: return "degenerate plane";
        case Status::length_mismatch: return "length mismatch";
        case Status::bad_sign_value: return "entry is not +1 or -1";
        case Status::empty_encoder: return "encoder has seen no samples";
        case Status::too_few_points: return "too few training points";
        case Status::size_mismatch: return "size mismatch";
        case Status::io_failure: return "i/o failure";
        case Status::truncated_record: return "truncated record";
        case Status::inconsistent_dimension: return "inconsistent record dimension";
        case Status::negative_dimension: return "negative or zero record dimension";
        case Status::bad_spec: return "invalid synthetic stream spec";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(Status status, const std::string& message)
        : std::runtime_error(message), status_(status) {}

    Status status() const noexcept { return status_; }

private:
    Status status_;
};

[[noreturn]] inline void fail(Status status, const std::string& message) {
    throw Error(status, std::string(status_name(status)) + ": " + message);
}

}  // namespace udsk
