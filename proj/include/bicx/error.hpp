#pragma once

#include <stdexcept>
#include <string>

namespace bicx {

enum class errc {
    non_strict_ordering,
    probability_out_of_range,
    zero_support,
    degenerate_k,
    index_out_of_range,
    y_out_of_range,
    infeasible_state,
    reward_mismatch,
    mass_mismatch,
    scale_exceeded,
    horizon_too_short,
    no_bracket,
    monotonicity_violation,
    overlap_detected,
    non_terminating,
    unknown_key,
    type_mismatch,
    io_error,
};

const char* errc_name(errc c);

// All library failures throw this; `code` makes the failure mode testable.
class error : public std::runtime_error {
public:
    error(errc c, const std::string& what)
        : std::runtime_error(std::string(errc_name(c)) + ": " + what), code(c) {}
    errc code;
};

[[noreturn]] inline void fail(errc c, const std::string& what) { throw error(c, what); }

} // namespace bicx
