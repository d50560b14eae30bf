#include "bicx/error.hpp"

namespace bicx {

const char* errc_name(errc c) {
    switch (c) {
    case errc::non_strict_ordering: return "NonStrictOrdering";
    case errc::probability_out_of_range: return "ProbabilityOutOfRange";
    case errc::zero_support: return "ZeroSupport";
    case errc::degenerate_k: return "DegenerateK";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::y_out_of_range: return "YOutOfRange";
    case errc::infeasible_state: return "InfeasibleState";
    case errc::reward_mismatch: return "RewardMismatch";
    case errc::mass_mismatch: return "MassMismatch";
    case errc::scale_exceeded: return "ScaleExceeded";
    case errc::horizon_too_short: return "HorizonTooShort";
    case errc::no_bracket: return "NoBracket";
    case errc::monotonicity_violation: return "MonotonicityViolation";
    case errc::overlap_detected: return "OverlapDetected";
    case errc::non_terminating: return "NonTerminating";
    case errc::unknown_key: return "UnknownKey";
    case errc::type_mismatch: return "TypeMismatch";
    case errc::io_error: return "IoError";
    }
    return "UnknownError";
}

} // namespace bicx
