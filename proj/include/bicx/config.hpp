#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bicx {

struct ContinuousSpec {
    std::string family; // "uniform" | "piecewise_linear"
    std::vector<double> params;
    bool operator==(const ContinuousSpec&) const = default;
};

struct RunConfig {
    std::string mode; // rates | partition | simulate | audit | compare
    int k = 0;
    std::optional<std::array<double, 3>> p1; // plus, zero, minus
    std::vector<double> p_plus;
    std::optional<ContinuousSpec> continuous;
    std::optional<int> horizon;
    std::uint64_t seed = 0;
    long reps = 10000;
    std::optional<double> tol;
    int x1_grid = 2001;
    std::string out_dir = ".";
    std::optional<std::string> schedule_csv;

    bool operator==(const RunConfig&) const = default;
};

// Strict key/value parser: unknown keys (errc::unknown_key), malformed or
// duplicate values (errc::type_mismatch) are rejected with line diagnostics.
// '#' starts a comment.
RunConfig parse_config(const std::string& text);

// Canonical text form; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

} // namespace bicx
