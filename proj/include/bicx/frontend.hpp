#pragma once

#include "bicx/config.hpp"

namespace bicx {

// Executes the configured mode and writes its artifacts under out_dir.
// Returns 0 on success, 2 when an audit fails; input problems throw
// bicx::error (the CLI maps those to exit code 1).
int run(const RunConfig& config);

} // namespace bicx
