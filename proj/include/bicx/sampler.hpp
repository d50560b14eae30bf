#pragma once

#include "bicx/rates.hpp"

#include <vector>

namespace bicx {

// One shared uniform draw y determines, per action, the unique agent that
// explores it: f^j(y) = largest t with sum_{tau<t} q_tau^j < y * rho_j.
// Cumulative cells are half-open (prefix_t, prefix_{t+1}], which makes f
// total on y in (0, 1]. Returns 0 when no agent explores (possible only in
// limited mode, where the rate mass is truncated below rho_j).
int explorer_index(const RateSchedule& schedule, int j, double y);

// f_t^j(y): j if explorer_index(schedule, j, y) == t, else 1.
int recommendation_draw(const RateSchedule& schedule, int j, int t, double y);

struct ExplorerAssignment {
    double y = 0.0;
    std::vector<int> explorer; // index j-2; 0 = none

    int explorer_for(int j) const { return explorer[static_cast<size_t>(j) - 2]; }
};

ExplorerAssignment assign_explorers(const RateSchedule& schedule, double y);

// All y values where some f^j changes, including 0 and 1, sorted ascending.
// Every f^j is constant on each open interval between consecutive entries.
std::vector<double> y_breakpoints(const RateSchedule& schedule);

} // namespace bicx
