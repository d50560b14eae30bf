#include "bicx/sampler.hpp"
#include "bicx/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bicx {

int explorer_index(const RateSchedule& schedule, int j, double y) {
    if (!(y > 0.0 && y <= 1.0)) fail(errc::y_out_of_range, "y = " + std::to_string(y));
    const ActionRates& row = schedule.action(j);
    if (row.mass <= 0.0) return 0;
    double threshold = y * row.rho;
    if (threshold > row.mass) {
        // unlimited mode reaches here only through rounding at y near 1
        if (threshold > row.mass + 1e-12 * std::max(1.0, row.rho)) return 0;
        threshold = row.mass;
    }
    // first stored prefix >= threshold; explorer is the agent just before it
    auto it = std::lower_bound(row.prefix.begin(), row.prefix.end(), threshold);
    if (it == row.prefix.end()) return row.n;
    int i = static_cast<int>(it - row.prefix.begin());
    return row.j + i - 1;
}

int recommendation_draw(const RateSchedule& schedule, int j, int t, double y) {
    return explorer_index(schedule, j, y) == t ? j : 1;
}

ExplorerAssignment assign_explorers(const RateSchedule& schedule, double y) {
    ExplorerAssignment a;
    a.y = y;
    a.explorer.resize(static_cast<size_t>(schedule.k()) - 1);
    for (int j = 2; j <= schedule.k(); ++j)
        a.explorer[static_cast<size_t>(j) - 2] = explorer_index(schedule, j, y);
    return a;
}

std::vector<double> y_breakpoints(const RateSchedule& schedule) {
    std::vector<double> ys = {0.0, 1.0};
    for (int j = 2; j <= schedule.k(); ++j) {
        const ActionRates& row = schedule.action(j);
        if (row.rho <= 0.0) continue;
        for (double p : row.prefix) {
            double y = p / row.rho;
            if (y > 0.0 && y < 1.0) ys.push_back(y);
        }
        double edge = row.mass / row.rho; // < 1 when truncated
        if (edge > 0.0 && edge < 1.0) ys.push_back(edge);
    }
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    return ys;
}

} // namespace bicx
