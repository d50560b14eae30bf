#include "bicx/engine.hpp"
#include "bicx/error.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace bicx {

int cell_reward(Cell c) {
    switch (c) {
    case Cell::minus_one: return -1;
    case Cell::zero: return 0;
    case Cell::plus_one: return 1;
    case Cell::unknown: break;
    }
    fail(errc::infeasible_state, "unknown cell has no realized reward");
}

const char* rec_kind_name(RecKind k) {
    switch (k) {
    case RecKind::exploit_known: return "exploit_known";
    case RecKind::exploit_unknown: return "exploit_unknown";
    case RecKind::explore: return "explore";
    case RecKind::terminal: return "terminal";
    }
    return "?";
}

int InfoState::code() const {
    int c = 0;
    for (size_t i = z.size(); i-- > 0;) c = c * 4 + static_cast<int>(z[i]);
    return c;
}

std::string InfoState::str() const {
    std::string s = "<";
    for (size_t i = 0; i < z.size(); ++i) {
        if (i) s += ",";
        switch (z[i]) {
        case Cell::unknown: s += "*"; break;
        case Cell::minus_one: s += "-1"; break;
        case Cell::zero: s += "0"; break;
        case Cell::plus_one: s += "1"; break;
        }
    }
    return s + ">";
}

InfoState initial_state(int k) {
    if (k < 2) fail(errc::degenerate_k, "need at least 2 actions, got " + std::to_string(k));
    InfoState s;
    s.z.assign(static_cast<size_t>(k), Cell::unknown);
    s.t = 1;
    return s;
}

void check_feasible(const InfoState& state) {
    if (state.t < 1 || state.z.size() < 2) fail(errc::infeasible_state, "malformed state");
    int known = 0;
    for (const Cell c : state.z) known += (c != Cell::unknown);
    if (known > state.t - 1)
        fail(errc::infeasible_state,
             state.str() + " has " + std::to_string(known) + " known cells before agent " +
                 std::to_string(state.t));
    if (state.t > 1 && state.at(1) == Cell::unknown)
        fail(errc::infeasible_state, "action 1 still unexplored before agent " +
                                         std::to_string(state.t));
    for (int j = 2; j <= state.k(); ++j) {
        if (state.at(j) == Cell::zero)
            fail(errc::infeasible_state, "zero reward at two-point action " + std::to_string(j));
        if (state.at(j) != Cell::unknown) {
            if (state.at(1) == Cell::unknown)
                fail(errc::infeasible_state, state.str() + ": tail explored before action 1");
            for (int i = 2; i < j; ++i)
                if (state.at(i) == Cell::unknown)
                    fail(errc::infeasible_state,
                         state.str() + ": action " + std::to_string(j) + " explored before " +
                             std::to_string(i));
        }
    }
}

namespace {

int least_unexplored(const InfoState& s) {
    for (int j = 1; j <= s.k(); ++j)
        if (s.at(j) == Cell::unknown) return j;
    return 0;
}

Recommendation best_known_terminal(const InfoState& s) {
    int best = 1;
    for (int j = 2; j <= s.k(); ++j)
        if (cell_reward(s.at(j)) > cell_reward(s.at(best))) best = j;
    return {best, RecKind::terminal};
}

} // namespace

Recommendation recommend(const InfoState& state, const RateSchedule& schedule,
                         const ExplorerAssignment& assignment) {
    check_feasible(state);
    if (state.k() != schedule.k())
        fail(errc::index_out_of_range, "state has " + std::to_string(state.k()) +
                                           " actions, schedule " + std::to_string(schedule.k()));
    if (state.t == 1) return {1, RecKind::exploit_unknown};

    for (int j = 1; j <= state.k(); ++j)
        if (state.at(j) == Cell::plus_one) return {j, RecKind::terminal};

    int j = least_unexplored(state);
    if (j == 0) return best_known_terminal(state);

    if (state.at(1) == Cell::minus_one) return {j, RecKind::exploit_unknown};

    // z[1] = 0: exploration state for the least unexplored action
    int explorer = assignment.explorer_for(j);
    if (explorer != 0 && explorer < state.t)
        fail(errc::infeasible_state, state.str() + " alive at agent " + std::to_string(state.t) +
                                         " after explorer " + std::to_string(explorer));
    if (explorer == state.t) return {j, RecKind::explore};
    return {1, RecKind::exploit_known};
}

InfoState transition(const InfoState& state, int action, int reward) {
    if (action < 1 || action > state.k())
        fail(errc::index_out_of_range, "action " + std::to_string(action));
    if (reward < -1 || reward > 1)
        fail(errc::reward_mismatch, "reward " + std::to_string(reward));
    if (reward == 0 && action != 1)
        fail(errc::reward_mismatch, "reward 0 at two-point action " + std::to_string(action));

    InfoState next = state;
    Cell& cell = next.z[static_cast<size_t>(action) - 1];
    Cell realized = reward == -1 ? Cell::minus_one : (reward == 0 ? Cell::zero : Cell::plus_one);
    if (cell == Cell::unknown) {
        cell = realized;
    } else if (cell != realized) {
        fail(errc::reward_mismatch, "action " + std::to_string(action) + " known as " +
                                        std::to_string(cell_reward(cell)) + ", got " +
                                        std::to_string(reward));
    }
    next.t = state.t + 1;
    return next;
}

bool is_terminal(const InfoState& state) {
    bool all_known = true;
    for (const Cell c : state.z) {
        if (c == Cell::plus_one) return true;
        if (c == Cell::unknown) all_known = false;
    }
    return all_known;
}

std::vector<InfoState> feasible_states(const ValidatedPrior& prior, const RateSchedule& schedule,
                                       int t) {
    const int k = prior.k();
    std::vector<double> ys = y_breakpoints(schedule);
    std::set<int> seen;
    std::vector<InfoState> out;

    std::vector<int> x(static_cast<size_t>(k) + 1, 0); // x[j] for j = 1..k
    const int tail_combos = 1 << (k - 1);
    for (int x1 : {+1, 0, -1}) {
        x[1] = x1;
        for (int bits = 0; bits < tail_combos; ++bits) {
            for (int j = 2; j <= k; ++j) x[static_cast<size_t>(j)] = (bits >> (j - 2)) & 1 ? 1 : -1;
            for (size_t ci = 0; ci + 1 < ys.size(); ++ci) {
                double y = 0.5 * (ys[ci] + ys[ci + 1]);
                ExplorerAssignment asg = assign_explorers(schedule, y);
                InfoState s = initial_state(k);
                for (int step = 1; step < t; ++step) {
                    Recommendation r = recommend(s, schedule, asg);
                    s = transition(s, r.action, x[static_cast<size_t>(r.action)]);
                }
                if (seen.insert(s.code()).second) out.push_back(s);
            }
        }
    }
    return out;
}

PositiveMeanPlan preprocess_positive_means(const ValidatedPrior& prior) {
    PositiveMeanPlan plan;
    int m = 0;
    for (int j = 2; j <= prior.k(); ++j)
        if (prior.mean(j) >= 0.0) ++m;

    if (m == 0) {
        plan.reduced = prior;
        plan.residual_to_original.resize(static_cast<size_t>(prior.k()) + 1);
        for (int j = 1; j <= prior.k(); ++j) plan.residual_to_original[static_cast<size_t>(j)] = j;
        return plan;
    }

    // means are sorted, so the nonnegative tail actions are exactly 2..m+1
    for (int s = 1; s <= m + 1; ++s) plan.prefix_actions.push_back(s);
    plan.agent_offset = m;
    plan.residual_to_original = {0, 1};
    if (m + 1 < prior.k()) {
        DiscretePrior reduced;
        reduced.k = prior.k() - m;
        reduced.p1_plus = prior.p1_plus();
        reduced.p1_zero = prior.p1_zero();
        reduced.p1_minus = prior.p1_minus();
        for (int j = m + 2; j <= prior.k(); ++j) {
            reduced.p_plus.push_back(prior.p_plus(j));
            plan.residual_to_original.push_back(j);
        }
        plan.reduced = validate(reduced);
    }
    return plan;
}

} // namespace bicx
