#pragma once

#include "bicx/prior.hpp"
#include "bicx/rates.hpp"
#include "bicx/sampler.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bicx {

// Planner knowledge about one action's reward. zero is legal only for
// action 1 (three-point support).
enum class Cell : std::int8_t { unknown, minus_one, zero, plus_one };

int cell_reward(Cell c); // -1 / 0 / +1; throws on unknown

// The planner's information state before agent t: realized rewards where
// known, unknown markers elsewhere.
struct InfoState {
    std::vector<Cell> z;
    int t = 1;

    int k() const { return static_cast<int>(z.size()); }
    Cell at(int j) const { return z[static_cast<size_t>(j) - 1]; }
    bool operator==(const InfoState& o) const = default;
    int code() const;        // base-4 digest of z (t excluded)
    std::string str() const; // e.g. "<0,-1,*>"
};

enum class RecKind { exploit_known, exploit_unknown, explore, terminal };

const char* rec_kind_name(RecKind k);

struct Recommendation {
    int action = 0;
    RecKind kind = RecKind::exploit_known;
};

InfoState initial_state(int k); // all unknown, t = 1; errc::degenerate_k for k < 2

// Ordering invariant from the exploration order: a known tail cell implies
// every earlier cell (and action 1) is known, zero appears only at index 1,
// and at most t-1 cells are known. Throws errc::infeasible_state.
void check_feasible(const InfoState& state);

// The recommendation table. Exploration states (z[1] = 0, least unexplored
// j) delegate to the coordinated draw; everything else is deterministic.
Recommendation recommend(const InfoState& state, const RateSchedule& schedule,
                         const ExplorerAssignment& assignment);

// Records the realized reward (must match if already known) and advances t.
InfoState transition(const InfoState& state, int action, int reward);

// Terminal states issue one fixed recommendation forever: some reward is
// +1, or every reward is known.
bool is_terminal(const InfoState& state);

// All states reachable before agent t under the policy, by exhaustive
// enumeration of realization vectors and y cells.
std::vector<InfoState> feasible_states(const ValidatedPrior& prior,
                                       const RateSchedule& schedule, int t);

// Handling of priors with mu_j >= 0 for some j >= 2: those actions are
// explored by a deterministic prefix (stop early on a +1), and the engine
// runs on the residual instance of action 1 plus the negative-mean tail.
struct PositiveMeanPlan {
    // actions recommended to agents 1..size() while no +1 is known
    std::vector<int> prefix_actions;
    // residual instance; empty when only action 1 remains after the prefix
    std::optional<ValidatedPrior> reduced;
    std::vector<int> residual_to_original; // 1-based residual index -> original action
    int agent_offset = 0;                  // residual t = global t - agent_offset
};

PositiveMeanPlan preprocess_positive_means(const ValidatedPrior& prior);

} // namespace bicx
