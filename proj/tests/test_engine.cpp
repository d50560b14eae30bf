#include "bicx/engine.hpp"
#include "bicx/error.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>

using namespace bicx;

namespace {

InfoState state_of(std::vector<Cell> z, int t) {
    InfoState s;
    s.z = std::move(z);
    s.t = t;
    return s;
}

constexpr Cell U = Cell::unknown;
constexpr Cell M = Cell::minus_one;
constexpr Cell Z = Cell::zero;
constexpr Cell P = Cell::plus_one;

} // namespace

TEST_CASE("initial state") {
    InfoState s = initial_state(3);
    CHECK(s.t == 1);
    CHECK(s.str() == "<*,*,*>");
    CHECK(initial_state(2).str() == "<*,*>");
    CHECK_THROWS_AS(initial_state(1), error);
}

TEST_CASE("feasibility checks") {
    CHECK_NOTHROW(check_feasible(state_of({Z, M, U}, 3)));
    CHECK_THROWS_AS(check_feasible(state_of({Z, U, M}, 9)), error);  // gap in explored prefix
    CHECK_THROWS_AS(check_feasible(state_of({U, M, U}, 9)), error);  // tail before action 1
    CHECK_THROWS_AS(check_feasible(state_of({Z, Z, U}, 9)), error);  // zero on two-point support
    CHECK_THROWS_AS(check_feasible(state_of({Z, M, U}, 2)), error);  // more knowns than agents
    CHECK_THROWS_AS(check_feasible(state_of({U, U, U}, 2)), error);  // agent 1 explores action 1
}

TEST_CASE("recommendation table rows") {
    ValidatedPrior prior = testing::prior_a();
    RateSchedule s = compute_rate_schedule(prior);
    ExplorerAssignment a = assign_explorers(s, 0.2); // f^2 = 2, f^3 per schedule

    // agent 1 takes the a priori best action
    Recommendation r = recommend(state_of({U, U, U}, 1), s, a);
    CHECK(r.action == 1);

    // known +1 is terminal
    r = recommend(state_of({P, U, U}, 5), s, a);
    CHECK(r.action == 1);
    CHECK(r.kind == RecKind::terminal);
    r = recommend(state_of({Z, P, U}, 4), s, a);
    CHECK(r.action == 2);
    CHECK(r.kind == RecKind::terminal);

    // x_1 = -1: exploit the best unexplored action
    r = recommend(state_of({M, U, U}, 2), s, a);
    CHECK(r.action == 2);
    CHECK(r.kind == RecKind::exploit_unknown);
    r = recommend(state_of({M, M, U}, 3), s, a);
    CHECK(r.action == 3);

    // everything known, nothing good: settle on action 1
    r = recommend(state_of({Z, M, M}, 7), s, a);
    CHECK(r.action == 1);
    CHECK(r.kind == RecKind::terminal);
    r = recommend(state_of({M, M, M}, 4), s, a);
    CHECK(r.action == 1);
    CHECK(r.kind == RecKind::terminal);

    // exploration states follow the draw
    r = recommend(state_of({Z, U, U}, 2), s, a); // f^2(0.2) = 2
    CHECK(r.action == 2);
    CHECK(r.kind == RecKind::explore);
    int f3 = a.explorer_for(3);
    r = recommend(state_of({Z, M, U}, f3), s, a);
    CHECK(r.action == 3);
    CHECK(r.kind == RecKind::explore);
    r = recommend(state_of({Z, M, U}, f3 - 1), s, a);
    CHECK(r.action == 1);
    CHECK(r.kind == RecKind::exploit_known);

    // a live exploration state past its explorer cannot happen under the policy
    CHECK_THROWS_AS(recommend(state_of({Z, U, U}, 3), s, a), error); // explorer was 2
}

TEST_CASE("transition bookkeeping") {
    InfoState s = initial_state(3);
    InfoState s2 = transition(s, 1, 0);
    CHECK(s2.str() == "<0,*,*>");
    CHECK(s2.t == 2);
    InfoState s3 = transition(s2, 1, 0); // re-pull of a known action
    CHECK(s3.str() == "<0,*,*>");
    CHECK(s3.t == 3);
    InfoState s4 = transition(s3, 2, -1);
    CHECK(s4.str() == "<0,-1,*>");

    CHECK_THROWS_AS(transition(s4, 2, 1), error);  // deterministic rewards
    CHECK_THROWS_AS(transition(s4, 3, 0), error);  // zero outside action 1
    CHECK_THROWS_AS(transition(s4, 5, 1), error);  // bad action index
}

TEST_CASE("terminal detection") {
    CHECK(is_terminal(state_of({P, U, U}, 2)));
    CHECK(is_terminal(state_of({M, M, M}, 4)));
    CHECK(is_terminal(state_of({Z, M, M}, 4)));
    CHECK_FALSE(is_terminal(state_of({Z, M, U}, 4)));
    CHECK_FALSE(is_terminal(state_of({U, U, U}, 1)));
}

TEST_CASE("feasible states by exhaustive reachability") {
    ValidatedPrior prior = testing::prior_a();
    RateSchedule s = compute_rate_schedule(prior);

    auto states_at = [&](int t) {
        std::vector<std::string> out;
        for (const InfoState& st : feasible_states(prior, s, t)) out.push_back(st.str());
        std::sort(out.begin(), out.end());
        return out;
    };

    CHECK(states_at(2) == std::vector<std::string>{"<-1,*,*>", "<0,*,*>", "<1,*,*>"});

    auto t3 = states_at(3);
    CHECK(std::find(t3.begin(), t3.end(), "<0,-1,*>") != t3.end()); // q_2^2 > 0

    // the three infeasible rows never appear at any time
    for (int t = 1; t <= s.max_n() + 1; ++t) {
        auto all = states_at(t);
        for (const char* bad : {"<0,*,-1>", "<0,*,1>", "<0,1,-1>"})
            CHECK(std::find(all.begin(), all.end(), bad) == all.end());
    }

    // by n_k + 1 every reachable state is terminal
    for (const InfoState& st : feasible_states(prior, s, s.max_n() + 1)) CHECK(is_terminal(st));
}

TEST_CASE("positive mean preprocessing") {
    // all tail means negative: identity
    ValidatedPrior neg = testing::prior_a();
    PositiveMeanPlan plan = preprocess_positive_means(neg);
    CHECK(plan.prefix_actions.empty());
    CHECK(plan.agent_offset == 0);
    REQUIRE(plan.reduced.has_value());
    CHECK(plan.reduced->k() == 3);
    CHECK(plan.reduced->id() == neg.id());

    // mu_2 > 0 > mu_3: prefix explores 1-2, residual is a 2-action instance
    ValidatedPrior mixed = testing::make_prior(3, 0.5, 0.3, 0.2, {0.6, 0.2});
    plan = preprocess_positive_means(mixed);
    CHECK(plan.prefix_actions == std::vector<int>{1, 2});
    CHECK(plan.agent_offset == 1);
    REQUIRE(plan.reduced.has_value());
    CHECK(plan.reduced->k() == 2);
    CHECK(plan.reduced->p_plus(2) == doctest::Approx(0.2));
    CHECK(plan.residual_to_original == std::vector<int>{0, 1, 3});
    CHECK_FALSE(plan.reduced->has_positive_tail_mean());

    // every tail mean nonnegative: plain sequential exploration, no residual
    ValidatedPrior allpos = testing::make_prior(2, 0.8, 0.1, 0.1, {0.6});
    plan = preprocess_positive_means(allpos);
    CHECK(plan.prefix_actions == std::vector<int>{1, 2});
    CHECK_FALSE(plan.reduced.has_value());
}
