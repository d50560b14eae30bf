#include "bicx/simulate.hpp"
#include "bicx/detail/format.hpp"
#include "bicx/error.hpp"
#include "bicx/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <ostream>
#include <thread>

namespace bicx {

namespace {

using detail::fmt_double;

constexpr double kZ95 = 1.959963984540054;

} // namespace

PiHatPolicy::PiHatPolicy(ValidatedPrior prior, RateSchedule schedule)
    : prior_(std::move(prior)), schedule_(std::move(schedule)) {
    assignment_ = assign_explorers(schedule_, 1.0);
}

std::unique_ptr<Policy> PiHatPolicy::clone() const { return std::make_unique<PiHatPolicy>(*this); }

void PiHatPolicy::begin_episode(double y) { assignment_ = assign_explorers(schedule_, y); }

Recommendation PiHatPolicy::decide(const InfoState& state) {
    return recommend(state, schedule_, assignment_);
}

PreprocessedPiHatPolicy::PreprocessedPiHatPolicy(const ValidatedPrior& prior)
    : prior_(prior), plan_(preprocess_positive_means(prior)) {
    if (plan_.reduced) {
        schedule_ = compute_rate_schedule(*plan_.reduced);
        assignment_ = assign_explorers(*schedule_, 1.0);
    }
}

std::unique_ptr<Policy> PreprocessedPiHatPolicy::clone() const {
    return std::make_unique<PreprocessedPiHatPolicy>(*this);
}

void PreprocessedPiHatPolicy::begin_episode(double y) {
    if (schedule_) assignment_ = assign_explorers(*schedule_, y);
}

Recommendation PreprocessedPiHatPolicy::decide(const InfoState& state) {
    for (int j = 1; j <= state.k(); ++j)
        if (state.at(j) == Cell::plus_one) return {j, RecKind::terminal};

    int prefix_len = static_cast<int>(plan_.prefix_actions.size());
    if (state.t <= prefix_len) {
        int action = plan_.prefix_actions[static_cast<size_t>(state.t) - 1];
        return {action, state.t == 1 || state.at(action) == Cell::unknown
                            ? RecKind::exploit_unknown
                            : RecKind::exploit_known};
    }
    if (!plan_.reduced) {
        // prefix explored everything worth exploring; settle on the best value
        int best = 1;
        for (int j = 2; j <= state.k(); ++j) {
            if (state.at(j) == Cell::unknown) continue;
            if (state.at(best) == Cell::unknown ||
                cell_reward(state.at(j)) > cell_reward(state.at(best)))
                best = j;
        }
        return {best, RecKind::terminal};
    }

    InfoState residual = initial_state(plan_.reduced->k());
    residual.t = state.t - plan_.agent_offset;
    for (int rj = 1; rj <= plan_.reduced->k(); ++rj)
        residual.z[static_cast<size_t>(rj) - 1] =
            state.at(plan_.residual_to_original[static_cast<size_t>(rj)]);
    Recommendation r = recommend(residual, *schedule_, assignment_);
    return {plan_.residual_to_original[static_cast<size_t>(r.action)], r.kind};
}

Recommendation GreedyPolicy::decide(const InfoState& state) {
    check_feasible(state);
    if (state.t == 1) return {1, RecKind::exploit_unknown};
    for (int j = 1; j <= state.k(); ++j)
        if (state.at(j) == Cell::plus_one) return {j, RecKind::terminal};
    int least = 0;
    for (int j = 1; j <= state.k(); ++j)
        if (state.at(j) == Cell::unknown) {
            least = j;
            break;
        }
    if (least == 0 || state.at(1) == Cell::zero) {
        int best = 1;
        for (int j = 2; j <= state.k(); ++j) {
            if (state.at(j) == Cell::unknown) continue;
            if (cell_reward(state.at(j)) > cell_reward(state.at(best))) best = j;
        }
        return {best, least == 0 ? RecKind::terminal : RecKind::exploit_known};
    }
    return {least, RecKind::exploit_unknown};
}

FullInfoPolicy::FullInfoPolicy(const ValidatedPrior& prior, int T)
    : planner_(std::make_shared<FullInfoPlanner>(prior, T)) {}

std::unique_ptr<Policy> FullInfoPolicy::clone() const {
    return std::make_unique<FullInfoPolicy>(*this);
}

Recommendation FullInfoPolicy::decide(const InfoState& state) {
    int action = planner_->best_action(state);
    RecKind kind = state.at(action) == Cell::unknown
                       ? (state.t == 1 ? RecKind::exploit_unknown : RecKind::explore)
                       : RecKind::exploit_known;
    if (state.at(action) == Cell::plus_one) kind = RecKind::terminal;
    return {action, kind};
}

namespace {

struct EpisodeStats {
    double welfare = 0.0;
    int terminal_t = 0;
    int reveals = 0;
};

void draw_episode(const ValidatedPrior& prior, std::uint64_t seed, std::uint64_t episode,
                  double& y, std::vector<int>& x) {
    CounterRng rng(seed, episode);
    y = rng.next_unit_open();
    x.assign(static_cast<size_t>(prior.k()) + 1, 0);
    double u = rng.next_unit();
    x[1] = u < prior.p1_plus() ? 1 : (u < prior.p1_plus() + prior.p1_zero() ? 0 : -1);
    for (int j = 2; j <= prior.k(); ++j)
        x[static_cast<size_t>(j)] = rng.next_unit() < prior.p_plus(j) ? 1 : -1;
}

EpisodeStats walk_episode(Policy& policy, const ValidatedPrior& prior, int T, double y,
                          const std::vector<int>& x, Trajectory* log) {
    EpisodeStats st;
    policy.begin_episode(y);
    InfoState state = initial_state(prior.k());
    for (int t = 1; t <= T; ++t) {
        if (st.terminal_t == 0 && is_terminal(state)) st.terminal_t = t;
        Recommendation r = policy.decide(state);
        int reward = x[static_cast<size_t>(r.action)];
        if (state.at(r.action) == Cell::unknown) ++st.reveals;
        st.welfare += reward;
        if (log) log->records.push_back({t, state, r.action, r.kind, reward});
        state = transition(state, r.action, reward);
    }
    // T + 2 marks an episode that never reached a terminal state
    if (st.terminal_t == 0) st.terminal_t = is_terminal(state) ? T + 1 : T + 2;
    return st;
}

// deterministic parallel map over episodes; results land in episode order
template <class Fn>
void for_each_episode(long reps, int threads, const Fn& fn) {
    if (threads <= 1) {
        for (long e = 0; e < reps; ++e) fn(e, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (long e = w; e < reps; e += threads) fn(e, w);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct MeanCi {
    double mean, lo, hi;
};

MeanCi mean_ci(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v; // fixed accumulation order
    double mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return {mean, mean, mean};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    double se = std::sqrt(ss / (static_cast<double>(values.size()) - 1.0) /
                          static_cast<double>(values.size()));
    return {mean, mean - kZ95 * se, mean + kZ95 * se};
}

} // namespace

Trajectory run_episode(Policy& policy, const ValidatedPrior& prior, int T, std::uint64_t seed,
                       std::uint64_t episode) {
    Trajectory tr;
    tr.seed = seed;
    tr.episode = episode;
    draw_episode(prior, seed, episode, tr.y, tr.x);
    EpisodeStats st = walk_episode(policy, prior, T, tr.y, tr.x, &tr);
    tr.welfare = st.welfare;
    tr.terminal_t = st.terminal_t;
    return tr;
}

WelfareEstimate estimate_welfare(const Policy& policy, const ValidatedPrior& prior, int T,
                                 long reps, std::uint64_t seed) {
    if (reps < 1) fail(errc::index_out_of_range, "replications must be >= 1");
    std::vector<double> welfare(static_cast<size_t>(reps));
    int threads = std::max(1, std::min<int>(harness_threads(), static_cast<int>(reps)));
    std::vector<std::unique_ptr<Policy>> clones;
    for (int w = 0; w < threads; ++w) clones.push_back(policy.clone());
    for_each_episode(reps, threads, [&](long e, int w) {
        double y;
        std::vector<int> x;
        draw_episode(prior, seed, static_cast<std::uint64_t>(e), y, x);
        welfare[static_cast<size_t>(e)] =
            walk_episode(*clones[static_cast<size_t>(w)], prior, T, y, x, nullptr).welfare;
    });
    MeanCi ci = mean_ci(welfare);
    return {ci.mean, ci.lo, ci.hi, reps, reps < 2};
}

std::vector<ComparisonRow> compare_policies(const std::vector<const Policy*>& policies,
                                            const ValidatedPrior& prior, int T, long reps,
                                            std::uint64_t seed) {
    if (reps < 1) fail(errc::index_out_of_range, "replications must be >= 1");
    const size_t np = policies.size();
    std::vector<std::vector<double>> welfare(np, std::vector<double>(static_cast<size_t>(reps)));
    std::vector<std::vector<double>> terminal(np, std::vector<double>(static_cast<size_t>(reps)));
    std::vector<std::vector<double>> reveals(np, std::vector<double>(static_cast<size_t>(reps)));

    int threads = std::max(1, std::min<int>(harness_threads(), static_cast<int>(reps)));
    std::vector<std::vector<std::unique_ptr<Policy>>> clones(static_cast<size_t>(threads));
    for (int w = 0; w < threads; ++w)
        for (const Policy* p : policies) clones[static_cast<size_t>(w)].push_back(p->clone());

    for_each_episode(reps, threads, [&](long e, int w) {
        double y;
        std::vector<int> x;
        draw_episode(prior, seed, static_cast<std::uint64_t>(e), y, x);
        for (size_t p = 0; p < np; ++p) {
            EpisodeStats st = walk_episode(*clones[static_cast<size_t>(w)][p], prior, T, y, x,
                                           nullptr);
            welfare[p][static_cast<size_t>(e)] = st.welfare;
            terminal[p][static_cast<size_t>(e)] = st.terminal_t;
            reveals[p][static_cast<size_t>(e)] = st.reveals;
        }
    });

    std::vector<ComparisonRow> rows;
    for (size_t p = 0; p < np; ++p) {
        MeanCi ci = mean_ci(welfare[p]);
        ComparisonRow row;
        row.policy = policies[p]->name();
        row.mean_welfare = ci.mean;
        row.ci_low = ci.lo;
        row.ci_high = ci.hi;
        row.mean_terminal_t = mean_ci(terminal[p]).mean;
        row.mean_reveals = mean_ci(reveals[p]).mean;
        row.reps = reps;
        row.seed = seed;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
    os << "policy,mean_welfare,ci_low,ci_high,mean_terminal_t,reps,seed\n";
    for (const auto& r : rows)
        os << r.policy << "," << fmt_double(r.mean_welfare) << "," << fmt_double(r.ci_low) << ","
           << fmt_double(r.ci_high) << "," << fmt_double(r.mean_terminal_t) << "," << r.reps << "," << r.seed
           << "\n";
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
    os << "t,state_before,sigma,kind,reward\n";
    for (const auto& rec : tr.records)
        os << rec.t << ",\"" << rec.state_before.str() << "\"," << rec.sigma << ","
           << rec_kind_name(rec.kind) << "," << rec.reward << "\n";
}

int harness_threads() {
    if (const char* env = std::getenv("BIC_EXPLORE_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(hw == 0 ? 1u : hw, 8u));
}

} // namespace bicx
