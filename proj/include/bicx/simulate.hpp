#pragma once

#include "bicx/engine.hpp"
#include "bicx/prior.hpp"
#include "bicx/rates.hpp"
#include "bicx/sampler.hpp"
#include "bicx/verify.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace bicx {

// Per-episode deterministic policy: everything stochastic is fixed by the
// episode's y draw handed to begin_episode.
class Policy {
public:
    virtual ~Policy() = default;
    virtual std::string name() const = 0;
    virtual std::unique_ptr<Policy> clone() const = 0;
    virtual void begin_episode(double /*y*/) {}
    virtual Recommendation decide(const InfoState& state) = 0;
};

// The coordinated maximal-exploration policy.
class PiHatPolicy : public Policy {
public:
    PiHatPolicy(ValidatedPrior prior, RateSchedule schedule);
    std::string name() const override { return "pi_hat"; }
    std::unique_ptr<Policy> clone() const override;
    void begin_episode(double y) override;
    Recommendation decide(const InfoState& state) override;

private:
    ValidatedPrior prior_;
    RateSchedule schedule_;
    ExplorerAssignment assignment_;
};

// Same policy behind the positive-mean preamble: nonnegative-mean actions
// are explored by a deterministic prefix, the engine runs on the residual.
class PreprocessedPiHatPolicy : public Policy {
public:
    explicit PreprocessedPiHatPolicy(const ValidatedPrior& prior);
    std::string name() const override { return "pi_hat"; }
    std::unique_ptr<Policy> clone() const override;
    void begin_episode(double y) override;
    Recommendation decide(const InfoState& state) override;

private:
    ValidatedPrior prior_;
    PositiveMeanPlan plan_;
    std::optional<RateSchedule> schedule_; // on plan_.reduced
    ExplorerAssignment assignment_;
};

// The same exploitation rows with zero exploration rates.
class GreedyPolicy : public Policy {
public:
    std::string name() const override { return "greedy"; }
    std::unique_ptr<Policy> clone() const override { return std::make_unique<GreedyPolicy>(*this); }
    Recommendation decide(const InfoState& state) override;
};

// Welfare-optimal planner with unrestricted information flow; upper bound.
class FullInfoPolicy : public Policy {
public:
    FullInfoPolicy(const ValidatedPrior& prior, int T);
    std::string name() const override { return "full_info"; }
    std::unique_ptr<Policy> clone() const override;
    Recommendation decide(const InfoState& state) override;

private:
    std::shared_ptr<FullInfoPlanner> planner_; // immutable DP, shareable
};

struct TrajectoryRecord {
    int t = 0;
    InfoState state_before;
    int sigma = 0;
    RecKind kind = RecKind::exploit_known;
    int reward = 0;
};

struct Trajectory {
    std::uint64_t seed = 0;
    std::uint64_t episode = 0;
    double y = 0.0;
    std::vector<int> x; // x[j], 1-based
    std::vector<TrajectoryRecord> records;
    double welfare = 0.0;
    int terminal_t = 0; // first agent whose pre-state is terminal; T+1 if none
};

// One seeded episode: draws y then x_1..x_k from the episode substream, then
// walks the policy with compliant agents. Replays bit-exactly.
Trajectory run_episode(Policy& policy, const ValidatedPrior& prior, int T, std::uint64_t seed,
                       std::uint64_t episode = 0);

struct WelfareEstimate {
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    long reps = 0;
    bool degenerate = false; // fewer than 2 replications
};

WelfareEstimate estimate_welfare(const Policy& policy, const ValidatedPrior& prior, int T,
                                 long reps, std::uint64_t seed);

struct ComparisonRow {
    std::string policy;
    double mean_welfare = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double mean_terminal_t = 0.0;
    double mean_reveals = 0.0; // mean count of first-time explorations
    long reps = 0;
    std::uint64_t seed = 0;
};

// Common-random-numbers comparison: every policy sees the same (x, y) draws.
std::vector<ComparisonRow> compare_policies(const std::vector<const Policy*>& policies,
                                            const ValidatedPrior& prior, int T, long reps,
                                            std::uint64_t seed);

void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows);
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);

// Episode parallelism cap: BIC_EXPLORE_THREADS when set, else hardware.
int harness_threads();

} // namespace bicx
