#pragma once

#include "bicx/prior.hpp"

#include <iosfwd>
#include <utility>
#include <vector>

namespace bicx {

// Continuous-case problem instance: action 1's reward distributed per d1,
// actions 2..k two-point with p_j^1 from tail_p_plus. Means must be
// strictly decreasing starting from d1's mean.
struct ContinuousInstance {
    ContinuousPrior d1;
    std::vector<double> tail_p_plus; // p_j^1 for j = 2..k

    int k() const { return static_cast<int>(tail_p_plus.size()) + 1; }
    double p_plus(int j) const;
    double p_minus(int j) const;
    double mean(int j) const; // mean(1) = d1.mean
};

ContinuousInstance make_continuous_instance(ContinuousPrior d1, std::vector<double> tail_p_plus);

// Interval endpoints i_t^j of the partition policy. theta_t^j is the
// half-open interval (i_t^j, i_{t+1}^j]; i_t^j = -1 for t <= j. Endpoint
// indices run while below saturation (the first endpoint equal to 1) and at
// most T + 2, one past the last recommending agent.
class PartitionSchedule {
public:
    int k() const { return k_; }
    int horizon() const { return T_; }

    double endpoint(int j, int t) const; // i_t^j; 1 beyond the stored range once saturated
    std::pair<double, double> interval(int j, int t) const; // theta_t^j
    // first t with i_{t+1}^j = 1; 0 if not reached within the horizon
    int saturation(int j) const;
    int last_endpoint_index(int j) const;

private:
    friend PartitionSchedule compute_interval_schedule(const ContinuousInstance&, int);
    friend PartitionSchedule make_partition_schedule(int, int, std::vector<std::vector<double>>);
    int k_ = 0;
    int T_ = 0;
    std::vector<std::vector<double>> endpoints_; // endpoints_[j-2][t-1] = i_t^j
    std::vector<int> saturation_;
};

// Schedule from explicit endpoint rows (endpoints[j-2][t-1] = i_t^j), for
// hand-built partition policies. Rows must start at -1 and be nondecreasing.
PartitionSchedule make_partition_schedule(int k, int T, std::vector<std::vector<double>> endpoints);

// First-interval equation: omega with
//   prod_{n=2}^{j-1} p_n^{-1} * E[(mu_j - X1) ; X1 <= mu_j]
//     = E[(X1 - mu_j) ; mu_j <= X1 <= omega].
// Throws errc::no_bracket when the right side at omega = 1 is still below
// the left (callers then take i = 1).
double solve_omega_first(const ContinuousInstance& instance, int j, double root_tol = 1e-10);

// Step equation given the current left endpoint i_t^j < 1: omega with
//   p_j^1 * E[(1 - X1) ; X1 <= i_t] = E[(X1 - mu_j) ; i_t < X1 <= omega].
double solve_omega_step(const ContinuousInstance& instance, int j, double i_t,
                        double root_tol = 1e-10);

// Iterates the two equations per action until saturation or the horizon,
// checking the interval monotonicity properties numerically
// (errc::monotonicity_violation beyond 1e-9).
PartitionSchedule compute_interval_schedule(const ContinuousInstance& instance, int T);

// Explored tail rewards; 0 marks unexplored, otherwise -1 or +1.
struct PartitionState {
    std::vector<int> tail; // index j-2

    int at(int j) const { return tail[static_cast<size_t>(j) - 2]; }
    void set(int j, int v) { tail[static_cast<size_t>(j) - 2] = v; }
};

PartitionState initial_partition_state(int k);

// Recommendation for agent t given the realized x1: agent 1 takes action 1;
// a known +1 action is recommended forever; x1 in theta_t^j starts action j;
// otherwise action 1. errc::overlap_detected if two actions' intervals both
// contain x1.
int partition_recommend(const PartitionSchedule& schedule, const PartitionState& state, int t,
                        double x1);

// CSV with header "j,t,i_left,i_right": per action one row per computed
// endpoint t >= j+1, giving (i_{t-1}^j, i_t^j], up to the saturation row.
void write_partition_csv(std::ostream& os, const PartitionSchedule& schedule);

} // namespace bicx
