#pragma once

#include "bicx/prior.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace bicx {

// Maximal BIC exploration rates q_t^j for one action, dense over
// t = j .. n+1. The final stored row is the first zero row (kept because
// exports include it). prefix[i] = sum of q over earlier stored rows.
struct ActionRates {
    int j = 0;
    int n = 0;          // last t with q > 0; 0 when the action never explores
    double rho = 0.0;   // p_1^0 * prod_{i=2}^{j-1} p_i^{-1}
    double mass = 0.0;  // sum_t q_t^j (equals rho in unlimited mode)
    bool gated = false; // limited mode zeroed at least one positive-rate row
    std::vector<double> q, a, b; // indexed by t - j
    std::vector<double> prefix;  // prefix[t - j] = sum_{tau < t} q_tau^j

    double q_at(int t) const;
    double a_at(int t) const;
    double b_at(int t) const;
    double prefix_at(int t) const; // sum_{tau < t} q_tau^j, any t >= 1
};

class RateSchedule {
public:
    int k() const { return k_; }
    bool limited() const { return limited_T_.has_value(); }
    std::optional<int> horizon() const { return limited_T_; }

    const ActionRates& action(int j) const; // j in 2..k
    double q(int t, int j) const { return action(j).q_at(t); }
    int n(int j) const { return action(j).n; }
    double rho(int j) const { return action(j).rho; }
    double mass(int j) const { return action(j).mass; }
    double prefix(int t, int j) const { return action(j).prefix_at(t); }
    int max_n() const;

private:
    friend RateSchedule compute_rate_schedule(const ValidatedPrior&, std::optional<int>, long);
    int k_ = 0;
    std::optional<int> limited_T_;
    std::vector<ActionRates> rows_; // index j - 2
};

// A_t^j given the prefix sum_{tau=j}^{t-1} q_tau^j. Rejects p_j^1 >= 1/2
// (the 1 - 2 p_j^1 denominator).
double a_coeff(const ValidatedPrior& prior, double q_prefix, int j, int t);

// B_t^j given prev_prefix = sum_{tau=j-1}^{t-1} q_tau^{j-1} (unused for j=2)
// and own_prefix = sum_{tau=j}^{t-1} q_tau^j.
double b_coeff(const ValidatedPrior& prior, double prev_prefix, double own_prefix, int j, int t);

// Exploration of action j by agent t is worthwhile under horizon T iff
// (T - t + 2) * p_j^1 >= 1.
bool limited_horizon_gate(const ValidatedPrior& prior, int j, int t, int T);

// Row-by-row computation of q_t^j = min(A_t^j, B_t^j). In limited mode a
// failed gate zeroes the action's rates from that agent on. Throws
// errc::non_terminating if some action is still active past agent_cap.
RateSchedule compute_rate_schedule(const ValidatedPrior& prior,
                                   std::optional<int> limited_T = std::nullopt,
                                   long agent_cap = 1000000);

// rho_j, asserting rho_j == sum_t q_t^j within 1e-12 (errc::mass_mismatch).
// Limited-mode schedules skip the assertion and return the truncated mass;
// callers can detect truncation via schedule.limited().
double total_exploration_mass(const RateSchedule& schedule, int j);

// CSV with header "t,j,q,A,B"; per action all positive rows plus the first
// zero row, actions in increasing j.
void write_rates_csv(std::ostream& os, const RateSchedule& schedule);

// Rates as read back from a CSV export (possibly edited by hand): q values
// per (t, j). Missing cells are zero.
struct RateMatrix {
    int k = 0;
    int max_t = 0;
    std::vector<std::vector<double>> q; // q[j-2][t-1], ragged per action

    double at(int t, int j) const;
    void set(int t, int j, double value);
};

RateMatrix read_rates_csv(std::istream& is);
RateMatrix to_matrix(const RateSchedule& schedule);

} // namespace bicx
