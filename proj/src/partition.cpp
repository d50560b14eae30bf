#include "bicx/partition.hpp"
#include "bicx/detail/format.hpp"
#include "bicx/error.hpp"
#include "bicx/numeric.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace bicx {

namespace {
constexpr double kSaturationSnap = 1e-12; // endpoints this close to 1 become 1
constexpr double kMonotoneTol = 1e-9;

using detail::fmt_double;
} // namespace

double ContinuousInstance::p_plus(int j) const {
    if (j < 2 || j > k()) fail(errc::index_out_of_range, "action " + std::to_string(j));
    return tail_p_plus[static_cast<size_t>(j) - 2];
}

double ContinuousInstance::p_minus(int j) const { return 1.0 - p_plus(j); }

double ContinuousInstance::mean(int j) const {
    if (j == 1) return d1.mean;
    return 2.0 * p_plus(j) - 1.0;
}

ContinuousInstance make_continuous_instance(ContinuousPrior d1, std::vector<double> tail_p_plus) {
    if (tail_p_plus.empty()) fail(errc::degenerate_k, "need at least one tail action");
    ContinuousInstance inst{std::move(d1), std::move(tail_p_plus)};
    for (double p : inst.tail_p_plus)
        if (!(p > 0.0 && p < 1.0)) fail(errc::probability_out_of_range, "p_j^1 = " + fmt_double(p));
    for (int j = 1; j < inst.k(); ++j)
        if (!(inst.mean(j) > inst.mean(j + 1)))
            fail(errc::non_strict_ordering, "mu_" + std::to_string(j) + " = " + fmt_double(inst.mean(j)) +
                                                " vs mu_" + std::to_string(j + 1) + " = " +
                                                fmt_double(inst.mean(j + 1)));
    return inst;
}

double PartitionSchedule::endpoint(int j, int t) const {
    if (j < 2 || j > k_) fail(errc::index_out_of_range, "action " + std::to_string(j));
    if (t < 1) fail(errc::index_out_of_range, "endpoint index " + std::to_string(t));
    const auto& e = endpoints_[static_cast<size_t>(j) - 2];
    if (t > static_cast<int>(e.size())) {
        if (saturation_[static_cast<size_t>(j) - 2] == 0)
            fail(errc::index_out_of_range,
                 "endpoint " + std::to_string(t) + " beyond unsaturated horizon");
        return 1.0;
    }
    return e[static_cast<size_t>(t) - 1];
}

std::pair<double, double> PartitionSchedule::interval(int j, int t) const {
    return {endpoint(j, t), endpoint(j, t + 1)};
}

int PartitionSchedule::saturation(int j) const {
    if (j < 2 || j > k_) fail(errc::index_out_of_range, "action " + std::to_string(j));
    return saturation_[static_cast<size_t>(j) - 2];
}

int PartitionSchedule::last_endpoint_index(int j) const {
    if (j < 2 || j > k_) fail(errc::index_out_of_range, "action " + std::to_string(j));
    return static_cast<int>(endpoints_[static_cast<size_t>(j) - 2].size());
}

namespace {

// left side of the first-interval equation
double first_lhs(const ContinuousInstance& inst, int j) {
    double tail = 1.0;
    for (int n = 2; n < j; ++n) tail *= inst.p_minus(n);
    double mu = inst.mean(j);
    return tail * -inst.d1.partial_expectation(-1.0, mu, mu);
}

// left side of the step equation given current endpoint i_t
double step_lhs(const ContinuousInstance& inst, int j, double i_t) {
    return inst.p_plus(j) * -inst.d1.partial_expectation(-1.0, i_t, 1.0);
}

} // namespace

double solve_omega_first(const ContinuousInstance& inst, int j, double root_tol) {
    double mu = inst.mean(j);
    double lhs = first_lhs(inst, j);
    auto g = [&](double w) { return inst.d1.partial_expectation(mu, w, mu) - lhs; };
    if (g(1.0) < 0.0)
        fail(errc::no_bracket, "action " + std::to_string(j) + ": mass up to 1 is insufficient");
    return find_root(g, mu, 1.0, root_tol);
}

double solve_omega_step(const ContinuousInstance& inst, int j, double i_t, double root_tol) {
    if (i_t >= 1.0) fail(errc::index_out_of_range, "interval already saturated");
    double mu = inst.mean(j);
    double lhs = step_lhs(inst, j, i_t);
    auto g = [&](double w) { return inst.d1.partial_expectation(i_t, w, mu) - lhs; };
    if (g(1.0) < 0.0)
        fail(errc::no_bracket, "action " + std::to_string(j) + ": mass up to 1 is insufficient");
    return find_root(g, i_t, 1.0, root_tol);
}

PartitionSchedule compute_interval_schedule(const ContinuousInstance& inst, int T) {
    if (T < 2) fail(errc::horizon_too_short, "horizon " + std::to_string(T));
    PartitionSchedule out;
    out.k_ = inst.k();
    out.T_ = T;
    out.endpoints_.resize(static_cast<size_t>(inst.k()) - 1);
    out.saturation_.assign(static_cast<size_t>(inst.k()) - 1, 0);

    for (int j = 2; j <= inst.k(); ++j) {
        auto& e = out.endpoints_[static_cast<size_t>(j) - 2];
        e.assign(static_cast<size_t>(j), -1.0); // i_t^j = -1 for t <= j
        // one endpoint per agent that may get a first recommendation (t <= T+1)
        for (int t = j; t <= T + 1; ++t) {
            double next;
            try {
                double omega = t == j ? solve_omega_first(inst, j)
                                      : solve_omega_step(inst, j, e[static_cast<size_t>(t) - 1]);
                next = std::min(1.0, omega);
            } catch (const error& err) {
                if (err.code != errc::no_bracket) throw;
                next = 1.0;
            }
            if (next >= 1.0 - kSaturationSnap) next = 1.0;
            if (next < e[static_cast<size_t>(t) - 1] - kMonotoneTol)
                fail(errc::monotonicity_violation,
                     "i_" + std::to_string(t + 1) + "^" + std::to_string(j) + " = " + fmt_double(next) +
                         " below i_" + std::to_string(t) + " = " +
                         fmt_double(e[static_cast<size_t>(t) - 1]));
            e.push_back(next);
            if (next == 1.0) {
                out.saturation_[static_cast<size_t>(j) - 2] = t;
                break;
            }
        }
        // adjacent actions: i_t^{j-1} >= i_{t+1}^j, equality only at 1
        if (j > 2) {
            for (int t = 1; t + 1 <= static_cast<int>(e.size()); ++t) {
                double prev = out.endpoint(j - 1, t);
                double cur = e[static_cast<size_t>(t)];
                if (cur > prev + kMonotoneTol || (cur == prev && cur < 1.0 && cur > -1.0))
                    fail(errc::monotonicity_violation,
                         "i_" + std::to_string(t + 1) + "^" + std::to_string(j) + " = " + fmt_double(cur) +
                             " vs i_" + std::to_string(t) + "^" + std::to_string(j - 1) + " = " +
                             fmt_double(prev));
            }
        }
    }
    return out;
}

PartitionSchedule make_partition_schedule(int k, int T, std::vector<std::vector<double>> endpoints) {
    if (k < 2) fail(errc::degenerate_k, "need at least 2 actions, got " + std::to_string(k));
    if (endpoints.size() != static_cast<size_t>(k) - 1)
        fail(errc::index_out_of_range, "expected one endpoint row per action 2..k");
    PartitionSchedule out;
    out.k_ = k;
    out.T_ = T;
    out.saturation_.assign(static_cast<size_t>(k) - 1, 0);
    for (size_t r = 0; r < endpoints.size(); ++r) {
        const auto& e = endpoints[r];
        if (e.empty() || e.front() != -1.0)
            fail(errc::monotonicity_violation, "endpoint rows must start at -1");
        for (size_t i = 0; i + 1 < e.size(); ++i)
            if (e[i + 1] < e[i])
                fail(errc::monotonicity_violation, "endpoints must be nondecreasing");
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] == 1.0) {
                out.saturation_[r] = static_cast<int>(i); // i_{t+1} = 1 at t = index
                break;
            }
    }
    out.endpoints_ = std::move(endpoints);
    return out;
}

PartitionState initial_partition_state(int k) {
    if (k < 2) fail(errc::degenerate_k, "need at least 2 actions, got " + std::to_string(k));
    PartitionState s;
    s.tail.assign(static_cast<size_t>(k) - 1, 0);
    return s;
}

int partition_recommend(const PartitionSchedule& schedule, const PartitionState& state, int t,
                        double x1) {
    if (t < 1) fail(errc::index_out_of_range, "agent " + std::to_string(t));
    if (t == 1) return 1;
    for (int j = 2; j <= schedule.k(); ++j)
        if (state.at(j) == 1) return j;
    int hit = 0;
    for (int j = 2; j <= schedule.k(); ++j) {
        if (state.at(j) != 0) continue;
        auto [lo, hi] = schedule.interval(j, t);
        if (x1 > lo && x1 <= hi) {
            if (hit != 0)
                fail(errc::overlap_detected, "x1 = " + fmt_double(x1) + " in intervals of actions " +
                                                 std::to_string(hit) + " and " + std::to_string(j));
            hit = j;
        }
    }
    return hit != 0 ? hit : 1;
}

void write_partition_csv(std::ostream& os, const PartitionSchedule& schedule) {
    os << "j,t,i_left,i_right\n";
    for (int j = 2; j <= schedule.k(); ++j) {
        int last = schedule.last_endpoint_index(j);
        for (int t = j + 1; t <= last; ++t)
            os << j << "," << t << "," << fmt_double(schedule.endpoint(j, t - 1)) << ","
               << fmt_double(schedule.endpoint(j, t)) << "\n";
    }
}

} // namespace bicx
