#pragma once

#include "bicx/engine.hpp"
#include "bicx/partition.hpp"
#include "bicx/prior.hpp"
#include "bicx/rates.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace bicx {

// ---- exact enumeration -------------------------------------------------

// One realization vector with its prior probability.
struct Outcome {
    std::vector<int> x; // x[j] for j = 1..k; x[0] unused
    double prob = 0.0;
};

std::vector<Outcome> enumerate_outcomes(const ValidatedPrior& prior);

// Called once per (time step, elementary event): w is the event probability,
// state the planner state before agent t, rec the recommendation issued.
using StepVisitor = std::function<void(int t, double w, const InfoState& state,
                                       const Recommendation& rec, const std::vector<int>& x)>;

// Exact walk of the coordinated policy over realization vectors and y cells
// (y enters piecewise-constantly; cells integrate it exactly).
void enumerate_coordinated(const ValidatedPrior& prior, const RateSchedule& schedule, int T,
                           const StepVisitor& visit);

// Exact walk of a rate policy: the fixed exploitation behavior plus, in the
// exploration state of action j at time t, an independent coin with
// Pr[explore] = psi_t^j / Pr[exploration state].
void enumerate_rate_policy(const ValidatedPrior& prior, const RateMatrix& psi, int T,
                           const StepVisitor& visit);

// Alternative policies differ from the coordinated one only in their
// exploration rates.
using AlternativePolicy = RateMatrix;

// ---- audit reports -----------------------------------------------------

struct SlackRecord {
    int t = 0;
    int j = 0; // recommended action
    int i = 0; // alternative action (0 when not applicable)
    double slack = 0.0;
};

struct AuditReport {
    std::string check;
    std::string prior_id;
    std::vector<SlackRecord> slacks;
    double worst_slack = 0.0;
    bool pass = false;
    std::string counterexample; // empty when passing

    std::string json() const; // {check, prior_id, worst_slack, pass, counterexample?}
};

// ---- discrete-case audits ----------------------------------------------

// E[u_t(j) - u_t(i) | sigma_t = j] >= -tol for every agent t <= T, every
// recommendation value j with positive probability and every alternative i.
AuditReport bic_audit(const ValidatedPrior& prior, const RateSchedule& schedule, int T,
                      double tol = 1e-9);
AuditReport bic_audit(const ValidatedPrior& prior, const RateMatrix& psi, int T,
                      double tol = 1e-9);

// Re-solves the per-(t, j) rate maximization under the BIC constraint by
// bisection, with state probabilities taken from enumeration rather than
// the A/B recurrence, and checks the schedule against it (tolerance 1e-8).
AuditReport maximality_audit(const RateSchedule& schedule, const ValidatedPrior& prior);

// Every state visited under the coordinated policy satisfies the
// explored-prefix invariant.
AuditReport infeasibility_audit(const ValidatedPrior& prior, const RateSchedule& schedule, int T);

// ---- dominance and optimality ------------------------------------------

// reveal[t-1][j-1] = Pr[action j's reward known before agent t], t = 1..T+1.
using RevelationMatrix = std::vector<std::vector<double>>;

RevelationMatrix revelation_probs(const ValidatedPrior& prior, const RateSchedule& schedule, int T);
RevelationMatrix revelation_probs(const ValidatedPrior& prior, const RateMatrix& psi, int T);

enum class Dominance { a_dominates, b_dominates, equal, incomparable };

Dominance stochastic_dominance_compare(const RevelationMatrix& a, const RevelationMatrix& b,
                                       double tol = 1e-12);

// Convenience form for two rate policies sharing the exploitation rows.
Dominance stochastic_dominance_compare(const ValidatedPrior& prior, const RateMatrix& a,
                                       const RateMatrix& b, int T, double tol = 1e-12);

// Exact expected social welfare over T agents.
double welfare_exact(const ValidatedPrior& prior, const RateSchedule& schedule, int T);
double welfare_exact(const ValidatedPrior& prior, const RateMatrix& psi, int T);

// Optimal planner with unrestricted information flow (no BIC constraint);
// dynamic program over information states. Upper-bounds any BIC policy.
class FullInfoPlanner {
public:
    FullInfoPlanner(const ValidatedPrior& prior, int T);
    double value() const;                         // optimal expected welfare
    int best_action(const InfoState& state) const; // needs state.t <= T
private:
    double solve(const InfoState& state, int remaining) const;
    ValidatedPrior prior_;
    int T_;
    mutable std::map<std::pair<int, int>, double> memo_;
};

// Largest-t-first repair pass making psi BIC-feasible: each rate is clipped
// to its A- and B-style caps computed from the (already clipped) prefixes.
RateMatrix clip_to_feasible(const ValidatedPrior& prior, RateMatrix psi, int max_t);

// Random rate-reduced BIC variant of the schedule (for dominance sampling).
RateMatrix sample_reduced_rates(const ValidatedPrior& prior, const RateSchedule& schedule,
                                std::uint64_t seed);

// Exploration-time check: the coordinated policy reaches a terminal state
// weakly earlier than `samples` random feasible rate-reduced variants,
// strictly somewhere.
AuditReport min_time_check(const ValidatedPrior& prior, int T, int samples = 200,
                           std::uint64_t seed = 1);

// Grid search over BIC-feasible rate perturbations (single-coordinate sweeps
// plus greedy multi-coordinate descent) around the maximal schedule; passes
// when no perturbation improves exact welfare beyond 1e-9. Requires
// T >= ceil(1/p_k^1 + n_k - 1) (errc::horizon_too_short).
AuditReport perturbation_optimality_check(const ValidatedPrior& prior, int T,
                                          double grid_step = 0.01);

// ---- continuous-case audits --------------------------------------------

// Exploration/exploitation balance integrals for every interval: slack >= -tol
// everywhere, and zero within tight_tol at interior (unclamped) endpoints.
AuditReport partition_bic_audit(const ContinuousInstance& instance,
                                const PartitionSchedule& schedule, double tol = 1e-8,
                                double tight_tol = 1e-8);

// Sweeps an x1 grid and all tail realizations: actions must be first
// recommended in ascending order, and per-agent intervals must be disjoint.
AuditReport partition_order_audit(const ContinuousInstance& instance,
                                  const PartitionSchedule& schedule, int grid_points = 2001);

// Reveal-time comparison on an x1 grid against a valid partition policy with
// pointwise smaller intervals: the computed schedule is weakly earlier
// everywhere and strictly earlier somewhere.
AuditReport partition_dominance_check(const ContinuousInstance& instance,
                                      const PartitionSchedule& schedule,
                                      const PartitionSchedule& shrunk, int grid_points = 2001);

} // namespace bicx
