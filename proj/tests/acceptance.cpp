// Acceptance battery: every check prints one PASS/FAIL line; the process
// exits nonzero if any check fails.
#include "bicx/partition.hpp"
#include "bicx/rng.hpp"
#include "bicx/simulate.hpp"
#include "bicx/verify.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cinttypes>
#include <set>
#include <string>
#include <vector>

using namespace bicx;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what) {
    std::printf("%s criterion %2d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    if (!ok) ++failures;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

// ---- 1 + 2: rate recurrence vs the bisection oracle, mass conservation
void criteria_rates_and_mass() {
    CounterRng rng(0xACCE5501);
    const int priors = 500;
    double worst_rate = 0.0;
    double worst_mass = 0.0;
    double t0 = now_seconds();
    for (int i = 0; i < priors; ++i) {
        ValidatedPrior prior = testing::random_prior(rng, 6);
        RateSchedule s = compute_rate_schedule(prior);
        oracle::Result ref = oracle::max_bic_rates(prior, s.max_n() + 2);
        for (int j = 2; j <= prior.k(); ++j) {
            for (int t = 1; t <= s.n(j) + 1; ++t)
                worst_rate = std::max(worst_rate, std::fabs(s.q(t, j) - ref.rate(t, j)));
            double sum = 0.0;
            for (int t = j; t <= s.n(j); ++t) sum += s.q(t, j);
            double rho = prior.p1_zero();
            for (int m = 2; m < j; ++m) rho *= prior.p_minus(m);
            worst_mass = std::max(worst_mass, std::fabs(sum - rho));
            total_exploration_mass(s, j); // asserts the stored mass at 1e-12
        }
    }
    double elapsed = now_seconds() - t0;
    report(1, worst_rate <= 1e-8 && elapsed < 60.0,
           "schedule equals the bisection oracle on " + std::to_string(priors) +
               " random priors (worst |diff| = " + sci(worst_rate) + ", " +
               sci(elapsed) + " s)");
    report(2, worst_mass <= 1e-12,
           "sum_t q_t^j = rho_j on the same priors (worst |diff| = " +
               sci(worst_mass) + ")");
}

// ---- 3: explorer structure on a y grid plus exact marginals
void criterion_explorers() {
    CounterRng rng(0xACCE5503);
    bool ok = true;
    double worst_marginal = 0.0;
    for (int i = 0; i < 100 && ok; ++i) {
        ValidatedPrior prior = testing::random_prior(rng, 6);
        RateSchedule s = compute_rate_schedule(prior);
        for (int g = 1; g <= 10001 && ok; ++g) {
            double y = g / 10001.0;
            std::set<int> seen;
            int prev = 0;
            for (int j = 2; j <= prior.k(); ++j) {
                int f = explorer_index(s, j, y);
                if (f <= prev || !seen.insert(f).second) ok = false;
                prev = f;
            }
        }
        std::vector<double> ys = y_breakpoints(s);
        for (int j = 2; j <= prior.k(); ++j) {
            std::vector<double> mass(static_cast<size_t>(s.n(j)) + 2, 0.0);
            for (size_t c = 0; c + 1 < ys.size(); ++c) {
                double width = ys[c + 1] - ys[c];
                if (width <= 0.0) continue;
                mass[static_cast<size_t>(explorer_index(s, j, 0.5 * (ys[c] + ys[c + 1])))] += width;
            }
            for (int t = j; t <= s.n(j); ++t)
                worst_marginal = std::max(
                    worst_marginal, std::fabs(mass[static_cast<size_t>(t)] - s.q(t, j) / s.rho(j)));
        }
    }
    report(3, ok && worst_marginal <= 1e-12,
           "explorers ordered/distinct on a 10,001-point y grid over 100 priors; exact "
           "y-integration reproduces q/rho (worst = " +
               sci(worst_marginal) + ")");
}

// ---- 4: infeasible states never visited (k <= 4, exhaustive)
void criterion_infeasibility() {
    bool ok = true;
    std::vector<ValidatedPrior> priors = {
        testing::prior_a(), testing::make_prior(4, 0.35, 0.35, 0.3, {0.2, 0.12, 0.07})};
    for (const ValidatedPrior& prior : priors) {
        RateSchedule s = compute_rate_schedule(prior);
        if (!infeasibility_audit(prior, s, s.max_n() + 1).pass) ok = false;
        for (int t = 1; t <= s.max_n() + 1 && ok; ++t) {
            for (const InfoState& st : feasible_states(prior, s, t)) {
                for (int j = 2; j <= st.k(); ++j) {
                    if (st.at(j) == Cell::unknown) continue;
                    if (st.at(1) == Cell::unknown) ok = false;
                    for (int i = 2; i < j; ++i)
                        if (st.at(i) == Cell::unknown) ok = false;
                }
            }
        }
    }
    report(4, ok, "exhaustive enumeration visits no state violating the explored-prefix "
                  "invariant (k = 3 and k = 4)");
}

// ---- 5: BIC audit, tight A-branch constraints, inflation must fail
void criterion_bic() {
    ValidatedPrior prior = testing::prior_a();
    RateSchedule s = compute_rate_schedule(prior);
    AuditReport rep = bic_audit(prior, s, s.max_n() + 1);
    bool ok = rep.pass && rep.worst_slack >= -1e-9;

    double worst_tight = 0.0;
    for (int j = 2; j <= prior.k(); ++j) {
        for (int t = j; t <= s.n(j); ++t) {
            if (std::fabs(s.q(t, j) - s.action(j).a_at(t)) > 1e-14) continue; // B-branch row
            for (const SlackRecord& r : rep.slacks)
                if (r.t == t && r.j == j && r.i == 1)
                    worst_tight = std::max(worst_tight, std::fabs(r.slack));
        }
    }
    ok = ok && worst_tight <= 1e-8;

    int rejected = 0, tested = 0;
    for (int j = 2; j <= prior.k(); ++j) {
        for (int t = j; t <= s.n(j); ++t) {
            RateMatrix psi = to_matrix(s);
            psi.set(t, j, psi.at(t, j) + 0.01);
            ++tested;
            if (!bic_audit(prior, psi, s.max_n() + 1).pass) ++rejected;
        }
    }
    ok = ok && rejected == tested;
    report(5, ok,
           "pi_hat passes the BIC audit (worst slack " + sci(rep.worst_slack) +
               "), A-branch constraints tight to 1e-8, and every +0.01 rate inflation fails (" +
               std::to_string(rejected) + "/" + std::to_string(tested) + ")");
}

// ---- 6: termination by n_k + 1 and minimal exploration time
void criterion_min_time() {
    ValidatedPrior prior = testing::prior_a();
    RateSchedule s = compute_rate_schedule(prior);
    bool terminal_ok = true;
    for (const InfoState& st : feasible_states(prior, s, s.max_n() + 1))
        if (!is_terminal(st)) terminal_ok = false;
    AuditReport rep = min_time_check(prior, s.max_n() + 1, 200, 0xACCE5506);
    report(6, terminal_ok && rep.pass,
           "every trajectory is terminal by n_k + 1 and pi_hat weakly dominates 200 random "
           "feasible rate reductions in Pr[terminal by t], strictly somewhere");
}

// ---- 7: no welfare-improving perturbation at the optimality horizon
void criterion_perturbation() {
    bool ok = true;
    std::string detail;
    double t0 = now_seconds();
    {
        ValidatedPrior prior = testing::prior_a();
        RateSchedule s = compute_rate_schedule(prior);
        int T = static_cast<int>(std::ceil(1.0 / prior.p_plus(3) + s.max_n() - 1.0));
        AuditReport rep = perturbation_optimality_check(prior, T, 0.01);
        ok = ok && rep.pass;
        detail = "PRIOR-A at T = " + std::to_string(T) +
                 " (best improvement " + sci(-rep.worst_slack) + ")";
    }
    {
        ValidatedPrior prior = testing::make_prior(2, 0.4, 0.3, 0.3, {0.2});
        AuditReport rep = perturbation_optimality_check(prior, 7, 0.01);
        ok = ok && rep.pass;
    }
    double elapsed = now_seconds() - t0;
    ok = ok && elapsed < 600.0;
    report(7, ok, "grid search over BIC-feasible perturbations finds no improvement: " + detail +
                      ", " + sci(elapsed) + " s");
}

// ---- 8: limited horizon gating
void criterion_limited() {
    ValidatedPrior prior = testing::make_prior(2, 0.4, 0.3, 0.3, {0.2});
    const int T = 5; // gate passes iff (T - t + 2) * 0.2 >= 1, i.e. t <= 2
    RateSchedule full = compute_rate_schedule(prior);
    RateSchedule lim = compute_rate_schedule(prior, T);
    bool ok = true;
    for (int t = 1; t <= T; ++t) {
        bool gate = (static_cast<double>(T - t) + 2.0) * prior.p_plus(2) >= 1.0;
        if (!gate && lim.q(t, 2) != 0.0) ok = false;
        if (gate && std::fabs(lim.q(t, 2) - full.q(t, 2)) > 1e-14) ok = false;
    }
    double gated = welfare_exact(prior, lim, T);
    double ungated = welfare_exact(prior, full, T);
    ok = ok && gated >= ungated - 1e-12;
    report(8, ok,
           "limited horizon zeroes exactly the gated rates and weakly improves short-T welfare (" +
               sci(gated) + " vs " + sci(ungated) + ")");
}

// ---- 9: continuous case
void criterion_continuous() {
    bool ok = true;
    // closed form i_3^2 = 2 mu_2 + 1 on uniform priors
    for (double p2 : {0.45, 0.4, 0.3, 0.2, 0.1}) {
        ContinuousInstance inst = make_continuous_instance(uniform_prior(), {p2});
        PartitionSchedule s = compute_interval_schedule(inst, 20);
        double mu2 = 2.0 * p2 - 1.0;
        if (std::fabs(s.endpoint(2, 3) - (2.0 * mu2 + 1.0)) > 1e-6) ok = false;
    }
    // the worked instance saturates at i_4^2 = 1
    {
        ContinuousInstance inst = make_continuous_instance(uniform_prior(), {0.4});
        PartitionSchedule s = compute_interval_schedule(inst, 20);
        if (s.endpoint(2, 4) != 1.0 || s.saturation(2) != 3) ok = false;
    }
    // audits on a 3-action instance
    ContinuousInstance inst = make_continuous_instance(uniform_prior(), {0.4, 0.3});
    PartitionSchedule s = compute_interval_schedule(inst, 40);
    AuditReport bic = partition_bic_audit(inst, s, 1e-8, 1e-8);
    ok = ok && bic.pass && bic.worst_slack >= -1e-8;
    // same distribution through the cdf-only quadrature path
    ContinuousInstance quad =
        make_continuous_instance(generic_prior(uniform_prior().cdf), {0.4, 0.3});
    AuditReport qbic = partition_bic_audit(quad, compute_interval_schedule(quad, 40), 1e-8, 1e-8);
    ok = ok && qbic.pass;
    // interval monotonicity to 1e-9
    for (int j = 2; j <= 3; ++j)
        for (int t = 1; t < s.last_endpoint_index(j); ++t)
            if (s.endpoint(j, t + 1) < s.endpoint(j, t) - 1e-9) ok = false;
    for (int t = 1; t + 1 <= s.last_endpoint_index(3); ++t) {
        double i2 = s.endpoint(2, t);
        double i3 = s.endpoint(3, t + 1);
        if (i3 > i2 + 1e-9) ok = false;
        if (i3 == i2 && i2 != 1.0 && i2 != -1.0) ok = false;
    }
    AuditReport order = partition_order_audit(inst, s, 2001);
    ok = ok && order.pass;
    report(9, ok, "uniform closed forms reproduced, exploration/exploitation integrals "
                  "balanced, intervals monotone, ascending order on a 2,001-point grid");
}

// ---- 10: Monte-Carlo consistency at 1e5 replications
void criterion_monte_carlo() {
    const double golden = 1.5188727380191314; // exact enumeration, PRIOR-A, T = 10
    ValidatedPrior prior = testing::prior_a();
    RateSchedule sched = compute_rate_schedule(prior);
    PiHatPolicy policy(prior, sched);
    const long reps = 100000;

    WelfareEstimate est = estimate_welfare(policy, prior, 10, reps, 0xACCE5510);
    bool ok = est.ci_low <= golden && golden <= est.ci_high;

    std::vector<std::vector<long>> explored(
        static_cast<size_t>(prior.k()) + 1,
        std::vector<long>(static_cast<size_t>(sched.max_n()) + 2, 0));
    for (long e = 0; e < reps; ++e) {
        Trajectory tr =
            run_episode(policy, prior, sched.max_n() + 1, 0xACCE5510, static_cast<std::uint64_t>(e));
        for (const auto& rec : tr.records)
            if (rec.kind == RecKind::explore)
                ++explored[static_cast<size_t>(rec.sigma)][static_cast<size_t>(rec.t)];
    }
    double worst_sigma = 0.0;
    for (int j = 2; j <= prior.k(); ++j) {
        for (int t = j; t <= sched.n(j); ++t) {
            double q = sched.q(t, j);
            double freq =
                static_cast<double>(explored[static_cast<size_t>(j)][static_cast<size_t>(t)]) /
                static_cast<double>(reps);
            double se = std::sqrt(q * (1.0 - q) / static_cast<double>(reps));
            worst_sigma = std::max(worst_sigma, std::fabs(freq - q) / se);
        }
    }
    ok = ok && worst_sigma <= 3.0;
    report(10, ok,
           "welfare CI covers the exact value at 1e5 replications and explorer frequencies "
           "match q_t^j (worst " +
               sci(worst_sigma) + " SE)");
}

} // namespace

int main() {
    criteria_rates_and_mass();
    criterion_explorers();
    criterion_infeasibility();
    criterion_bic();
    criterion_min_time();
    criterion_perturbation();
    criterion_limited();
    criterion_continuous();
    criterion_monte_carlo();
    if (failures != 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
