#include "bicx/verify.hpp"
#include "bicx/detail/format.hpp"
#include "bicx/error.hpp"
#include "bicx/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <string>

namespace bicx {

namespace {

using detail::fmt_double;

constexpr double kProbFloor = 1e-14;

} // namespace

std::vector<Outcome> enumerate_outcomes(const ValidatedPrior& prior) {
    const int k = prior.k();
    std::vector<Outcome> out;
    out.reserve(3u << (k - 1));
    const int tail_combos = 1 << (k - 1);
    const double p1[3] = {prior.p1_plus(), prior.p1_zero(), prior.p1_minus()};
    const int v1[3] = {+1, 0, -1};
    for (int a = 0; a < 3; ++a) {
        for (int bits = 0; bits < tail_combos; ++bits) {
            Outcome o;
            o.x.assign(static_cast<size_t>(k) + 1, 0);
            o.x[1] = v1[a];
            o.prob = p1[a];
            for (int j = 2; j <= k; ++j) {
                bool plus = (bits >> (j - 2)) & 1;
                o.x[static_cast<size_t>(j)] = plus ? 1 : -1;
                o.prob *= plus ? prior.p_plus(j) : prior.p_minus(j);
            }
            out.push_back(std::move(o));
        }
    }
    return out;
}

void enumerate_coordinated(const ValidatedPrior& prior, const RateSchedule& schedule, int T,
                           const StepVisitor& visit) {
    std::vector<Outcome> outcomes = enumerate_outcomes(prior);
    std::vector<double> ys = y_breakpoints(schedule);
    for (const Outcome& o : outcomes) {
        for (size_t c = 0; c + 1 < ys.size(); ++c) {
            double width = ys[c + 1] - ys[c];
            if (width <= 0.0) continue;
            double w = o.prob * width;
            ExplorerAssignment asg = assign_explorers(schedule, 0.5 * (ys[c] + ys[c + 1]));
            InfoState s = initial_state(prior.k());
            for (int t = 1; t <= T; ++t) {
                Recommendation r = recommend(s, schedule, asg);
                visit(t, w, s, r, o.x);
                s = transition(s, r.action, o.x[static_cast<size_t>(r.action)]);
            }
        }
    }
}

namespace {

// Deterministic part of the recommendation table; exploration states come
// back with kind = explore and the action still to be drawn.
Recommendation classify(const InfoState& s) {
    if (s.t == 1) return {1, RecKind::exploit_unknown};
    for (int j = 1; j <= s.k(); ++j)
        if (s.at(j) == Cell::plus_one) return {j, RecKind::terminal};
    int least = 0;
    for (int j = 1; j <= s.k(); ++j)
        if (s.at(j) == Cell::unknown) {
            least = j;
            break;
        }
    if (least == 0) {
        int best = 1;
        for (int j = 2; j <= s.k(); ++j)
            if (cell_reward(s.at(j)) > cell_reward(s.at(best))) best = j;
        return {best, RecKind::terminal};
    }
    if (s.at(1) == Cell::minus_one) return {least, RecKind::exploit_unknown};
    return {least, RecKind::explore};
}

InfoState state_from(const std::vector<int>& x, int explored_tail, int t, int k) {
    InfoState s = initial_state(k);
    s.t = t;
    if (t >= 2) {
        s.z[0] = x[1] == 1 ? Cell::plus_one : (x[1] == 0 ? Cell::zero : Cell::minus_one);
        for (int j = 2; j <= explored_tail + 1; ++j)
            s.z[static_cast<size_t>(j) - 1] = x[static_cast<size_t>(j)] == 1 ? Cell::plus_one
                                                                             : Cell::minus_one;
    }
    return s;
}

} // namespace

void enumerate_rate_policy(const ValidatedPrior& prior, const RateMatrix& psi, int T,
                           const StepVisitor& visit) {
    const int k = prior.k();
    std::vector<Outcome> outcomes = enumerate_outcomes(prior);

    // dist[o][m]: probability that exactly m tail actions are explored
    std::vector<std::vector<double>> dist(outcomes.size(),
                                          std::vector<double>(static_cast<size_t>(k), 0.0));
    for (size_t o = 0; o < outcomes.size(); ++o) {
        const Outcome& oc = outcomes[o];
        visit(1, oc.prob, initial_state(k), {1, RecKind::exploit_unknown}, oc.x);
        dist[o][0] = 1.0;
    }

    std::vector<std::vector<double>> next(dist.size());
    for (int t = 2; t <= T; ++t) {
        // probability mass of each action's exploration state at this step
        std::vector<double> gamma_prob(static_cast<size_t>(k) + 1, 0.0);
        for (size_t o = 0; o < outcomes.size(); ++o) {
            const Outcome& oc = outcomes[o];
            for (int m = 0; m < k; ++m) {
                double p = dist[o][static_cast<size_t>(m)];
                if (p <= 0.0) continue;
                InfoState s = state_from(oc.x, m, t, k);
                Recommendation r = classify(s);
                if (r.kind == RecKind::explore)
                    gamma_prob[static_cast<size_t>(r.action)] += oc.prob * p;
            }
        }
        std::vector<double> gamma(static_cast<size_t>(k) + 1, 0.0);
        for (int j = 2; j <= k; ++j) {
            double cap = gamma_prob[static_cast<size_t>(j)];
            if (cap > kProbFloor)
                gamma[static_cast<size_t>(j)] = std::clamp(psi.at(t, j) / cap, 0.0, 1.0);
        }

        for (size_t o = 0; o < outcomes.size(); ++o) {
            const Outcome& oc = outcomes[o];
            next[o].assign(static_cast<size_t>(k), 0.0);
            for (int m = 0; m < k; ++m) {
                double p = dist[o][static_cast<size_t>(m)];
                if (p <= 0.0) continue;
                InfoState s = state_from(oc.x, m, t, k);
                Recommendation r = classify(s);
                if (r.kind == RecKind::explore) {
                    double g = gamma[static_cast<size_t>(r.action)];
                    if (g > 0.0) {
                        visit(t, oc.prob * p * g, s, {r.action, RecKind::explore}, oc.x);
                        next[o][static_cast<size_t>(m) + 1] += p * g;
                    }
                    if (g < 1.0) {
                        visit(t, oc.prob * p * (1.0 - g), s, {1, RecKind::exploit_known}, oc.x);
                        next[o][static_cast<size_t>(m)] += p * (1.0 - g);
                    }
                } else {
                    visit(t, oc.prob * p, s, r, oc.x);
                    int nm = r.kind == RecKind::exploit_unknown && r.action >= 2 ? m + 1 : m;
                    next[o][static_cast<size_t>(nm)] += p;
                }
            }
        }
        dist.swap(next);
    }
}

std::string AuditReport::json() const {
    nlohmann::ordered_json j;
    j["check"] = check;
    j["prior_id"] = prior_id;
    j["worst_slack"] = worst_slack;
    j["pass"] = pass;
    if (!counterexample.empty()) j["counterexample"] = counterexample;
    return j.dump();
}

namespace {

struct BicTables {
    // prob[t-1][j-1] = Pr[sigma_t = j]; num[t-1][j-1][i-1] = E-numerators
    std::vector<std::vector<double>> prob;
    std::vector<std::vector<std::vector<double>>> num;
};

BicTables bic_tables(const ValidatedPrior& prior, int T,
                     const std::function<void(const StepVisitor&)>& runner) {
    const size_t k = static_cast<size_t>(prior.k());
    BicTables tb;
    tb.prob.assign(static_cast<size_t>(T), std::vector<double>(k, 0.0));
    tb.num.assign(static_cast<size_t>(T),
                  std::vector<std::vector<double>>(k, std::vector<double>(k, 0.0)));
    runner([&](int t, double w, const InfoState&, const Recommendation& r,
               const std::vector<int>& x) {
        auto& prow = tb.prob[static_cast<size_t>(t) - 1];
        auto& nrow = tb.num[static_cast<size_t>(t) - 1][static_cast<size_t>(r.action) - 1];
        prow[static_cast<size_t>(r.action) - 1] += w;
        for (size_t i = 1; i <= k; ++i)
            nrow[i - 1] += w * (x[static_cast<size_t>(r.action)] - x[i]);
    });
    return tb;
}

AuditReport bic_report(const ValidatedPrior& prior, const BicTables& tb, int T, double tol) {
    AuditReport rep;
    rep.check = "bic";
    rep.prior_id = prior.id();
    rep.worst_slack = std::numeric_limits<double>::infinity();
    const int k = prior.k();
    for (int t = 1; t <= T; ++t) {
        for (int j = 1; j <= k; ++j) {
            double pj = tb.prob[static_cast<size_t>(t) - 1][static_cast<size_t>(j) - 1];
            if (pj <= kProbFloor) continue;
            for (int i = 1; i <= k; ++i) {
                if (i == j) continue;
                double slack = tb.num[static_cast<size_t>(t) - 1][static_cast<size_t>(j) - 1]
                                     [static_cast<size_t>(i) - 1] /
                               pj;
                rep.slacks.push_back({t, j, i, slack});
                if (slack < rep.worst_slack) {
                    rep.worst_slack = slack;
                    if (slack < -tol)
                        rep.counterexample = "t=" + std::to_string(t) + " sigma=" +
                                             std::to_string(j) + " prefers action " +
                                             std::to_string(i) + " (slack " + fmt_double(slack) + ")";
                }
            }
        }
    }
    rep.pass = rep.worst_slack >= -tol;
    if (rep.pass) rep.counterexample.clear();
    return rep;
}

} // namespace

AuditReport bic_audit(const ValidatedPrior& prior, const RateSchedule& schedule, int T,
                      double tol) {
    if (prior.k() > 5)
        fail(errc::scale_exceeded, "bic_audit enumerates k <= 5, got " + std::to_string(prior.k()));
    if (T > schedule.max_n() + 2)
        fail(errc::scale_exceeded, "bic_audit covers T <= n_k + 2 = " +
                                       std::to_string(schedule.max_n() + 2) + ", got " +
                                       std::to_string(T));
    BicTables tb = bic_tables(prior, T, [&](const StepVisitor& v) {
        enumerate_coordinated(prior, schedule, T, v);
    });
    return bic_report(prior, tb, T, tol);
}

AuditReport bic_audit(const ValidatedPrior& prior, const RateMatrix& psi, int T, double tol) {
    if (prior.k() > 5)
        fail(errc::scale_exceeded, "bic_audit enumerates k <= 5, got " + std::to_string(prior.k()));
    if (T > 10000) fail(errc::scale_exceeded, "T = " + std::to_string(T));

    // exploration-state mass per (t, j): the second constraint of the
    // maximization caps psi_t^j by it
    std::vector<std::vector<double>> state_mass(
        static_cast<size_t>(T), std::vector<double>(static_cast<size_t>(prior.k()) + 1, 0.0));
    BicTables tb = bic_tables(prior, T, [&](const StepVisitor& v) {
        enumerate_rate_policy(prior, psi, T,
                              [&](int t, double w, const InfoState& s, const Recommendation& r,
                                  const std::vector<int>& x) {
                                  Recommendation c = classify(s);
                                  if (c.kind == RecKind::explore)
                                      state_mass[static_cast<size_t>(t) - 1]
                                                [static_cast<size_t>(c.action)] += w;
                                  v(t, w, s, r, x);
                              });
    });
    AuditReport rep = bic_report(prior, tb, T, tol);
    for (int t = 1; t <= T; ++t) {
        for (int j = 2; j <= prior.k(); ++j) {
            double rate = psi.at(t, j);
            if (rate <= 0.0) continue;
            double slack = state_mass[static_cast<size_t>(t) - 1][static_cast<size_t>(j)] - rate;
            rep.slacks.push_back({t, j, 0, slack});
            if (slack < -tol) {
                rep.pass = false;
                if (rep.worst_slack > slack) {
                    rep.worst_slack = slack;
                    rep.counterexample = "psi_" + std::to_string(t) + "^" + std::to_string(j) +
                                         " exceeds the exploration-state probability by " +
                                         fmt_double(-slack);
                }
            }
        }
    }
    return rep;
}

AuditReport maximality_audit(const RateSchedule& schedule, const ValidatedPrior& prior) {
    if (schedule.limited())
        fail(errc::scale_exceeded, "maximality is defined for unlimited-horizon schedules");
    const int k = prior.k();
    const int T = schedule.max_n() + 1;

    std::vector<std::vector<double>> cap(static_cast<size_t>(T),
                                         std::vector<double>(static_cast<size_t>(k) + 1, 0.0));
    std::vector<std::vector<double>> gain = cap;
    enumerate_coordinated(prior, schedule, T,
                          [&](int t, double w, const InfoState& s, const Recommendation&,
                              const std::vector<int>& x) {
                              Recommendation c = classify(s);
                              if (c.kind == RecKind::explore)
                                  cap[static_cast<size_t>(t) - 1][static_cast<size_t>(c.action)] += w;
                              else if (c.action >= 2)
                                  gain[static_cast<size_t>(t) - 1][static_cast<size_t>(c.action)] +=
                                      w * (x[static_cast<size_t>(c.action)] - x[1]);
                          });

    AuditReport rep;
    rep.check = "maximality";
    rep.prior_id = prior.id();
    rep.worst_slack = 0.0;
    for (int j = 2; j <= k; ++j) {
        for (int t = 1; t <= std::min(T, schedule.n(j) + 1); ++t) {
            double c = cap[static_cast<size_t>(t) - 1][static_cast<size_t>(j)];
            double g = gain[static_cast<size_t>(t) - 1][static_cast<size_t>(j)];
            double mu_j = prior.mean(j);
            double oracle = 0.0;
            if (c > kProbFloor) {
                if (g + mu_j * c >= 0.0) {
                    oracle = c;
                } else {
                    // bisection on the BIC constraint g + mu_j * q = 0
                    double lo = 0.0, hi = c;
                    for (int it = 0; it < 100; ++it) {
                        double mid = 0.5 * (lo + hi);
                        (g + mu_j * mid >= 0.0 ? lo : hi) = mid;
                    }
                    oracle = 0.5 * (lo + hi);
                }
            }
            double diff = std::fabs(schedule.q(t, j) - oracle);
            rep.slacks.push_back({t, j, 0, -diff});
            if (-diff < rep.worst_slack) {
                rep.worst_slack = -diff;
                rep.counterexample = "q_" + std::to_string(t) + "^" + std::to_string(j) + " = " +
                                     fmt_double(schedule.q(t, j)) + " vs oracle " + fmt_double(oracle);
            }
        }
    }
    rep.pass = rep.worst_slack >= -1e-8;
    if (rep.pass) rep.counterexample.clear();
    return rep;
}

AuditReport infeasibility_audit(const ValidatedPrior& prior, const RateSchedule& schedule, int T) {
    AuditReport rep;
    rep.check = "infeasibility";
    rep.prior_id = prior.id();
    rep.worst_slack = 0.0;
    rep.pass = true;
    std::map<int, bool> visited;
    try {
        enumerate_coordinated(prior, schedule, T,
                              [&](int, double, const InfoState& s, const Recommendation&,
                                  const std::vector<int>&) {
                                  check_feasible(s);
                                  visited[s.code()] = true;
                              });
    } catch (const error& e) {
        if (e.code != errc::infeasible_state) throw;
        rep.pass = false;
        rep.worst_slack = -1.0;
        rep.counterexample = e.what();
    }
    return rep;
}

RevelationMatrix revelation_probs(const ValidatedPrior& prior, const RateSchedule& schedule,
                                  int T) {
    RevelationMatrix m(static_cast<size_t>(T) + 1,
                       std::vector<double>(static_cast<size_t>(prior.k()), 0.0));
    enumerate_coordinated(prior, schedule, T + 1,
                          [&](int t, double w, const InfoState& s, const Recommendation&,
                              const std::vector<int>&) {
                              for (int j = 1; j <= s.k(); ++j)
                                  if (s.at(j) != Cell::unknown)
                                      m[static_cast<size_t>(t) - 1][static_cast<size_t>(j) - 1] += w;
                          });
    return m;
}

RevelationMatrix revelation_probs(const ValidatedPrior& prior, const RateMatrix& psi, int T) {
    RevelationMatrix m(static_cast<size_t>(T) + 1,
                       std::vector<double>(static_cast<size_t>(prior.k()), 0.0));
    enumerate_rate_policy(prior, psi, T + 1,
                          [&](int t, double w, const InfoState& s, const Recommendation&,
                              const std::vector<int>&) {
                              for (int j = 1; j <= s.k(); ++j)
                                  if (s.at(j) != Cell::unknown)
                                      m[static_cast<size_t>(t) - 1][static_cast<size_t>(j) - 1] += w;
                          });
    return m;
}

Dominance stochastic_dominance_compare(const RevelationMatrix& a, const RevelationMatrix& b,
                                       double tol) {
    bool a_ge = true, b_ge = true, a_strict = false, b_strict = false;
    for (size_t t = 0; t < a.size() && t < b.size(); ++t) {
        for (size_t j = 0; j < a[t].size() && j < b[t].size(); ++j) {
            double d = a[t][j] - b[t][j];
            if (d > tol) {
                b_ge = false;
                a_strict = true;
            } else if (d < -tol) {
                a_ge = false;
                b_strict = true;
            }
        }
    }
    if (a_ge && b_ge) return Dominance::equal;
    if (a_ge && a_strict) return Dominance::a_dominates;
    if (b_ge && b_strict) return Dominance::b_dominates;
    return Dominance::incomparable;
}

Dominance stochastic_dominance_compare(const ValidatedPrior& prior, const RateMatrix& a,
                                       const RateMatrix& b, int T, double tol) {
    return stochastic_dominance_compare(revelation_probs(prior, a, T),
                                        revelation_probs(prior, b, T), tol);
}

double welfare_exact(const ValidatedPrior& prior, const RateSchedule& schedule, int T) {
    if (prior.k() > 6) fail(errc::scale_exceeded, "k = " + std::to_string(prior.k()));
    double sw = 0.0;
    enumerate_coordinated(prior, schedule, T,
                          [&](int, double w, const InfoState&, const Recommendation& r,
                              const std::vector<int>& x) {
                              sw += w * x[static_cast<size_t>(r.action)];
                          });
    return sw;
}

double welfare_exact(const ValidatedPrior& prior, const RateMatrix& psi, int T) {
    if (prior.k() > 6) fail(errc::scale_exceeded, "k = " + std::to_string(prior.k()));
    double sw = 0.0;
    enumerate_rate_policy(prior, psi, T,
                          [&](int, double w, const InfoState&, const Recommendation& r,
                              const std::vector<int>& x) {
                              sw += w * x[static_cast<size_t>(r.action)];
                          });
    return sw;
}

FullInfoPlanner::FullInfoPlanner(const ValidatedPrior& prior, int T) : prior_(prior), T_(T) {
    if (prior.k() > 6) fail(errc::scale_exceeded, "k = " + std::to_string(prior.k()));
}

double FullInfoPlanner::value() const { return solve(initial_state(prior_.k()), T_); }

double FullInfoPlanner::solve(const InfoState& state, int remaining) const {
    if (remaining <= 0) return 0.0;
    auto key = std::make_pair(state.code(), remaining);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    double best = -std::numeric_limits<double>::infinity();
    int best_known = 0;
    for (int j = 1; j <= state.k(); ++j)
        if (state.at(j) != Cell::unknown &&
            (best_known == 0 || cell_reward(state.at(j)) > cell_reward(state.at(best_known))))
            best_known = j;
    if (best_known != 0)
        best = static_cast<double>(cell_reward(state.at(best_known))) * remaining;

    for (int j = 1; j <= state.k(); ++j) {
        if (state.at(j) != Cell::unknown) continue;
        double v;
        if (j == 1) {
            v = prior_.p1_plus() * (1.0 + solve(transition(state, 1, +1), remaining - 1)) +
                prior_.p1_zero() * (0.0 + solve(transition(state, 1, 0), remaining - 1)) +
                prior_.p1_minus() * (-1.0 + solve(transition(state, 1, -1), remaining - 1));
        } else {
            v = prior_.p_plus(j) * (1.0 + solve(transition(state, j, +1), remaining - 1)) +
                prior_.p_minus(j) * (-1.0 + solve(transition(state, j, -1), remaining - 1));
        }
        best = std::max(best, v);
    }
    memo_[key] = best;
    return best;
}

int FullInfoPlanner::best_action(const InfoState& state) const {
    int remaining = T_ - state.t + 1;
    if (remaining <= 0) fail(errc::index_out_of_range, "agent past horizon");
    int best_known = 0;
    for (int j = 1; j <= state.k(); ++j)
        if (state.at(j) != Cell::unknown &&
            (best_known == 0 || cell_reward(state.at(j)) > cell_reward(state.at(best_known))))
            best_known = j;
    int best = best_known;
    double best_v = best_known != 0
                        ? static_cast<double>(cell_reward(state.at(best_known))) * remaining
                        : -std::numeric_limits<double>::infinity();
    for (int j = 1; j <= state.k(); ++j) {
        if (state.at(j) != Cell::unknown) continue;
        double v;
        if (j == 1) {
            v = prior_.p1_plus() * (1.0 + solve(transition(state, 1, +1), remaining - 1)) +
                prior_.p1_zero() * (0.0 + solve(transition(state, 1, 0), remaining - 1)) +
                prior_.p1_minus() * (-1.0 + solve(transition(state, 1, -1), remaining - 1));
        } else {
            v = prior_.p_plus(j) * (1.0 + solve(transition(state, j, +1), remaining - 1)) +
                prior_.p_minus(j) * (-1.0 + solve(transition(state, j, -1), remaining - 1));
        }
        if (v > best_v + 1e-15) {
            best_v = v;
            best = j;
        }
    }
    return best;
}

RateMatrix clip_to_feasible(const ValidatedPrior& prior, RateMatrix psi, int max_t) {
    RateMatrix out;
    out.k = prior.k();
    out.q.resize(static_cast<size_t>(prior.k()) - 1);
    std::vector<double> prev_prefix(static_cast<size_t>(max_t) + 2, 0.0);
    for (int j = 2; j <= prior.k(); ++j) {
        std::vector<double> own_prefix(static_cast<size_t>(max_t) + 2, 0.0);
        double acc = 0.0;
        for (int t = 1; t <= max_t; ++t) {
            own_prefix[static_cast<size_t>(t)] = acc;
            if (t < j) continue;
            double cap_a = a_coeff(prior, acc, j, t);
            double cap_b = b_coeff(prior, prev_prefix[static_cast<size_t>(t)], acc, j, t);
            double v = std::max(0.0, std::min({psi.at(t, j), cap_a, cap_b}));
            if (v > 0.0) out.set(t, j, v);
            acc += v;
        }
        own_prefix[static_cast<size_t>(max_t) + 1] = acc;
        prev_prefix = own_prefix;
    }
    return out;
}

RateMatrix sample_reduced_rates(const ValidatedPrior& prior, const RateSchedule& schedule,
                                std::uint64_t seed) {
    CounterRng rng(seed, 0x7261746573ull);
    RateMatrix m = to_matrix(schedule);
    for (int j = 2; j <= schedule.k(); ++j)
        for (int t = j; t <= schedule.n(j); ++t)
            m.set(t, j, m.at(t, j) * rng.next_range(0.3, 1.0));
    // guarantee a genuine reduction somewhere
    m.set(2, 2, schedule.q(2, 2) * rng.next_range(0.3, 0.7));
    return clip_to_feasible(prior, m, schedule.max_n() + 1);
}

namespace {

std::vector<double> terminal_curve_coordinated(const ValidatedPrior& prior,
                                               const RateSchedule& schedule, int T) {
    std::vector<double> c(static_cast<size_t>(T) + 1, 0.0);
    enumerate_coordinated(prior, schedule, T + 1,
                          [&](int t, double w, const InfoState& s, const Recommendation&,
                              const std::vector<int>&) {
                              if (is_terminal(s)) c[static_cast<size_t>(t) - 1] += w;
                          });
    return c;
}

std::vector<double> terminal_curve_rates(const ValidatedPrior& prior, const RateMatrix& psi,
                                         int T) {
    std::vector<double> c(static_cast<size_t>(T) + 1, 0.0);
    enumerate_rate_policy(prior, psi, T + 1,
                          [&](int t, double w, const InfoState& s, const Recommendation&,
                              const std::vector<int>&) {
                              if (is_terminal(s)) c[static_cast<size_t>(t) - 1] += w;
                          });
    return c;
}

} // namespace

AuditReport min_time_check(const ValidatedPrior& prior, int T, int samples, std::uint64_t seed) {
    RateSchedule schedule = compute_rate_schedule(prior);
    if (T < schedule.max_n() + 1)
        fail(errc::horizon_too_short,
             "need T >= n_k + 1 = " + std::to_string(schedule.max_n() + 1));

    AuditReport rep;
    rep.check = "min_time";
    rep.prior_id = prior.id();
    rep.worst_slack = std::numeric_limits<double>::infinity();
    rep.pass = true;

    std::vector<double> base = terminal_curve_coordinated(prior, schedule, T);
    for (int s = 0; s < samples; ++s) {
        RateMatrix psi = sample_reduced_rates(prior, schedule, seed + static_cast<std::uint64_t>(s));
        AuditReport bic = bic_audit(prior, psi, std::min(T, schedule.max_n() + 2));
        if (!bic.pass) {
            rep.pass = false;
            rep.counterexample = "sampled variant " + std::to_string(s) + " is not BIC: " +
                                 bic.counterexample;
            break;
        }
        std::vector<double> cur = terminal_curve_rates(prior, psi, T);
        bool strict = false;
        for (size_t t = 0; t < base.size(); ++t) {
            double d = base[t] - cur[t];
            rep.worst_slack = std::min(rep.worst_slack, d);
            if (d < -1e-12) {
                rep.pass = false;
                rep.counterexample = "variant " + std::to_string(s) + " terminal earlier at t=" +
                                     std::to_string(t + 1) + " by " + fmt_double(-d);
            }
            if (d > 1e-12) strict = true;
        }
        if (!strict) {
            rep.pass = false;
            rep.counterexample = "variant " + std::to_string(s) + " never strictly later";
        }
        if (!rep.pass) break;
    }
    return rep;
}

namespace {

// Maximal-rate recurrence with selected coordinates forced below their caps.
RateMatrix rates_with_forcing(const ValidatedPrior& prior,
                              const std::map<std::pair<int, int>, double>& forced, int T) {
    RateMatrix out;
    out.k = prior.k();
    out.q.resize(static_cast<size_t>(prior.k()) - 1);
    std::vector<double> prev_prefix(static_cast<size_t>(T) + 2, 0.0);
    for (int j = 2; j <= prior.k(); ++j) {
        std::vector<double> own_prefix(static_cast<size_t>(T) + 2, 0.0);
        double acc = 0.0;
        for (int t = 1; t <= T; ++t) {
            own_prefix[static_cast<size_t>(t)] = acc;
            if (t < j) continue;
            double v = std::min(a_coeff(prior, acc, j, t),
                                b_coeff(prior, prev_prefix[static_cast<size_t>(t)], acc, j, t));
            auto it = forced.find({t, j});
            if (it != forced.end()) v = std::min(v, it->second);
            v = std::max(0.0, v);
            if (v > 0.0) out.set(t, j, v);
            acc += v;
        }
        own_prefix[static_cast<size_t>(T) + 1] = acc;
        prev_prefix = own_prefix;
    }
    return out;
}

} // namespace

AuditReport perturbation_optimality_check(const ValidatedPrior& prior, int T, double grid_step) {
    if (prior.k() > 3) fail(errc::scale_exceeded, "k = " + std::to_string(prior.k()));
    RateSchedule schedule = compute_rate_schedule(prior);
    int bound = static_cast<int>(
        std::ceil(1.0 / prior.p_plus(prior.k()) + schedule.max_n() - 1.0 - 1e-12));
    if (T < bound)
        fail(errc::horizon_too_short,
             "optimality holds for T >= " + std::to_string(bound) + ", got " + std::to_string(T));

    AuditReport rep;
    rep.check = "perturbation_optimality";
    rep.prior_id = prior.id();

    const double w0 = welfare_exact(prior, rates_with_forcing(prior, {}, T), T);
    double best_improvement = -std::numeric_limits<double>::infinity();

    // single-coordinate grid sweeps
    for (int j = 2; j <= prior.k(); ++j) {
        for (int t = j; t <= schedule.n(j); ++t) {
            double q = schedule.q(t, j);
            for (int d = 1;; ++d) {
                double v = q - d * grid_step;
                bool last = v <= 0.0;
                if (last) v = 0.0;
                double w = welfare_exact(prior, rates_with_forcing(prior, {{{t, j}, v}}, T), T);
                double improvement = w - w0;
                rep.slacks.push_back({t, j, 0, -improvement});
                best_improvement = std::max(best_improvement, improvement);
                if (last) break;
            }
        }
    }

    // greedy multi-coordinate descent from the maximal schedule
    std::map<std::pair<int, int>, double> current;
    double w_cur = w0;
    for (int round = 0; round < 32; ++round) {
        double best_w = -std::numeric_limits<double>::infinity();
        std::pair<int, int> best_coord{0, 0};
        double best_value = 0.0;
        RateMatrix cur_rates = rates_with_forcing(prior, current, T);
        for (int j = 2; j <= prior.k(); ++j) {
            for (int t = j; t <= std::min(T, schedule.n(j) + 1); ++t) {
                double base = cur_rates.at(t, j);
                if (base <= 0.0) continue;
                double v = std::max(0.0, base - grid_step);
                auto trial = current;
                trial[{t, j}] = v;
                double w = welfare_exact(prior, rates_with_forcing(prior, trial, T), T);
                if (w > best_w) {
                    best_w = w;
                    best_coord = {t, j};
                    best_value = v;
                }
            }
        }
        best_improvement = std::max(best_improvement, best_w - w0);
        if (best_w <= w_cur + 1e-12) break;
        current[best_coord] = best_value;
        w_cur = best_w;
    }

    rep.worst_slack = -best_improvement;
    rep.pass = best_improvement <= 1e-9;
    if (!rep.pass)
        rep.counterexample = "a feasible perturbation improves welfare by " + fmt_double(best_improvement);
    return rep;
}

// ---- continuous-case audits --------------------------------------------

namespace {

double partition_first_lhs(const ContinuousInstance& inst, int j) {
    double tail = 1.0;
    for (int n = 2; n < j; ++n) tail *= inst.p_minus(n);
    double mu = inst.mean(j);
    return tail * -inst.d1.partial_expectation(-1.0, mu, mu);
}

double partition_step_lhs(const ContinuousInstance& inst, int j, double i_t) {
    return inst.p_plus(j) * -inst.d1.partial_expectation(-1.0, i_t, 1.0);
}

std::string continuous_id(const ContinuousInstance& inst) {
    std::string s = "d1=" + inst.d1.family + ";p=";
    for (size_t i = 0; i < inst.tail_p_plus.size(); ++i) {
        if (i) s += ",";
        s += fmt_double(inst.tail_p_plus[i]);
    }
    return s;
}

} // namespace

AuditReport partition_bic_audit(const ContinuousInstance& inst, const PartitionSchedule& schedule,
                                double tol, double tight_tol) {
    AuditReport rep;
    rep.check = "partition_bic";
    rep.prior_id = continuous_id(inst);
    rep.worst_slack = std::numeric_limits<double>::infinity();
    rep.pass = true;

    for (int j = 2; j <= inst.k(); ++j) {
        double mu = inst.mean(j);
        int last = schedule.last_endpoint_index(j);
        for (int t = j; t + 1 <= last; ++t) {
            double left = schedule.endpoint(j, t);
            double right = schedule.endpoint(j, t + 1);
            double slack;
            if (left >= 1.0) {
                slack = 0.0; // empty interval, both sides zero
            } else if (t == j) {
                slack = partition_first_lhs(inst, j) -
                        inst.d1.partial_expectation(std::max(mu, left), right, mu);
            } else {
                slack = partition_step_lhs(inst, j, left) -
                        inst.d1.partial_expectation(left, right, mu);
            }
            rep.slacks.push_back({t, j, 0, slack});
            rep.worst_slack = std::min(rep.worst_slack, slack);
            bool interior = right < 1.0;
            if (slack < -tol || (interior && std::fabs(slack) > tight_tol)) {
                rep.pass = false;
                if (rep.counterexample.empty())
                    rep.counterexample = "interval (j=" + std::to_string(j) + ", t=" +
                                         std::to_string(t) + ") slack " + fmt_double(slack);
            }
        }
    }
    return rep;
}

AuditReport partition_order_audit(const ContinuousInstance& inst, const PartitionSchedule& schedule,
                                  int grid_points) {
    AuditReport rep;
    rep.check = "partition_order";
    rep.prior_id = continuous_id(inst);
    rep.worst_slack = 0.0;
    rep.pass = true;

    const int k = inst.k();
    int t_cap = 2;
    for (int j = 2; j <= k; ++j) t_cap = std::max(t_cap, schedule.last_endpoint_index(j));
    const int tail_combos = 1 << (k - 1);

    for (int g = 0; g < grid_points && rep.pass; ++g) {
        // interior grid: the open left endpoint -1 carries no mass
        double x1 = -1.0 + 2.0 * (g + 1) / (grid_points + 1);
        for (int bits = 0; bits < tail_combos && rep.pass; ++bits) {
            PartitionState state = initial_partition_state(k);
            int last_explored = 1;
            for (int t = 1; t <= t_cap; ++t) {
                int rec;
                try {
                    rec = partition_recommend(schedule, state, t, x1);
                } catch (const error& e) {
                    if (e.code != errc::overlap_detected) throw;
                    rep.pass = false;
                    rep.counterexample = e.what();
                    break;
                }
                if (rec >= 2 && state.at(rec) == 0) {
                    if (rec != last_explored + 1) {
                        rep.pass = false;
                        rep.counterexample = "x1=" + fmt_double(x1) + ": explored action " +
                                             std::to_string(rec) + " after " +
                                             std::to_string(last_explored);
                        break;
                    }
                    last_explored = rec;
                    int reward = (bits >> (rec - 2)) & 1 ? 1 : -1;
                    state.set(rec, reward);
                    if (reward == 1) break;
                }
            }
        }
    }
    if (!rep.pass) rep.worst_slack = -1.0;
    return rep;
}

namespace {

// first agent whose interval contains x1; 0 when never covered
int first_hit(const PartitionSchedule& schedule, int j, double x1) {
    int last = schedule.last_endpoint_index(j);
    for (int t = j; t + 1 <= last; ++t) {
        if (x1 > schedule.endpoint(j, t) && x1 <= schedule.endpoint(j, t + 1)) return t;
    }
    return 0;
}

} // namespace

AuditReport partition_dominance_check(const ContinuousInstance& inst,
                                      const PartitionSchedule& schedule,
                                      const PartitionSchedule& shrunk, int grid_points) {
    AuditReport rep;
    rep.check = "partition_dominance";
    rep.prior_id = continuous_id(inst);
    rep.worst_slack = std::numeric_limits<double>::infinity();
    rep.pass = true;

    bool strict = false;
    for (int g = 0; g < grid_points; ++g) {
        double x1 = -1.0 + 2.0 * (g + 1) / (grid_points + 1);
        for (int j = 2; j <= inst.k(); ++j) {
            int tf = first_hit(schedule, j, x1);
            int ts = first_hit(shrunk, j, x1);
            if (tf == 0) {
                rep.pass = false;
                rep.counterexample = "x1=" + fmt_double(x1) + " never covered by action " +
                                     std::to_string(j);
                break;
            }
            double d = ts == 0 ? static_cast<double>(schedule.horizon()) : ts - tf;
            rep.worst_slack = std::min(rep.worst_slack, d);
            if (d < 0) {
                rep.pass = false;
                rep.counterexample = "shrunk policy reveals action " + std::to_string(j) +
                                     " earlier at x1=" + fmt_double(x1);
                break;
            }
            if (d > 0) strict = true;
        }
        if (!rep.pass) break;
    }
    if (rep.pass && !strict) {
        rep.pass = false;
        rep.counterexample = "shrunk policy never strictly later";
    }
    return rep;
}

} // namespace bicx
