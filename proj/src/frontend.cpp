#include "bicx/frontend.hpp"
#include "bicx/error.hpp"
#include "bicx/partition.hpp"
#include "bicx/simulate.hpp"
#include "bicx/verify.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace bicx {

namespace {

ValidatedPrior discrete_prior(const RunConfig& cfg) {
    if (!cfg.p1) fail(errc::type_mismatch, "mode '" + cfg.mode + "' needs a discrete prior");
    DiscretePrior p;
    p.k = cfg.k;
    p.p1_plus = (*cfg.p1)[0];
    p.p1_zero = (*cfg.p1)[1];
    p.p1_minus = (*cfg.p1)[2];
    p.p_plus = cfg.p_plus;
    return validate(p);
}

ContinuousInstance continuous_instance(const RunConfig& cfg) {
    if (!cfg.continuous)
        fail(errc::type_mismatch, "mode '" + cfg.mode + "' needs a continuous prior");
    ContinuousPrior d1;
    if (cfg.continuous->family == "uniform") {
        d1 = uniform_prior();
    } else if (cfg.continuous->family == "piecewise_linear") {
        const auto& ps = cfg.continuous->params;
        if (ps.size() < 4 || ps.size() % 2 != 0)
            fail(errc::type_mismatch, "piecewise_linear params are knot pairs x1,F1,x2,F2,...");
        std::vector<double> xs, fs;
        for (size_t i = 0; i < ps.size(); i += 2) {
            xs.push_back(ps[i]);
            fs.push_back(ps[i + 1]);
        }
        d1 = piecewise_linear_prior(xs, fs);
    } else {
        fail(errc::type_mismatch, "unknown continuous family '" + cfg.continuous->family + "'");
    }
    if (static_cast<int>(cfg.p_plus.size()) != cfg.k - 1)
        fail(errc::type_mismatch, "p_plus must list the k-1 tail actions");
    return make_continuous_instance(std::move(d1), cfg.p_plus);
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    std::filesystem::path path = std::filesystem::path(dir) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(errc::io_error, "cannot open " + path.string());
    os << content;
    if (!os) fail(errc::io_error, "write failed for " + path.string());
}

int run_rates(const RunConfig& cfg) {
    ValidatedPrior prior = discrete_prior(cfg);
    RateSchedule schedule = compute_rate_schedule(prior, cfg.horizon);
    std::ostringstream os;
    write_rates_csv(os, schedule);
    write_file(cfg.out_dir, "rates.csv", os.str());
    return 0;
}

int run_partition(const RunConfig& cfg) {
    ContinuousInstance inst = continuous_instance(cfg);
    PartitionSchedule schedule = compute_interval_schedule(inst, cfg.horizon.value_or(64));
    std::ostringstream os;
    write_partition_csv(os, schedule);
    write_file(cfg.out_dir, "partition.csv", os.str());

    double tol = cfg.tol.value_or(1e-8);
    std::vector<AuditReport> reports = {
        partition_bic_audit(inst, schedule, tol, tol),
        partition_order_audit(inst, schedule, cfg.x1_grid),
    };
    std::string json = "[";
    for (size_t i = 0; i < reports.size(); ++i) {
        if (i) json += ",";
        json += reports[i].json();
    }
    json += "]\n";
    write_file(cfg.out_dir, "partition_audit.json", json);
    for (const AuditReport& r : reports)
        if (!r.pass) return 2;
    return 0;
}

// horizon at which maximal exploration provably maximizes welfare
int default_horizon(const ValidatedPrior& prior) {
    if (prior.has_positive_tail_mean()) return 8;
    RateSchedule s = compute_rate_schedule(prior);
    double p_last = prior.p_plus(prior.k());
    return static_cast<int>(std::ceil(1.0 / p_last + s.max_n() - 1.0 - 1e-12));
}

int run_simulate(const RunConfig& cfg) {
    ValidatedPrior prior = discrete_prior(cfg);
    PreprocessedPiHatPolicy policy(prior);
    int T = cfg.horizon.value_or(default_horizon(prior));

    std::vector<ComparisonRow> rows = compare_policies({&policy}, prior, T, cfg.reps, cfg.seed);
    std::ostringstream os;
    write_comparison_csv(os, rows);
    write_file(cfg.out_dir, "simulate.csv", os.str());

    Trajectory tr = run_episode(policy, prior, T, cfg.seed, 0);
    std::ostringstream ts;
    write_trajectory_csv(ts, tr);
    write_file(cfg.out_dir, "trajectory.csv", ts.str());
    return 0;
}

int run_audit(const RunConfig& cfg) {
    ValidatedPrior prior = discrete_prior(cfg);
    double tol = cfg.tol.value_or(1e-9);
    std::vector<AuditReport> reports;
    if (cfg.schedule_csv) {
        std::ifstream is(*cfg.schedule_csv);
        if (!is) fail(errc::io_error, "cannot open " + *cfg.schedule_csv);
        RateMatrix psi = read_rates_csv(is);
        int T = cfg.horizon.value_or(psi.max_t + 1);
        reports.push_back(bic_audit(prior, psi, T, tol));
    } else {
        RateSchedule schedule = compute_rate_schedule(prior);
        int T = std::min(cfg.horizon.value_or(schedule.max_n() + 1), schedule.max_n() + 2);
        reports.push_back(bic_audit(prior, schedule, T, tol));
        reports.push_back(maximality_audit(schedule, prior));
        reports.push_back(infeasibility_audit(prior, schedule, T));
    }
    std::string json = "[";
    for (size_t i = 0; i < reports.size(); ++i) {
        if (i) json += ",";
        json += reports[i].json();
    }
    json += "]\n";
    write_file(cfg.out_dir, "audit.json", json);
    for (const AuditReport& r : reports)
        if (!r.pass) return 2;
    return 0;
}

int run_compare(const RunConfig& cfg) {
    ValidatedPrior prior = discrete_prior(cfg);
    PreprocessedPiHatPolicy pi_hat(prior);
    GreedyPolicy greedy;
    int T = cfg.horizon.value_or(default_horizon(prior));
    FullInfoPolicy full_info(prior, T);

    std::vector<const Policy*> policies = {&pi_hat, &greedy, &full_info};
    std::vector<ComparisonRow> rows = compare_policies(policies, prior, T, cfg.reps, cfg.seed);
    std::ostringstream os;
    write_comparison_csv(os, rows);
    write_file(cfg.out_dir, "compare.csv", os.str());
    return 0;
}

} // namespace

int run(const RunConfig& cfg) {
    if (cfg.mode == "rates") return run_rates(cfg);
    if (cfg.mode == "partition") return run_partition(cfg);
    if (cfg.mode == "simulate") return run_simulate(cfg);
    if (cfg.mode == "audit") return run_audit(cfg);
    if (cfg.mode == "compare") return run_compare(cfg);
    fail(errc::type_mismatch, "unknown mode '" + cfg.mode + "'");
}

} // namespace bicx
