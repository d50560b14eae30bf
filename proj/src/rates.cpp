#include "bicx/rates.hpp"
#include "bicx/detail/format.hpp"
#include "bicx/error.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace bicx {

namespace {
constexpr double kZeroSnap = 1e-14; // B within this of 0 is treated as 0

using detail::fmt_double;
} // namespace

double ActionRates::q_at(int t) const {
    int i = t - j;
    if (i < 0 || i >= static_cast<int>(q.size())) return 0.0;
    return q[static_cast<size_t>(i)];
}

double ActionRates::a_at(int t) const {
    int i = t - j;
    if (i < 0 || i >= static_cast<int>(a.size())) return 0.0;
    return a[static_cast<size_t>(i)];
}

double ActionRates::b_at(int t) const {
    int i = t - j;
    if (i < 0 || i >= static_cast<int>(b.size())) return 0.0;
    return b[static_cast<size_t>(i)];
}

double ActionRates::prefix_at(int t) const {
    int i = t - j;
    if (i < 0) return 0.0;
    if (i >= static_cast<int>(prefix.size())) return mass;
    return prefix[static_cast<size_t>(i)];
}

const ActionRates& RateSchedule::action(int j) const {
    if (j < 2 || j > k_) fail(errc::index_out_of_range, "action " + std::to_string(j));
    return rows_[static_cast<size_t>(j) - 2];
}

int RateSchedule::max_n() const {
    int m = 1;
    for (const auto& r : rows_) m = std::max(m, r.n);
    return m;
}

double a_coeff(const ValidatedPrior& prior, double q_prefix, int j, int t) {
    if (j < 2 || j > prior.k()) fail(errc::index_out_of_range, "action " + std::to_string(j));
    if (t < j) return 0.0;
    double pj = prior.p_plus(j);
    if (pj >= 0.5)
        fail(errc::probability_out_of_range, "p_j^1 = " + fmt_double(pj) + " >= 1/2 (mu_j >= 0)");
    double tail = prior.p1_minus();
    for (int i = 2; i < j; ++i) tail *= prior.p_minus(i);
    return (2.0 * pj * tail + pj * q_prefix) / (1.0 - 2.0 * pj);
}

double b_coeff(const ValidatedPrior& prior, double prev_prefix, double own_prefix, int j, int t) {
    if (j < 2 || j > prior.k()) fail(errc::index_out_of_range, "action " + std::to_string(j));
    if (t < j) return 0.0;
    if (j == 2) return prior.p1_zero() - own_prefix;
    return prior.p_minus(j - 1) * prev_prefix - own_prefix;
}

bool limited_horizon_gate(const ValidatedPrior& prior, int j, int t, int T) {
    if (t > T) fail(errc::index_out_of_range, "agent " + std::to_string(t) + " past horizon");
    return (static_cast<double>(T - t) + 2.0) * prior.p_plus(j) >= 1.0;
}

RateSchedule compute_rate_schedule(const ValidatedPrior& prior, std::optional<int> limited_T,
                                   long agent_cap) {
    if (prior.has_positive_tail_mean())
        fail(errc::probability_out_of_range,
             "prior has mu_j >= 0 for some j >= 2; run preprocess_positive_means first");

    RateSchedule out;
    out.k_ = prior.k();
    out.limited_T_ = limited_T;
    out.rows_.reserve(static_cast<size_t>(prior.k()) - 1);

    const ActionRates* prev = nullptr;
    for (int j = 2; j <= prior.k(); ++j) {
        ActionRates row;
        row.j = j;
        row.rho = prior.p1_zero();
        for (int i = 2; i < j; ++i) row.rho *= prior.p_minus(i);

        double own_prefix = 0.0;
        bool seen_positive = false;
        for (int t = j;; ++t) {
            if (t - j > agent_cap)
                fail(errc::non_terminating,
                     "action " + std::to_string(j) + " still active at agent " + std::to_string(t));
            if (limited_T && t > *limited_T) {
                row.n = seen_positive ? t - 1 : 0;
                break;
            }
            double a = a_coeff(prior, own_prefix, j, t);
            double prev_prefix = prev ? prev->prefix_at(t) : 0.0;
            double b = b_coeff(prior, prev_prefix, own_prefix, j, t);
            if (b < kZeroSnap) b = 0.0;
            double q = std::min(a, b);
            if (limited_T && q > 0.0 && !limited_horizon_gate(prior, j, t, *limited_T)) {
                // gate failures are monotone in t: zero from here on
                row.gated = true;
                q = 0.0;
            }
            row.prefix.push_back(own_prefix);
            row.a.push_back(a);
            row.b.push_back(b);
            row.q.push_back(q);
            if (q <= 0.0) {
                row.q.back() = 0.0;
                row.n = seen_positive ? t - 1 : 0;
                break;
            }
            seen_positive = true;
            own_prefix += q;
        }
        row.mass = own_prefix;
        prev = &out.rows_.emplace_back(std::move(row));
    }
    return out;
}

double total_exploration_mass(const RateSchedule& schedule, int j) {
    const ActionRates& row = schedule.action(j);
    if (schedule.limited()) return row.mass;
    if (std::fabs(row.mass - row.rho) > 1e-12)
        fail(errc::mass_mismatch, "action " + std::to_string(j) + ": sum q = " + fmt_double(row.mass) +
                                      " vs rho = " + fmt_double(row.rho));
    return row.rho;
}

void write_rates_csv(std::ostream& os, const RateSchedule& schedule) {
    os << "t,j,q,A,B\n";
    for (int j = 2; j <= schedule.k(); ++j) {
        const ActionRates& row = schedule.action(j);
        for (size_t i = 0; i < row.q.size(); ++i) {
            int t = row.j + static_cast<int>(i);
            os << t << "," << j << "," << fmt_double(row.q[i]) << "," << fmt_double(row.a[i]) << ","
               << fmt_double(row.b[i]) << "\n";
        }
    }
}

double RateMatrix::at(int t, int j) const {
    if (j < 2 || j > k || t < 1) return 0.0;
    const auto& col = q[static_cast<size_t>(j) - 2];
    if (t > static_cast<int>(col.size())) return 0.0;
    return col[static_cast<size_t>(t) - 1];
}

void RateMatrix::set(int t, int j, double value) {
    if (j < 2) fail(errc::index_out_of_range, "action " + std::to_string(j));
    if (j > k) {
        k = j;
        q.resize(static_cast<size_t>(k) - 1);
    }
    auto& col = q[static_cast<size_t>(j) - 2];
    if (t > static_cast<int>(col.size())) col.resize(static_cast<size_t>(t), 0.0);
    col[static_cast<size_t>(t) - 1] = value;
    max_t = std::max(max_t, t);
}

RateMatrix read_rates_csv(std::istream& is) {
    RateMatrix m;
    m.k = 2;
    m.q.resize(1);
    std::string line;
    if (!std::getline(is, line) || line.rfind("t,j,q", 0) != 0)
        fail(errc::io_error, "missing rates CSV header");
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        double vals[5];
        for (int c = 0; c < 5; ++c) {
            if (!std::getline(ls, cell, ','))
                fail(errc::io_error, "line " + std::to_string(lineno) + ": expected 5 columns");
            try {
                vals[c] = std::stod(cell);
            } catch (const std::exception&) {
                fail(errc::io_error, "line " + std::to_string(lineno) + ": bad number '" + cell + "'");
            }
        }
        m.set(static_cast<int>(vals[0]), static_cast<int>(vals[1]), vals[2]);
    }
    return m;
}

RateMatrix to_matrix(const RateSchedule& schedule) {
    RateMatrix m;
    m.k = schedule.k();
    m.q.resize(static_cast<size_t>(m.k) - 1);
    for (int j = 2; j <= schedule.k(); ++j) {
        const ActionRates& row = schedule.action(j);
        for (int t = j; t <= row.n; ++t) m.set(t, j, row.q_at(t));
    }
    return m;
}

} // namespace bicx
