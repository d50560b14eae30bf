#include "bicx/prior.hpp"
#include "bicx/detail/format.hpp"
#include "bicx/error.hpp"
#include "bicx/numeric.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace bicx {

namespace {
constexpr double kProbSumTol = 1e-12;

using detail::fmt_double;
} // namespace

double mu(const DiscretePrior& prior, int j) {
    if (j < 1 || j > prior.k) fail(errc::index_out_of_range, "action " + std::to_string(j));
    if (j == 1) return prior.p1_plus - prior.p1_minus;
    return 2.0 * prior.p_plus[static_cast<size_t>(j) - 2] - 1.0;
}

double ValidatedPrior::p_plus(int j) const {
    if (j < 2 || j > raw_.k) fail(errc::index_out_of_range, "action " + std::to_string(j));
    return raw_.p_plus[static_cast<size_t>(j) - 2];
}

double ValidatedPrior::p_minus(int j) const {
    if (j == 1) return raw_.p1_minus;
    if (j < 1 || j > raw_.k) fail(errc::index_out_of_range, "action " + std::to_string(j));
    return p_minus_[static_cast<size_t>(j) - 2];
}

double ValidatedPrior::mean(int j) const {
    if (j < 1 || j > raw_.k) fail(errc::index_out_of_range, "action " + std::to_string(j));
    return mu_[static_cast<size_t>(j) - 1];
}

std::string ValidatedPrior::id() const {
    std::string s = "k=" + std::to_string(raw_.k) + ";p1=" + fmt_double(raw_.p1_plus) + "," +
                    fmt_double(raw_.p1_zero) + "," + fmt_double(raw_.p1_minus) + ";p=";
    for (size_t i = 0; i < raw_.p_plus.size(); ++i) {
        if (i) s += ",";
        s += fmt_double(raw_.p_plus[i]);
    }
    return s;
}

ValidatedPrior validate(const DiscretePrior& prior) {
    if (prior.k < 2) fail(errc::degenerate_k, "need at least 2 actions, got " + std::to_string(prior.k));
    if (prior.p_plus.size() != static_cast<size_t>(prior.k) - 1)
        fail(errc::probability_out_of_range,
             "p_plus has " + std::to_string(prior.p_plus.size()) + " entries, expected " +
                 std::to_string(prior.k - 1));

    for (double p : {prior.p1_plus, prior.p1_zero, prior.p1_minus})
        if (!(p >= 0.0 && p <= 1.0)) fail(errc::probability_out_of_range, "p1 entry " + fmt_double(p));
    double sum = prior.p1_plus + prior.p1_zero + prior.p1_minus;
    if (std::fabs(sum - 1.0) > kProbSumTol)
        fail(errc::probability_out_of_range, "p1 sums to " + fmt_double(sum));
    if (prior.p1_zero <= 0.0) fail(errc::zero_support, "p1_zero must be positive");

    for (double p : prior.p_plus) {
        if (!(p >= 0.0 && p <= 1.0)) fail(errc::probability_out_of_range, "p_j^1 = " + fmt_double(p));
        if (p == 0.0) fail(errc::zero_support, "p_j^1 = 0 makes the action a constant -1");
    }

    ValidatedPrior out;
    out.raw_ = prior;
    out.mu_.resize(static_cast<size_t>(prior.k));
    for (int j = 1; j <= prior.k; ++j) out.mu_[static_cast<size_t>(j) - 1] = mu(prior, j);
    out.p_minus_.resize(prior.p_plus.size());
    for (size_t i = 0; i < prior.p_plus.size(); ++i) out.p_minus_[i] = 1.0 - prior.p_plus[i];

    for (int j = 2; j <= prior.k; ++j)
        if (out.mu_[static_cast<size_t>(j) - 1] >= 0.0) out.positive_tail_ = true;
    // tail means must be strictly decreasing; the head comparison only binds
    // for the core case (nonnegative tail means go through the preamble,
    // which re-validates the residual instance)
    for (int j = out.positive_tail_ ? 2 : 1; j < prior.k; ++j) {
        if (!(out.mu_[static_cast<size_t>(j) - 1] > out.mu_[static_cast<size_t>(j)]))
            fail(errc::non_strict_ordering,
                 "mu_" + std::to_string(j) + " = " + fmt_double(out.mu_[static_cast<size_t>(j) - 1]) +
                     " vs mu_" + std::to_string(j + 1) + " = " + fmt_double(out.mu_[static_cast<size_t>(j)]));
    }
    return out;
}

ContinuousPrior uniform_prior() {
    ContinuousPrior d;
    d.family = "uniform";
    d.cdf = [](double x) { return 0.5 * (x + 1.0); };
    // density 1/2: integral of (x - c)/2 over [a, b]
    d.partial_expectation = [](double a, double b, double c) {
        return ((b - c) * (b - c) - (a - c) * (a - c)) * 0.25;
    };
    d.mean = 0.0;
    return d;
}

ContinuousPrior piecewise_linear_prior(const std::vector<double>& knots_x,
                                       const std::vector<double>& knots_cdf) {
    size_t n = knots_x.size();
    if (n < 2 || knots_cdf.size() != n)
        fail(errc::probability_out_of_range, "need matching knot vectors of length >= 2");
    if (knots_x.front() != -1.0 || knots_x.back() != 1.0)
        fail(errc::probability_out_of_range, "knots_x must span [-1, 1]");
    if (std::fabs(knots_cdf.front()) > 1e-15 || std::fabs(knots_cdf.back() - 1.0) > 1e-15)
        fail(errc::probability_out_of_range, "cdf knots must run from 0 to 1");
    for (size_t i = 0; i + 1 < n; ++i) {
        if (!(knots_x[i + 1] > knots_x[i]))
            fail(errc::non_strict_ordering, "knots_x not strictly increasing");
        if (!(knots_cdf[i + 1] > knots_cdf[i]))
            fail(errc::non_strict_ordering, "cdf knots not strictly increasing (mass gap)");
    }

    auto xs = knots_x;
    auto fs = knots_cdf;
    ContinuousPrior d;
    d.family = "piecewise_linear";
    for (size_t i = 0; i < n; ++i) {
        d.params.push_back(xs[i]);
        d.params.push_back(fs[i]);
    }
    d.cdf = [xs, fs](double x) {
        if (x <= xs.front()) return 0.0;
        if (x >= xs.back()) return 1.0;
        size_t i = 1;
        while (xs[i] < x) ++i;
        double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return fs[i - 1] + w * (fs[i] - fs[i - 1]);
    };
    // constant density per segment: rho * integral of (x - c) dx, clipped to [a, b]
    d.partial_expectation = [xs, fs](double a, double b, double c) {
        if (b <= a) return 0.0;
        double total = 0.0;
        for (size_t i = 0; i + 1 < xs.size(); ++i) {
            double lo = std::max(a, xs[i]);
            double hi = std::min(b, xs[i + 1]);
            if (hi <= lo) continue;
            double rho = (fs[i + 1] - fs[i]) / (xs[i + 1] - xs[i]);
            total += rho * 0.5 * ((hi - c) * (hi - c) - (lo - c) * (lo - c));
        }
        return total;
    };
    d.mean = d.partial_expectation(-1.0, 1.0, 0.0);
    return d;
}

ContinuousPrior generic_prior(std::function<double(double)> cdf, double quad_tol) {
    if (std::fabs(cdf(-1.0)) > 1e-9 || std::fabs(cdf(1.0) - 1.0) > 1e-9)
        fail(errc::probability_out_of_range, "cdf must run from 0 at -1 to 1 at 1");
    ContinuousPrior d;
    d.family = "generic";
    // integral of (x-c) dF over [a,b] = (b-c)F(b) - (a-c)F(a) - integral of F dx,
    // which needs no density.
    d.partial_expectation = [cdf, quad_tol](double a, double b, double c) {
        if (b <= a) return 0.0;
        double boundary = (b - c) * cdf(b) - (a - c) * cdf(a);
        return boundary - integrate(cdf, a, b, quad_tol);
    };
    d.cdf = std::move(cdf);
    d.mean = d.partial_expectation(-1.0, 1.0, 0.0);
    return d;
}

} // namespace bicx
