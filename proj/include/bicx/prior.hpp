#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bicx {

// Prior for the discrete setting: action 1 has support {-1, 0, +1},
// actions 2..k have support {-1, +1} with a single parameter p_j^1.
struct DiscretePrior {
    int k = 0;
    double p1_plus = 0.0;
    double p1_zero = 0.0;
    double p1_minus = 0.0;
    std::vector<double> p_plus; // p_j^1 for j = 2..k, size k-1
};

// Expected reward of action j (1-based). j=1 uses the three-point support,
// j>=2 the two-point one.
double mu(const DiscretePrior& prior, int j);

// A prior that passed validation. Means and tail probabilities are cached;
// immutable after construction, safe to share across threads.
class ValidatedPrior {
public:
    const DiscretePrior& raw() const { return raw_; }
    int k() const { return raw_.k; }
    double p1_plus() const { return raw_.p1_plus; }
    double p1_zero() const { return raw_.p1_zero; }
    double p1_minus() const { return raw_.p1_minus; }
    double p_plus(int j) const;  // p_j^1, j in 2..k
    double p_minus(int j) const; // p_j^{-1} = 1 - p_j^1, j in 2..k; p_minus(1) = p1_minus
    double mean(int j) const;    // mu_j, j in 1..k

    // True when some mu_j >= 0 for j >= 2. Such priors are legal inputs but
    // must go through preprocess_positive_means before the rate recurrence.
    bool has_positive_tail_mean() const { return positive_tail_; }

    // Canonical one-line description, used as prior_id in audit reports.
    std::string id() const;

private:
    friend ValidatedPrior validate(const DiscretePrior&);
    DiscretePrior raw_;
    std::vector<double> mu_;      // size k, index j-1
    std::vector<double> p_minus_; // size k-1, index j-2
    bool positive_tail_ = false;
};

// Checks all model assumptions and returns the cached wrapper.
// Throws errc::{degenerate_k, probability_out_of_range, zero_support,
// non_strict_ordering} on violations. mu_j >= 0 for j >= 2 is legal and
// only sets the positive-tail flag.
ValidatedPrior validate(const DiscretePrior& prior);

// Prior for the continuous setting: action 1's reward has a continuous
// distribution with full support on [-1, 1] and no mass points.
// partial_expectation(a, b, c) = integral of (X - c) dD1 over a <= X <= b.
struct ContinuousPrior {
    std::string family; // "uniform", "piecewise_linear", "generic"
    std::vector<double> params;
    std::function<double(double)> cdf;
    std::function<double(double, double, double)> partial_expectation;
    double mean = 0.0;
};

ContinuousPrior uniform_prior();

// cdf interpolates linearly between knots; knots_x must start at -1, end at 1,
// and both coordinate sequences must be strictly increasing.
ContinuousPrior piecewise_linear_prior(const std::vector<double>& knots_x,
                                       const std::vector<double>& knots_cdf);

// Any strictly increasing cdf with cdf(-1)=0, cdf(1)=1. Partial expectations
// are evaluated by adaptive quadrature (integration by parts, so only the cdf
// is needed) to absolute tolerance quad_tol.
ContinuousPrior generic_prior(std::function<double(double)> cdf, double quad_tol = 1e-10);

} // namespace bicx
