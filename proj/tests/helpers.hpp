#pragma once

#include "bicx/prior.hpp"
#include "bicx/rng.hpp"

#include <vector>

namespace testing {

// k=3 workhorse instance used throughout: mu = (0.1, -0.8, -0.9)
inline bicx::ValidatedPrior prior_a() {
    bicx::DiscretePrior p;
    p.k = 3;
    p.p1_plus = 0.4;
    p.p1_zero = 0.3;
    p.p1_minus = 0.3;
    p.p_plus = {0.1, 0.05};
    return bicx::validate(p);
}

inline bicx::ValidatedPrior make_prior(int k, double plus, double zero, double minus,
                                       std::vector<double> p_plus) {
    bicx::DiscretePrior p;
    p.k = k;
    p.p1_plus = plus;
    p.p1_zero = zero;
    p.p1_minus = minus;
    p.p_plus = std::move(p_plus);
    return bicx::validate(p);
}

// Random valid prior with all tail means negative. Tail probabilities stay in
// [0.05, 0.45] so schedules terminate quickly.
inline bicx::ValidatedPrior random_prior(bicx::CounterRng& rng, int max_k = 6) {
    for (;;) {
        int k = 2 + static_cast<int>(rng.next_unit() * (max_k - 1));
        double zero = rng.next_range(0.1, 0.5);
        double u = rng.next_range(0.2, 0.95);
        double plus = (1.0 - zero) * u;
        double minus = 1.0 - zero - plus;
        std::vector<double> tail;
        double p = rng.next_range(0.1, 0.45);
        for (int j = 2; j <= k; ++j) {
            tail.push_back(p);
            p *= rng.next_range(0.45, 0.95);
            if (p < 0.05) p = 0.05 * rng.next_range(0.9, 0.999);
        }
        bicx::DiscretePrior d;
        d.k = k;
        d.p1_plus = plus;
        d.p1_zero = zero;
        d.p1_minus = minus;
        d.p_plus = tail;
        bool ok = bicx::mu(d, 1) > bicx::mu(d, 2);
        for (int j = 2; ok && j < k; ++j) ok = bicx::mu(d, j) > bicx::mu(d, j + 1);
        if (!ok) continue;
        return bicx::validate(d);
    }
}

} // namespace testing
