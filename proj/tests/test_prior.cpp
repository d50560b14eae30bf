#include "bicx/error.hpp"
#include "bicx/numeric.hpp"
#include "bicx/prior.hpp"
#include "bicx/rng.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace bicx;

namespace {

// independent mean: dot product of support values and probabilities
double dot_mean(const DiscretePrior& p, int j) {
    if (j == 1) return 1.0 * p.p1_plus + 0.0 * p.p1_zero + (-1.0) * p.p1_minus;
    double pj = p.p_plus[static_cast<size_t>(j) - 2];
    return 1.0 * pj + (-1.0) * (1.0 - pj);
}

errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const error& e) {
        return e.code;
    }
    throw std::logic_error("expected a bicx::error");
}

} // namespace

TEST_CASE("mu of two-point and three-point actions") {
    DiscretePrior p;
    p.k = 3;
    p.p1_plus = 0.4;
    p.p1_zero = 0.3;
    p.p1_minus = 0.3;
    p.p_plus = {0.1, 0.5};
    CHECK(mu(p, 2) == doctest::Approx(-0.8).epsilon(1e-15));
    CHECK(mu(p, 3) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(mu(p, 1) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(code_of([&] { mu(p, 0); }) == errc::index_out_of_range);
    CHECK(code_of([&] { mu(p, 4); }) == errc::index_out_of_range);
}

TEST_CASE("validate caches means and tail probabilities") {
    ValidatedPrior v = testing::prior_a();
    CHECK(v.mean(1) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(v.mean(2) == doctest::Approx(-0.8).epsilon(1e-15));
    CHECK(v.mean(3) == doctest::Approx(-0.9).epsilon(1e-15));
    CHECK(v.p_minus(2) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(v.p_minus(1) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK_FALSE(v.has_positive_tail_mean());

    // idempotent: re-validating the raw prior yields the same wrapper
    ValidatedPrior v2 = validate(v.raw());
    CHECK(v2.mean(2) == v.mean(2));
    CHECK(v2.id() == v.id());
}

TEST_CASE("validation rejections and flags") {
    CHECK(code_of([] { testing::make_prior(2, 0.5, 0.6, 0.3, {0.2}); }) ==
          errc::probability_out_of_range); // sums to 1.4
    CHECK(code_of([] { testing::make_prior(3, 0.4, 0.3, 0.3, {0.3, 0.3}); }) ==
          errc::non_strict_ordering); // mu_2 = mu_3
    CHECK(code_of([] { testing::make_prior(2, 0.5, 0.0, 0.5, {0.2}); }) == errc::zero_support);
    CHECK(code_of([] { testing::make_prior(2, 0.4, 0.3, 0.3, {0.0}); }) == errc::zero_support);
    CHECK(code_of([] { testing::make_prior(1, 0.4, 0.3, 0.3, {}); }) == errc::degenerate_k);
    CHECK(code_of([] { testing::make_prior(3, 0.4, 0.3, 0.3, {0.2}); }) ==
          errc::probability_out_of_range); // tail length mismatch

    // positive tail mean is legal but flagged
    ValidatedPrior flagged = testing::make_prior(2, 0.4, 0.3, 0.3, {0.6});
    CHECK(flagged.has_positive_tail_mean());
    CHECK(flagged.mean(2) == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("means match the independent dot product on random priors") {
    CounterRng rng(20240801);
    for (int i = 0; i < 200; ++i) {
        ValidatedPrior v = testing::random_prior(rng);
        for (int j = 1; j <= v.k(); ++j)
            CHECK(v.mean(j) == doctest::Approx(dot_mean(v.raw(), j)).epsilon(1e-14));
    }
}

TEST_CASE("uniform partial expectations") {
    ContinuousPrior u = uniform_prior();
    CHECK(u.mean == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(u.cdf(-1.0) == 0.0);
    CHECK(u.cdf(1.0) == 1.0);
    CHECK(u.partial_expectation(0.3, 0.3, -0.2) == 0.0);
    // E[(X - c); a <= X <= b] against direct quadrature of the density
    double direct = integrate([](double x) { return (x + 0.2) * 0.5; }, -0.4, 0.7, 1e-12);
    CHECK(u.partial_expectation(-0.4, 0.7, -0.2) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("piecewise linear cdf family") {
    ContinuousPrior d = piecewise_linear_prior({-1.0, 0.0, 1.0}, {0.0, 0.25, 1.0});
    CHECK(d.cdf(-1.0) == 0.0);
    CHECK(d.cdf(0.0) == doctest::Approx(0.25));
    CHECK(d.cdf(0.5) == doctest::Approx(0.625));
    CHECK(d.mean == doctest::Approx(-0.125 + 0.375).epsilon(1e-14));

    CHECK_THROWS_AS(piecewise_linear_prior({-1.0, 1.0}, {0.0, 0.9}), error);
    CHECK_THROWS_AS(piecewise_linear_prior({-1.0, 0.0, 1.0}, {0.0, 0.0, 1.0}), error);
    CHECK_THROWS_AS(piecewise_linear_prior({-1.0, 0.5, 0.2, 1.0}, {0.0, 0.2, 0.5, 1.0}), error);
}

TEST_CASE("generic prior evaluates partial expectations by quadrature") {
    // same distribution two ways: closed form vs cdf-only quadrature
    ContinuousPrior exact = piecewise_linear_prior({-1.0, -0.2, 1.0}, {0.0, 0.55, 1.0});
    ContinuousPrior quad = generic_prior(exact.cdf);
    CHECK(quad.mean == doctest::Approx(exact.mean).epsilon(1e-9));
    CounterRng rng(7);
    for (int i = 0; i < 50; ++i) {
        double a = rng.next_range(-1.0, 1.0);
        double b = rng.next_range(a, 1.0);
        double c = rng.next_range(-1.0, 1.0);
        CHECK(quad.partial_expectation(a, b, c) ==
              doctest::Approx(exact.partial_expectation(a, b, c)).epsilon(1e-9));
    }
}

TEST_CASE("partial expectation additivity over adjacent intervals") {
    CounterRng rng(99);
    ContinuousPrior priors[2] = {uniform_prior(),
                                 piecewise_linear_prior({-1.0, 0.1, 1.0}, {0.0, 0.7, 1.0})};
    for (const auto& d : priors) {
        for (int i = 0; i < 100; ++i) {
            double a = rng.next_range(-1.0, 1.0);
            double b = rng.next_range(a, 1.0);
            double m = rng.next_range(a, b);
            double c = rng.next_range(-1.0, 1.0);
            double whole = d.partial_expectation(a, b, c);
            double split = d.partial_expectation(a, m, c) + d.partial_expectation(m, b, c);
            CHECK(whole == doctest::Approx(split).epsilon(1e-12));
        }
    }
}
