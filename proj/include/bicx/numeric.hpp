#pragma once

#include <functional>

namespace bicx {

// Root of f on [lo, hi], f(lo) and f(hi) of opposite sign (or zero).
// Bisection with secant refinement; stops when the bracket width is
// below abs_tol. Throws errc::no_bracket if the interval does not bracket.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol = 1e-10);

// Adaptive Gauss7/Kronrod15 quadrature of f over [a, b] to absolute
// tolerance abs_tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10);

} // namespace bicx
