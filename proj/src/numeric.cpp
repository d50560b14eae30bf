#include "bicx/numeric.hpp"
#include "bicx/error.hpp"

#include <cmath>
#include <string>

namespace bicx {

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        fail(errc::no_bracket, "f(" + std::to_string(lo) + ")=" + std::to_string(flo) +
                                   ", f(" + std::to_string(hi) + ")=" + std::to_string(fhi));
    }
    for (int iter = 0; iter < 200 && hi - lo > abs_tol; ++iter) {
        double x;
        if (fhi != flo) {
            // secant estimate, fall back to midpoint if it leaves the bracket
            x = lo - flo * (hi - lo) / (fhi - flo);
            double guard = 0.01 * (hi - lo);
            if (!(x > lo + guard && x < hi - guard)) x = 0.5 * (lo + hi);
        } else {
            x = 0.5 * (lo + hi);
        }
        double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx > 0.0) == (fhi > 0.0)) {
            hi = x;
            fhi = fx;
        } else {
            lo = x;
            flo = fx;
        }
        // alternate with a plain bisection step so the bracket always shrinks
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (fhi > 0.0)) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

// Gauss7/Kronrod15 nodes and weights on [-1, 1] (positive half).
constexpr double kron_x[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kron_w[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double gauss_w[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct gk_result {
    double value;
    double err;
};

gk_result gk15(const std::function<double(double)>& f, double a, double b) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double fc = f(c);
    double resk = kron_w[7] * fc;
    double resg = gauss_w[3] * fc;
    for (int i = 0; i < 7; ++i) {
        double fa = f(c - h * kron_x[i]);
        double fb = f(c + h * kron_x[i]);
        resk += kron_w[i] * (fa + fb);
        if (i % 2 == 1) resg += gauss_w[i / 2] * (fa + fb);
    }
    return {resk * h, std::fabs((resk - resg) * h)};
}

double integrate_rec(const std::function<double(double)>& f, double a, double b,
                     double tol, int depth) {
    gk_result r = gk15(f, a, b);
    if (r.err <= tol || depth >= 48) return r.value;
    double c = 0.5 * (a + b);
    return integrate_rec(f, a, c, 0.5 * tol, depth + 1) +
           integrate_rec(f, c, b, 0.5 * tol, depth + 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
    if (a == b) return 0.0;
    if (a > b) return -integrate(f, b, a, abs_tol);
    return integrate_rec(f, a, b, abs_tol, 0);
}

} // namespace bicx
