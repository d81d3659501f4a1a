#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "mocflow/errors.hpp"

namespace mocflow {

/// Bracketed Newton iteration on a monotone function.
///
/// Solves g(x) = 0 for x in [lo, hi], where g is strictly monotone and
/// g(lo), g(hi) have opposite signs (either may be zero). Newton steps that
/// leave the bracket, or that fail to shrink it, fall back to bisection, so
/// convergence is guaranteed. The iteration stops when the step or the
/// bracket width drops below a few ulps of x, i.e. it resolves the root to
/// full double precision regardless of the caller's tolerance needs.
///
/// `g` must return the pair (value, derivative).
template <class F>
double bracketed_newton(F&& g, double lo, double hi, double x0) {
    const double flo = g(lo).first;
    if (flo == 0.0) return lo;
    const double fhi = g(hi).first;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw ConvergenceError("bracketed_newton: endpoints do not bracket a root");

    double x = std::clamp(x0, lo, hi);
    for (int it = 0; it < 200; ++it) {
        auto [f, d] = g(x);
        if (f == 0.0) return x;
        if ((f > 0) == (fhi > 0)) hi = x; else lo = x;

        double step = (d != 0.0 && std::isfinite(d)) ? f / d
                                                     : std::numeric_limits<double>::infinity();
        double xn = x - step;
        if (!(xn > lo) || !(xn < hi)) xn = 0.5 * (lo + hi);  // bisection fallback

        double width = hi - lo;
        if (width <= 4.0 * std::numeric_limits<double>::epsilon() *
                         (std::abs(lo) + std::abs(hi)) ||
            std::abs(xn - x) <=
                2.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) {
            return xn;
        }
        x = xn;
    }
    return x;  // monotone + bracketed: reached only at rounding level
}

/// Bisection on a sign change; `f` is value-only.
template <class F>
double bisect(F&& f, double lo, double hi, double rel_tol) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    double fhi = f(hi);
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw ConvergenceError("bisect: endpoints do not bracket a root");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) { lo = mid; flo = fm; } else { hi = mid; }
        if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

/// Golden-section minimization of a unimodal function on [lo, hi].
template <class F>
double golden_minimize(F&& f, double lo, double hi, double rel_tol) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > rel_tol * (std::abs(a) + std::abs(b))) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? c : d;
}

}  // namespace mocflow
