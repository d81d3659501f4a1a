#pragma once

/// @file branch.hpp
/// @brief The four time-of-flight functions F for radially expanding or
/// collapsing concentric layers, and their numerical inverses P.
///
/// A layer released from rest at radius R0 under a purely radial 1/R^2
/// (sphere) or 1/R force (cylinder) satisfies R(t) = R0 * P(lambda(R0) * t),
/// where P inverts the branch-specific function F:
///
///   electric sphere    F(x) = sqrt(x(x-1)) + arccosh(sqrt(x)),   x in [1, inf)
///   electric cylinder  F(x) = integral_0^{sqrt(ln x)} e^{l^2} dl, x in [1, inf)
///   gravity sphere     F(x) = sqrt(x(1-x)) + arccos(sqrt(x)),    x in [0, 1]
///   gravity cylinder   F(x) = (sqrt(pi)/2) erf(sqrt(ln(1/x))),   x in (0, 1]
///
/// x is the radius ratio R/R0 and F(x) the elapsed time in units of
/// 1/lambda. Electric branches expand (F increasing, unbounded); gravity
/// branches contract (F decreasing, bounded by pi/2 resp. sqrt(pi)/2 at
/// total collapse).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "mocflow/errors.hpp"
#include "mocflow/rootfind.hpp"

namespace mocflow {

enum class BranchKind {
    ElectricSphere,
    ElectricCylinder,
    GravitySphere,
    GravityCylinder,
};

constexpr bool is_gravity(BranchKind k) {
    return k == BranchKind::GravitySphere || k == BranchKind::GravityCylinder;
}

constexpr bool is_cylinder(BranchKind k) {
    return k == BranchKind::ElectricCylinder || k == BranchKind::GravityCylinder;
}

constexpr const char* branch_name(BranchKind k) {
    switch (k) {
        case BranchKind::ElectricSphere:   return "electric-sphere";
        case BranchKind::ElectricCylinder: return "electric-cylinder";
        case BranchKind::GravitySphere:    return "gravity-sphere";
        case BranchKind::GravityCylinder:  return "gravity-cylinder";
    }
    return "?";
}

/// Supremum of lambda*t for which the branch stays defined. Electric
/// branches never terminate; gravity branches end at total collapse.
inline double max_scaled_time(BranchKind k) {
    switch (k) {
        case BranchKind::GravitySphere:   return std::numbers::pi / 2.0;
        case BranchKind::GravityCylinder: return std::sqrt(std::numbers::pi) / 2.0;
        default: return std::numeric_limits<double>::infinity();
    }
}

/// Gauss error function, erf(x) = 2/sqrt(pi) * integral_0^x e^{-l^2} dl.
inline double erf(double x) { return std::erf(x); }

namespace detail {

// Maclaurin series sum_k z^{2k+1} / (k! (2k+1)): all terms positive, so no
// cancellation; a dozen terms suffice for z <= 1.
inline double erfi_integral_series(double z) {
    const double z2 = z * z;
    double term = z, sum = z;
    for (int k = 1; k < 40; ++k) {
        term *= z2 / k;
        const double contrib = term / (2.0 * k + 1.0);
        sum += contrib;
        if (contrib < 1e-17 * sum) break;
    }
    return sum;
}

// Asymptotic tail: integral_0^z e^{l^2} dl
//   = e^{z^2}/(2z) * (1 + 1/(2z^2) + 3/(2z^2)^2 * ... ), a_k = (2k-1)!!/(2z^2)^k.
// Truncated at the smallest term; relative truncation ~ e^{-z^2}.
inline double erfi_integral_asymptotic(double z) {
    const double z2inv = 1.0 / (2.0 * z * z);
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 80; ++k) {
        double next = term * (2.0 * k + 1.0) * z2inv;
        if (next >= term) break;  // asymptotic series started diverging
        term = next;
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return std::exp(z * z) / (2.0 * z) * sum;
}

// Series below 1 (the quadrature error estimate floors out on short
// near-linear intervals and recurses to full depth), Gauss-Kronrod up to
// the asymptotic seam at 5.5, where quadrature and tail series agree to
// ~1e-13 (asserted in tests).
inline constexpr double kErfiSeriesEnd = 1.0;
inline constexpr double kErfiSeam = 5.5;

}  // namespace detail

/// integral_0^z e^{l^2} dl for z >= 0. Relative error <= 1e-12. Overflows
/// to +inf for z > ~26.6 (the integral exceeds DBL_MAX).
inline double erfi_integral(double z) {
    if (std::isnan(z) || z < 0.0) throw DomainError("erfi_integral: z must be >= 0");
    if (z == 0.0) return 0.0;
    if (z <= detail::kErfiSeriesEnd) return detail::erfi_integral_series(z);
    if (z <= detail::kErfiSeam) {
        const auto f = [](double l) { return std::exp(l * l); };
        return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            f, 0.0, z, 15, 1e-14);
    }
    return detail::erfi_integral_asymptotic(z);
}

namespace detail {

// Domain slack: arguments within a few rounding errors of an endpoint are
// treated as the endpoint, so that e.g. scaled_time(k, radius_ratio(k, t))
// never trips on the last ulp.
inline constexpr double kEdgeSlack = 1e-12;

inline double require_ge_one(double x, const char* who) {
    if (std::isnan(x) || x < 1.0 - kEdgeSlack)
        throw DomainError(std::string(who) + ": ratio must be >= 1 on electric branches");
    return std::max(x, 1.0);
}

inline double require_unit_interval(double x, const char* who) {
    if (std::isnan(x) || x < -kEdgeSlack || x > 1.0 + kEdgeSlack)
        throw DomainError(std::string(who) + ": ratio must lie in [0, 1] on gravity branches");
    return std::clamp(x, 0.0, 1.0);
}

}  // namespace detail

/// F(x): time (in units of 1/lambda) at which a layer's radius ratio R/R0
/// reaches x. DomainError outside the branch domain.
inline double scaled_time(BranchKind kind, double x) {
    switch (kind) {
        case BranchKind::ElectricSphere: {
            x = detail::require_ge_one(x, "scaled_time");
            return std::sqrt(x * (x - 1.0)) + std::acosh(std::sqrt(x));
        }
        case BranchKind::ElectricCylinder: {
            x = detail::require_ge_one(x, "scaled_time");
            return erfi_integral(std::sqrt(std::log(x)));
        }
        case BranchKind::GravitySphere: {
            x = detail::require_unit_interval(x, "scaled_time");
            if (x == 0.0) return std::numbers::pi / 2.0;
            return std::sqrt(x * (1.0 - x)) + std::acos(std::min(std::sqrt(x), 1.0));
        }
        case BranchKind::GravityCylinder: {
            x = detail::require_unit_interval(x, "scaled_time");
            if (x == 0.0)
                throw DomainError("scaled_time: gravity-cylinder ratio must be > 0");
            if (x == 1.0) return 0.0;
            return 0.5 * std::sqrt(std::numbers::pi) *
                   std::erf(std::sqrt(std::log(1.0 / x)));
        }
    }
    throw DomainError("scaled_time: bad branch kind");
}

/// dF/dx. Singular (+-inf) at x = 1; callers probing endpoints get the
/// IEEE infinity rather than an exception.
inline double scaled_time_slope(BranchKind kind, double x) {
    switch (kind) {
        case BranchKind::ElectricSphere:
            x = detail::require_ge_one(x, "scaled_time_slope");
            return std::sqrt(x / (x - 1.0));
        case BranchKind::ElectricCylinder:
            x = detail::require_ge_one(x, "scaled_time_slope");
            return 1.0 / (2.0 * std::sqrt(std::log(x)));
        case BranchKind::GravitySphere:
            x = detail::require_unit_interval(x, "scaled_time_slope");
            return -std::sqrt(x / (1.0 - x));
        case BranchKind::GravityCylinder:
            x = detail::require_unit_interval(x, "scaled_time_slope");
            if (x == 0.0)
                throw DomainError("scaled_time_slope: gravity-cylinder ratio must be > 0");
            return -1.0 / (2.0 * std::sqrt(std::log(1.0 / x)));
    }
    throw DomainError("scaled_time_slope: bad branch kind");
}

namespace detail {

inline double radius_ratio_electric_sphere(double tau) {
    const double hi = std::max(2.0, 2.0 * tau + 2.0);  // F(x) >= x - 1
    const double guess = tau < 2.0 ? 1.0 + 0.25 * tau * tau : tau;
    return bracketed_newton(
        [tau](double x) {
            return std::pair{scaled_time(BranchKind::ElectricSphere, x) - tau,
                             scaled_time_slope(BranchKind::ElectricSphere, x)};
        },
        1.0, hi, guess);
}

inline double radius_ratio_electric_cylinder(double tau) {
    // Invert in z = sqrt(ln x): erfi_integral(z) = tau, then x = e^{z^2}.
    const double z_cap = 26.5;  // e^{z^2} overflows just past here
    double z_hi = std::min(tau, z_cap);  // erfi_integral(z) >= z
    if (z_hi == z_cap && erfi_integral(z_cap) < tau)
        throw RangeError("radius_ratio: electric-cylinder ratio exceeds double range");
    double guess = tau < 1.2 ? tau : std::sqrt(std::log(2.0 * tau + 1.0));
    const double z = bracketed_newton(
        [tau](double z) {
            return std::pair{erfi_integral(z) - tau, std::exp(z * z)};
        },
        0.0, z_hi, guess);
    return std::exp(z * z);
}

inline double radius_ratio_gravity_sphere(double tau) {
    const double t_end = std::numbers::pi / 2.0;
    if (tau >= t_end) {
        if (tau <= t_end * (1.0 + kEdgeSlack)) return 0.0;  // total collapse
        throw RangeError("radius_ratio: time past total collapse (gravity sphere)");
    }
    // Solve in u = sqrt(x); near collapse F ~ pi/2 - (2/3) u^3, so the cubic
    // root is simple in u and Newton keeps quadratic convergence.
    double guess = tau < 1.2 ? std::sqrt(std::max(1.0 - 0.25 * tau * tau, 0.25))
                             : std::cbrt(1.5 * (t_end - tau));
    const double u = bracketed_newton(
        [tau](double u) {
            const double x = u * u;
            const double val = scaled_time(BranchKind::GravitySphere, x) - tau;
            const double slope = u < 1.0 ? -2.0 * x / std::sqrt(1.0 - x)
                                         : -std::numeric_limits<double>::infinity();
            return std::pair{val, slope};
        },
        0.0, 1.0, guess);
    return u * u;
}

inline double radius_ratio_gravity_cylinder(double tau) {
    const double t_end = 0.5 * std::sqrt(std::numbers::pi);
    if (tau >= t_end * (1.0 - 1e-12))
        throw RangeError("radius_ratio: time past total collapse (gravity cylinder)");
    const double z = boost::math::erf_inv(2.0 * tau / std::sqrt(std::numbers::pi));
    return std::exp(-z * z);
}

}  // namespace detail

/// P(tau): radius ratio R/R0 after scaled time tau = lambda*t. Inverse of
/// scaled_time; P(0) = 1 on every branch. RangeError for gravity branches
/// once tau passes total collapse.
inline double radius_ratio(BranchKind kind, double tau) {
    if (std::isnan(tau) || tau < 0.0) {
        if (tau >= -detail::kEdgeSlack) tau = 0.0;
        else throw DomainError("radius_ratio: scaled time must be >= 0");
    }
    if (tau == 0.0) return 1.0;
    switch (kind) {
        case BranchKind::ElectricSphere:   return detail::radius_ratio_electric_sphere(tau);
        case BranchKind::ElectricCylinder: return detail::radius_ratio_electric_cylinder(tau);
        case BranchKind::GravitySphere:    return detail::radius_ratio_gravity_sphere(tau);
        case BranchKind::GravityCylinder:  return detail::radius_ratio_gravity_cylinder(tau);
    }
    throw DomainError("radius_ratio: bad branch kind");
}

/// dP/dtau expressed through the ratio p = P(tau) itself:
///   electric sphere  +sqrt((p-1)/p)      electric cylinder  +2 sqrt(ln p)
///   gravity sphere   -sqrt((1-p)/p)      gravity cylinder   -2 sqrt(ln(1/p))
inline double ratio_slope_from_value(BranchKind kind, double p) {
    switch (kind) {
        case BranchKind::ElectricSphere:
            return std::sqrt(std::max(p - 1.0, 0.0) / p);
        case BranchKind::ElectricCylinder:
            return 2.0 * std::sqrt(std::max(std::log(p), 0.0));
        case BranchKind::GravitySphere:
            if (p <= 0.0)
                throw RangeError("ratio slope unbounded at total collapse");
            return -std::sqrt(std::max(1.0 - p, 0.0) / p);
        case BranchKind::GravityCylinder:
            if (p <= 0.0)
                throw RangeError("ratio slope unbounded at total collapse");
            return -2.0 * std::sqrt(std::max(std::log(1.0 / p), 0.0));
    }
    throw DomainError("ratio_slope_from_value: bad branch kind");
}

/// P'(tau) = dP/dtau at scaled time tau.
inline double radius_ratio_slope(BranchKind kind, double tau) {
    return ratio_slope_from_value(kind, radius_ratio(kind, tau));
}

}  // namespace mocflow
