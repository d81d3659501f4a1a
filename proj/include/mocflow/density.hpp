#pragma once

/// @file density.hpp
/// @brief Exact density evolution along characteristics, Eulerian field
/// sampling, and the cumulative distribution F(r, t).
///
/// Pre-shock, the density carried by the layer of label r0 is
///   rho(R, t) = rho0(r0) / ( P^d * J(r0, t) ),  d = 2 (sphere), 1 (cylinder)
/// with J the Jacobian of the layer map, and the charge/mass enclosed by a
/// layer never changes, so the cumulative distribution at an Eulerian
/// radius is found by inverting the layer map rather than by quadrature.

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "mocflow/characteristics.hpp"
#include "mocflow/profiles.hpp"
#include "mocflow/rootfind.hpp"

namespace mocflow {

/// Eulerian radial grids of one instant. `valid` is false when the label
/// grid ran into a vanishing Jacobian (or a collapsed layer) and the
/// snapshot was truncated at the last healthy label.
struct FieldSnapshot {
    double t = 0.0;
    std::vector<double> r;     ///< Eulerian radii, ascending pre-shock
    std::vector<double> f;     ///< density
    std::vector<double> bigF;  ///< cumulative charge/mass/probability
    std::vector<double> v;     ///< radial velocity
    bool valid = true;
};

struct AdvectedDensity {
    double radius;
    double rho;
};

/// Density carried to time t by the layer of label r0. ShockError once the
/// Jacobian is no longer positive there.
inline AdvectedDensity advected_density(const RadialProfile& profile,
                                        const PhysicsParams& params, double r0,
                                        double t) {
    const double rho0 = initial_density(profile, r0);
    const double lam = layer_rate(profile, params, r0);
    if (lam == 0.0) return {r0, rho0};  // force-free void: layer is static
    const BranchKind kind = branch_kind(params);
    const double p = radius_ratio(kind, lam * t);
    const double J = jacobian(profile, params, r0, t);
    if (J <= 0.0)
        throw ShockError("advected_density: characteristics crossed at this label");
    const double pd = params.symmetry == Symmetry::Sphere ? p * p : p;
    return {r0 * p, rho0 / (pd * J)};
}

/// Uniform sphere: the density stays spatially constant and follows
/// rho0 / P^3(lambda t). Electric spheres rarefy, gravity spheres compress
/// and diverge at collapse.
inline double uniform_sphere_density(double rho0, double lam, BranchKind kind, double t) {
    if (kind != BranchKind::ElectricSphere && kind != BranchKind::GravitySphere)
        throw UnsupportedError("uniform_sphere_density: sphere branches only");
    const double p = radius_ratio(kind, lam * t);
    if (p <= 0.0) throw RangeError("uniform_sphere_density: diverges at total collapse");
    return rho0 / (p * p * p);
}

/// Inverse of uniform_sphere_density in scaled time: given the ratio
/// rho0/rho(t), returns lambda*t = F( (rho0/rho)^{1/3} ).
inline double uniform_sphere_scaled_time(double rho_ratio, BranchKind kind) {
    if (kind != BranchKind::ElectricSphere && kind != BranchKind::GravitySphere)
        throw UnsupportedError("uniform_sphere_scaled_time: sphere branches only");
    if (std::isnan(rho_ratio) || rho_ratio < 0.0)
        throw DomainError("uniform_sphere_scaled_time: ratio must be >= 0");
    return scaled_time(kind, std::cbrt(rho_ratio));
}

/// Lagrangian label whose layer sits at Eulerian radius r at time t
/// (pre-shock, so the layer map is monotone). RangeError when r cannot be
/// bracketed by any evolved layer.
inline double label_at(const RadialProfile& profile, const PhysicsParams& params,
                       double r, double t) {
    if (std::isnan(r) || r < 0.0) throw DomainError("label_at: r must be >= 0");
    if (r == 0.0 || t == 0.0) return r;
    const bool expanding = params.interaction == Interaction::Electric;

    // value-and-slope of the layer map; a collapsed layer reads as "already
    // through the center", which keeps the bracket usable for gravity
    const auto map = [&](double r0) -> std::pair<double, double> {
        try {
            const double R = characteristic_at(profile, params, r0).radius(t);
            double J = std::numeric_limits<double>::quiet_NaN();
            try {
                J = jacobian(profile, params, r0, t);
            } catch (const RangeError&) {
            }
            return {R - r, J};
        } catch (const RangeError&) {
            return {-r, std::numeric_limits<double>::quiet_NaN()};
        }
    };

    double lo = r, hi = r;
    if (expanding) {
        // R(r0) >= r0 pins the upper bracket at r; walk the lower end down
        int guard = 0;
        while (map(lo).first > 0.0) {
            lo *= 0.5;
            if (++guard > 2000)
                throw ConvergenceError("label_at: no lower bracket");
        }
    } else {
        int guard = 0;
        while (map(hi).first < 0.0) {
            hi *= 2.0;
            if (++guard > 2000)
                throw RangeError("label_at: r beyond the outermost evolved layer");
        }
    }
    return bracketed_newton(map, lo, hi, 0.5 * (lo + hi));
}

/// Cumulative distribution F(r, t): the charge/mass/probability inside
/// Eulerian radius r. Computed by layer conservation — invert the layer map
/// and return the initial enclosed amount — never by quadrature of the
/// evolved field.
inline double distribution_function(const RadialProfile& profile,
                                    const PhysicsParams& params, double r, double t) {
    if (std::isnan(r) || r < 0.0)
        throw DomainError("distribution_function: r must be >= 0");
    if (r == 0.0) return 0.0;
    return enclosed(profile, params.symmetry, label_at(profile, params, r, t));
}

/// Evaluate (R, rho, F, v) for every label at time t. Labels must be
/// ascending and inside the support. On a vanishing Jacobian (J <= 1e-10)
/// or a collapsed layer the snapshot is truncated there and flagged.
inline FieldSnapshot sample_field(const RadialProfile& profile,
                                  const PhysicsParams& params,
                                  std::span<const double> labels, double t) {
    const BranchKind kind = branch_kind(params);
    FieldSnapshot snap;
    snap.t = t;
    snap.r.reserve(labels.size());
    constexpr double kJacobianFloor = 1e-10;
    for (double r0 : labels) {
        try {
            const double rho0 = initial_density(profile, r0);
            const double lam = layer_rate(profile, params, r0);
            double R, rho, vel;
            if (lam == 0.0) {
                R = r0; rho = rho0; vel = 0.0;
            } else {
                const double p = radius_ratio(kind, lam * t);
                const double slope = ratio_slope_from_value(kind, p);
                const double J = jacobian(profile, params, r0, t);
                if (J <= kJacobianFloor) {
                    snap.valid = false;
                    break;
                }
                R = r0 * p;
                vel = r0 * lam * slope;
                const double pd = params.symmetry == Symmetry::Sphere ? p * p : p;
                rho = rho0 / (pd * J);
            }
            snap.r.push_back(R);
            snap.f.push_back(rho);
            snap.v.push_back(vel);
            snap.bigF.push_back(enclosed(profile, params.symmetry, r0));
        } catch (const RangeError&) {  // layer already collapsed
            snap.valid = false;
            break;
        }
    }
    return snap;
}

}  // namespace mocflow
