#pragma once

/// @file characteristics.hpp
/// @brief Layer trajectories R(t) = R0 P(lambda(R0) t), their velocities,
/// the Eulerian-map Jacobian dR/dR0, and shock onset by first crossing.
///
/// Each concentric layer of the initial distribution moves like a point
/// charge/mass under the field of the charge enclosed beneath it; the layer
/// trajectories are the characteristics of the continuity equation. The
/// exact solution stays valid until two characteristics cross, i.e. until
/// the Jacobian of the map R0 -> R(R0, t) first vanishes.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "mocflow/branch.hpp"
#include "mocflow/profiles.hpp"
#include "mocflow/rootfind.hpp"

namespace mocflow {

/// One concentric layer: Lagrangian label r0, rate lambda(r0), branch kind.
struct Characteristic {
    double r0;
    double lam;
    BranchKind kind;

    /// Eulerian radius at time t; nondecreasing (electric) or nonincreasing
    /// (gravity) in t. RangeError past total collapse.
    double radius(double t) const { return r0 * radius_ratio(kind, lam * t); }

    /// Radial velocity dR/dt = r0 lambda P'(lambda t); zero at t = 0,
    /// negative on gravity branches. RangeError at/after collapse.
    double velocity(double t) const { return r0 * lam * radius_ratio_slope(kind, lam * t); }

    /// Asymptotic front velocity: r0*lambda for the electric sphere, +inf
    /// for the electric cylinder (no finite limit). Gravity branches have a
    /// collapse instead of an asymptote.
    double v_max() const {
        if (kind == BranchKind::ElectricSphere) return r0 * lam;
        if (kind == BranchKind::ElectricCylinder)
            return std::numeric_limits<double>::infinity();
        throw UnsupportedError("v_max: gravity layers collapse, no velocity asymptote");
    }

    /// Electric sphere only: R = r0 / (1 - (v/v_max)^2), the trajectory
    /// parameterized by its own velocity.
    double radius_from_velocity(double v) const {
        if (kind != BranchKind::ElectricSphere)
            throw UnsupportedError("radius_from_velocity: defined for the electric sphere");
        const double vm = v_max();
        if (std::isnan(v) || v < 0.0 || v >= vm)
            throw RangeError("radius_from_velocity: need 0 <= v < v_max");
        const double eta = v / vm;
        return r0 / (1.0 - eta * eta);
    }

    /// Time of arrival at the center (gravity branches only).
    double collapse_time() const {
        if (!is_gravity(kind))
            throw UnsupportedError("collapse_time: electric layers never collapse");
        if (!(lam > 0.0)) throw SingularError("collapse_time: lambda = 0");
        return max_scaled_time(kind) / lam;
    }
};

/// The layer through Lagrangian label r0 of the given scenario.
inline Characteristic characteristic_at(const RadialProfile& profile,
                                        const PhysicsParams& params, double r0) {
    return {r0, layer_rate(profile, params, r0), branch_kind(params)};
}

/// Maximum front velocity from energy conservation: the full electrostatic
/// energy of a charge q against charge Q from separation r_min, converted
/// to kinetic energy: sqrt(q Q / (2 pi eps0 m r_min)).
inline double v_max_energy(double q, double Q, double m, double r_min, double eps0) {
    if (!(q > 0.0 && Q > 0.0 && m > 0.0 && r_min > 0.0 && eps0 > 0.0))
        throw DomainError("v_max_energy: all arguments must be positive");
    return std::sqrt(q * Q / (2.0 * std::numbers::pi * eps0 * m * r_min));
}

/// Classical electron radius e^2 / (4 pi eps0 m_e c^2).
inline double classical_electron_radius(double eps0, double e, double m_e, double c) {
    if (!(eps0 > 0.0 && e > 0.0 && m_e > 0.0 && c > 0.0))
        throw DomainError("classical_electron_radius: all arguments must be positive");
    return e * e / (4.0 * std::numbers::pi * eps0 * m_e * c * c);
}

/// Simultaneous-arrival time T0 = (pi/2) sqrt(3 nu0 / (2 rho0)) of a
/// uniform self-gravitating sphere; identical for every layer.
inline double collapse_time(const RadialProfile& profile, const PhysicsParams& params) {
    const auto* uni = std::get_if<UniformProfile>(&profile);
    if (!uni || params.interaction != Interaction::Gravity ||
        params.symmetry != Symmetry::Sphere)
        throw UnsupportedError("collapse_time: defined for the uniform gravity sphere");
    return std::numbers::pi / 2.0 * std::sqrt(1.5 * params.nu0 / uni->rho0);
}

/// Jacobian of the Eulerian map, J(r,t) = d/dr [ r P(lambda(r) t) ]
///                                      = P + r P'(lambda t) lambda'(r) t.
/// J(r,0) = 1; the first zero in t marks the characteristic crossing where
/// the density (whose denominator this is) diverges.
inline double jacobian(const RadialProfile& profile, const PhysicsParams& params,
                       double r, double t) {
    if (std::isnan(t) || t < 0.0) throw DomainError("jacobian: t must be >= 0");
    if (t == 0.0) return 1.0;
    const BranchKind kind = branch_kind(params);
    const double lam = layer_rate(profile, params, r);
    if (lam == 0.0) return 1.0;  // static void layer
    const double p = radius_ratio(kind, lam * t);
    const double slope = ratio_slope_from_value(kind, p);
    const double lamp = layer_rate_slope(profile, params, r);
    return p + r * slope * lamp * t;
}

/// First characteristic crossing over a label grid.
struct ShockReport {
    double t_star;   ///< earliest crossing time
    double r_star;   ///< Lagrangian label of the crossing
    double R_star;   ///< Eulerian radius at (r_star, t_star)
    BranchKind kind;
    bool focal;      ///< true when "crossing" is simultaneous arrival at R = 0
};

namespace detail {

// First zero of J(r, .) in (0, t_cap], or +inf if J stays positive.
// J(., 0) = 1 and J enters the negative range monotonically near onset, so
// a geometric sweep + bisection brackets the first zero.
inline double first_crossing_time(const RadialProfile& profile,
                                  const PhysicsParams& params, double r, double t_cap) {
    const auto J = [&](double t) { return jacobian(profile, params, r, t); };
    const int n_sweep = 400;
    const double t_lo_first = t_cap * 1e-6;
    double t_prev = 0.0;
    const double ratio = std::pow(t_cap / t_lo_first, 1.0 / (n_sweep - 1));
    double t = t_lo_first;
    for (int i = 0; i < n_sweep; ++i) {
        if (J(t) <= 0.0)
            return bisect(J, t_prev, t, 1e-13);
        t_prev = t;
        t = std::min(t * ratio, t_cap);
        if (t <= t_prev) break;
    }
    return std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Scan a sorted label grid (inside the profile support) for the earliest
/// characteristic crossing before t_max. Returns empty when none exists.
///
/// Gravity only: when no genuine crossing happens but whole layers reach the
/// center before t_max, the result is flagged `focal` with R_star = 0 and
/// r_star the innermost label attaining the minimal collapse time (for a
/// uniform sphere every layer collapses at T0 simultaneously, so r_star
/// degenerates to the first grid label).
inline std::optional<ShockReport> shock_onset(const RadialProfile& profile,
                                              const PhysicsParams& params,
                                              std::span<const double> r_grid,
                                              double t_max = 0.0) {
    if (r_grid.size() < 32)
        throw ConfigError("shock_onset: need at least 32 labels");
    const BranchKind kind = branch_kind(params);

    if (t_max <= 0.0) {
        // default horizon: 10 / median lambda over the grid
        std::vector<double> lams;
        lams.reserve(r_grid.size());
        for (double r : r_grid) lams.push_back(layer_rate(profile, params, r));
        std::nth_element(lams.begin(), lams.begin() + lams.size() / 2, lams.end());
        const double med = lams[lams.size() / 2];
        if (!(med > 0.0)) return std::nullopt;
        t_max = 10.0 / med;
    }

    const auto cap_for = [&](double r) {
        if (!is_gravity(kind)) return t_max;
        const double tc = characteristic_at(profile, params, r).collapse_time();
        return std::min(t_max, tc * (1.0 - 1e-9));
    };
    const auto crossing = [&](double r) {
        return detail::first_crossing_time(profile, params, r, cap_for(r));
    };

    std::vector<double> t_first(r_grid.size());
    size_t best = r_grid.size();
    for (size_t i = 0; i < r_grid.size(); ++i) {
        t_first[i] = crossing(r_grid[i]);
        if (std::isfinite(t_first[i]) &&
            (best == r_grid.size() || t_first[i] < t_first[best]))
            best = i;
    }

    if (best < r_grid.size()) {
        const double lo = r_grid[best > 0 ? best - 1 : best];
        const double hi = r_grid[best + 1 < r_grid.size() ? best + 1 : best];
        double r_star = r_grid[best];
        if (hi > lo) r_star = golden_minimize(crossing, lo, hi, 1e-10);
        double t_star = crossing(r_star);
        if (!(std::isfinite(t_star)) || t_star > t_first[best]) {
            r_star = r_grid[best];  // refinement left the basin; keep grid point
            t_star = t_first[best];
        }
        const double R_star = characteristic_at(profile, params, r_star).radius(t_star);
        return ShockReport{t_star, r_star, R_star, kind, false};
    }

    if (is_gravity(kind)) {
        size_t ic = r_grid.size();
        double tc_min = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < r_grid.size(); ++i) {
            const double tc = characteristic_at(profile, params, r_grid[i]).collapse_time();
            if (tc < tc_min * (1.0 - 1e-12)) { tc_min = tc; ic = i; }
        }
        if (ic < r_grid.size() && tc_min <= t_max)
            return ShockReport{tc_min, r_grid[ic], 0.0, kind, true};
    }
    return std::nullopt;
}

}  // namespace mocflow
