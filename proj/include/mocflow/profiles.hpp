#pragma once

/// @file profiles.hpp
/// @brief Initial radial density profiles and the per-layer coefficients
/// gamma(R0), lambda(R0), lambda'(R0) they induce.
///
/// Units are SI throughout. All tests and the built-in presets use the
/// nondimensional choice delta = eps0 = nu0 = hbar = mass = 1, which removes
/// every constant from the layer equations.

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <type_traits>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mocflow/branch.hpp"
#include "mocflow/errors.hpp"
#include "mocflow/interp.hpp"

namespace mocflow {

enum class Symmetry { Sphere, Cylinder };
enum class Interaction { Electric, Gravity, Combined };

/// Physical constants of a scenario. `delta` is the charge-to-mass ratio
/// q/m of the carriers; `nu0` = 1/(4 pi k_g) plays the role of a
/// gravitational permittivity. Combined interaction has no closed-form
/// branch and is accepted only by kappa() in the validator.
struct PhysicsParams {
    Symmetry symmetry = Symmetry::Sphere;
    Interaction interaction = Interaction::Electric;
    double delta = 1.0;          // q/m
    double eps0 = 1.0;           // vacuum permittivity
    double nu0 = 1.0;            // 1/(4 pi k_g)
    double hbar = 1.0;
    double particle_mass = 1.0;

    static PhysicsParams nondimensional(Symmetry s, Interaction i) {
        return PhysicsParams{s, i, 1.0, 1.0, 1.0, 1.0, 1.0};
    }

    void validate() const {
        if (!(eps0 > 0.0)) throw ConfigError("PhysicsParams: eps0 must be > 0");
        if (!(nu0 > 0.0)) throw ConfigError("PhysicsParams: nu0 must be > 0");
        if (!(particle_mass > 0.0)) throw ConfigError("PhysicsParams: mass must be > 0");
        if (!(hbar > 0.0)) throw ConfigError("PhysicsParams: hbar must be > 0");
    }
};

/// Closed-form branch selected by (interaction, symmetry).
inline BranchKind branch_kind(const PhysicsParams& p) {
    if (p.interaction == Interaction::Combined)
        throw UnsupportedError("no closed-form branch for combined interaction");
    if (p.interaction == Interaction::Electric)
        return p.symmetry == Symmetry::Sphere ? BranchKind::ElectricSphere
                                              : BranchKind::ElectricCylinder;
    return p.symmetry == Symmetry::Sphere ? BranchKind::GravitySphere
                                          : BranchKind::GravityCylinder;
}

/// rho0(r) = rho0 on [0, r_max], 0 beyond.
struct UniformProfile {
    double rho0;
    double r_max;
};

/// rho0(r) = total/(2 pi r^2) * rho_n(2r) with rho_n the lognormal density
/// of parameters (mu, sigma). The spherical cumulative integrates to
/// `total` as R0 -> inf.
struct LognormalProfile {
    double mu;
    double sigma;
    double total;
};

/// Monotone-cubic interpolant through sorted (r, rho0) nodes; zero density
/// outside the node range.
class TabulatedProfile {
  public:
    TabulatedProfile(std::vector<double> r, std::vector<double> rho) {
        if (r.size() != rho.size() || r.size() < 2)
            throw ConfigError("tabulated profile needs >= 2 (r, rho0) nodes");
        for (size_t i = 0; i < r.size(); ++i) {
            if (rho[i] < 0.0) throw ConfigError("tabulated profile: rho0 < 0");
            if (i > 0 && !(r[i] > r[i - 1]))
                throw ConfigError("tabulated profile: r nodes must be strictly increasing");
        }
        if (!(r.front() >= 0.0)) throw ConfigError("tabulated profile: r < 0");
        nodes_r_ = r;
        nodes_rho_ = rho;
        interp_ = std::make_shared<MonotoneCubic>(std::move(r), std::move(rho));
    }

    double density(double r) const {
        if (r < nodes_r_.front() || r > nodes_r_.back()) return 0.0;
        return std::max((*interp_)(r), 0.0);
    }

    const std::vector<double>& nodes_r() const { return nodes_r_; }
    const std::vector<double>& nodes_rho() const { return nodes_rho_; }

  private:
    std::vector<double> nodes_r_, nodes_rho_;
    std::shared_ptr<MonotoneCubic> interp_;
};

using RadialProfile = std::variant<UniformProfile, LognormalProfile, TabulatedProfile>;

/// Initial density rho0(r).
inline double initial_density(const RadialProfile& profile, double r) {
    return std::visit(
        [r](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, UniformProfile>) {
                if (r < 0.0) throw DomainError("initial_density: r < 0");
                return r <= p.r_max ? p.rho0 : 0.0;
            } else if constexpr (std::is_same_v<T, LognormalProfile>) {
                if (r <= 0.0)
                    throw DomainError("initial_density: lognormal needs r > 0");
                const double s = 2.0 * r;
                const double z = (std::log(s) - p.mu) / p.sigma;
                const double rho_n = std::exp(-0.5 * z * z) /
                                     (std::sqrt(2.0 * std::numbers::pi) * p.sigma * s);
                return p.total / (2.0 * std::numbers::pi * r * r) * rho_n;
            } else {
                if (r < 0.0) throw DomainError("initial_density: r < 0");
                return p.density(r);
            }
        },
        profile);
}

namespace detail {

inline double shell_weight(Symmetry s, double x) {
    return s == Symmetry::Sphere ? 4.0 * std::numbers::pi * x * x
                                 : 2.0 * std::numbers::pi * x;
}

inline double integrate_tabulated(const TabulatedProfile& p, Symmetry sym, double R0) {
    const auto& r = p.nodes_r();
    const auto f = [&](double x) { return p.density(x) * shell_weight(sym, x); };
    double acc = 0.0;
    const double upper = std::min(R0, r.back());
    for (size_t i = 0; i + 1 < r.size() && r[i] < upper; ++i) {
        const double b = std::min(r[i + 1], upper);
        acc += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            f, r[i], b, 8, 1e-13);
    }
    return acc;
}

}  // namespace detail

/// Charge (or mass) enclosed by the layer of initial radius R0:
/// 4 pi int_0^R0 rho0 x^2 dx for a sphere, 2 pi int_0^R0 rho0 x dx per unit
/// length for a cylinder. Closed forms where available.
inline double enclosed(const RadialProfile& profile, Symmetry sym, double R0) {
    if (std::isnan(R0) || R0 < 0.0) throw DomainError("enclosed: R0 must be >= 0");
    if (R0 == 0.0) return 0.0;
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, UniformProfile>) {
                const double a = std::min(R0, p.r_max);
                if (sym == Symmetry::Sphere)
                    return 4.0 * std::numbers::pi / 3.0 * p.rho0 * a * a * a;
                return std::numbers::pi * p.rho0 * a * a;
            } else if constexpr (std::is_same_v<T, LognormalProfile>) {
                const double sq2 = std::numbers::sqrt2;
                if (sym == Symmetry::Sphere)
                    return 0.5 * p.total *
                           (1.0 + std::erf((std::log(2.0 * R0) - p.mu) / (p.sigma * sq2)));
                // cylindrical moment: int rho_n(s)/s ds has the same erf form
                // shifted by sigma^2 and scaled by exp(sigma^2/2 - mu)
                return 0.5 * p.total * std::exp(0.5 * p.sigma * p.sigma - p.mu) *
                       (1.0 + std::erf((std::log(2.0 * R0) - p.mu + p.sigma * p.sigma) /
                                       (p.sigma * sq2)));
            } else {
                return detail::integrate_tabulated(p, sym, R0);
            }
        },
        profile);
}

/// Total charge/mass of the profile under the given symmetry.
inline double total_amount(const RadialProfile& profile, Symmetry sym) {
    return enclosed(profile, sym, std::numeric_limits<double>::infinity());
}

/// Force coefficient gamma(R0) of the layer ODE R'' = +-gamma / R^p:
/// delta * Q(R0) / (4 pi eps0) for the electric sphere, with 2 pi in the
/// cylinder case, and Q -> M, delta/eps0 -> 1/nu0 for gravity. Always >= 0;
/// the force sign lives in the branch kind.
inline double force_coefficient(const RadialProfile& profile, const PhysicsParams& params,
                                double R0) {
    params.validate();
    if (!(R0 > 0.0)) throw DomainError("force_coefficient: R0 must be > 0");
    const double amount = enclosed(profile, params.symmetry, R0);
    const double geom = params.symmetry == Symmetry::Sphere ? 4.0 * std::numbers::pi
                                                            : 2.0 * std::numbers::pi;
    switch (params.interaction) {
        case Interaction::Electric:
            if (!(params.delta > 0.0))
                throw DomainError("force_coefficient: electric runs need delta > 0");
            return params.delta * amount / (geom * params.eps0);
        case Interaction::Gravity:
            return amount / (geom * params.nu0);
        case Interaction::Combined:
            throw UnsupportedError(
                "force_coefficient: combined interaction is validator-only (see kappa)");
    }
    throw UnsupportedError("force_coefficient: bad interaction");
}

/// Layer rate lambda(R0): sqrt(2 gamma)/R0^{3/2} (sphere) or
/// sqrt(2 gamma)/(2 R0) (cylinder). Constant in R0 for uniform profiles.
inline double layer_rate(const RadialProfile& profile, const PhysicsParams& params,
                         double R0) {
    const double g = force_coefficient(profile, params, R0);
    if (g == 0.0) return 0.0;
    if (params.symmetry == Symmetry::Sphere)
        return std::sqrt(2.0 * g) / (R0 * std::sqrt(R0));
    return std::sqrt(2.0 * g) / (2.0 * R0);
}

/// d lambda / dR0, from the closed forms
///   sphere:   (1/r) [ c rho0(r) / lambda - (3/2) lambda ]
///   cylinder: (1/r) [ c rho0(r) / (4 lambda) - lambda ]
/// with c = delta/eps0 (electric) or 1/nu0 (gravity).
inline double layer_rate_slope(const RadialProfile& profile, const PhysicsParams& params,
                               double R0) {
    const double lam = layer_rate(profile, params, R0);
    if (lam == 0.0)
        throw SingularError("layer_rate_slope: lambda vanishes (empty interior)");
    const double c = params.interaction == Interaction::Electric
                         ? params.delta / params.eps0
                         : 1.0 / params.nu0;
    const double rho = initial_density(profile, R0);
    if (params.symmetry == Symmetry::Sphere)
        return (c * rho / lam - 1.5 * lam) / R0;
    return (c * rho / (4.0 * lam) - lam) / R0;
}

}  // namespace mocflow
