#pragma once

/// @file validator.hpp
/// @brief Independent numerical oracles for the closed forms: direct
/// adaptive integration of the layer ODE R'' = +-gamma/R^p, an Eulerian
/// first-order upwind solver for the coupled (F, v) system, and the
/// continuity-equation residual of sampled fields.
///
/// The Eulerian scheme is deliberately plain first-order upwind: its job is
/// cross-validation of an exact solution, so a known convergence order
/// matters more than accuracy per node.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "mocflow/density.hpp"
#include "mocflow/interp.hpp"
#include "mocflow/stencil.hpp"
#include "mocflow/profiles.hpp"

namespace mocflow {

enum class ForceSign { Repulsive, Attractive };
enum class ForceExponent { InverseSquare, InverseLinear };

/// Layer Cauchy problem R'' = sign * gamma / R^p, R(0) = r0, R'(0) = 0.
struct OdeProblem {
    double r0;
    double gamma;
    ForceSign sign;
    ForceExponent exponent;
};

/// The layer problem matching a (profile, params, r0) scenario.
inline OdeProblem ode_problem_for(const RadialProfile& profile,
                                  const PhysicsParams& params, double r0) {
    return {r0, force_coefficient(profile, params, r0),
            params.interaction == Interaction::Electric ? ForceSign::Repulsive
                                                        : ForceSign::Attractive,
            params.symmetry == Symmetry::Sphere ? ForceExponent::InverseSquare
                                                : ForceExponent::InverseLinear};
}

struct OdeSample {
    double t, radius, velocity;
};

struct OdeRun {
    OdeProblem problem;
    std::vector<OdeSample> samples;
    bool collapsed = false;
    double stop_time = std::numeric_limits<double>::quiet_NaN();
};

/// First integral of the layer ODE (kinetic + potential), conserved along
/// the motion.
inline double ode_energy(const OdeProblem& p, double R, double V) {
    const double s = p.sign == ForceSign::Repulsive ? 1.0 : -1.0;
    const double pot = p.exponent == ForceExponent::InverseSquare
                           ? p.gamma / R
                           : -p.gamma * std::log(R);
    return 0.5 * V * V + s * pot;
}

namespace detail {

using OdeState = std::array<double, 2>;  // (R, V)

inline auto ode_rhs(const OdeProblem& p) {
    const double s = p.sign == ForceSign::Repulsive ? 1.0 : -1.0;
    const bool inv_sq = p.exponent == ForceExponent::InverseSquare;
    return [s, inv_sq, gamma = p.gamma](const OdeState& x, OdeState& dx, double) {
        dx[0] = x[1];
        dx[1] = s * (inv_sq ? gamma / (x[0] * x[0]) : gamma / x[0]);
    };
}

inline double ode_time_scale(const OdeProblem& p) {
    const double pw = p.exponent == ForceExponent::InverseSquare ? 3.0 : 2.0;
    return std::sqrt(std::pow(p.r0, pw) / p.gamma);
}

inline void validate_ode_input(const OdeProblem& p, double tol) {
    if (!(p.r0 > 0.0)) throw DomainError("ode_oracle: r0 must be > 0");
    if (!(p.gamma >= 0.0)) throw DomainError("ode_oracle: gamma must be >= 0");
    if (!(tol >= 1e-12 && tol <= 1e-6))
        throw ConfigError("ode_oracle: tol outside [1e-12, 1e-6]");
}

}  // namespace detail

/// Integrate the layer ODE with an adaptive embedded Runge-Kutta pair
/// (Dormand-Prince 5(4), local error <= tol per step), sampling at every
/// accepted step. Attractive runs stop when R falls to 1e-6 * r0; the stop
/// time estimates the collapse time.
inline OdeRun ode_oracle(const OdeProblem& p, double t_end, double tol) {
    namespace odeint = boost::numeric::odeint;
    detail::validate_ode_input(p, tol);

    OdeRun run{p, {}, false, std::numeric_limits<double>::quiet_NaN()};
    run.samples.push_back({0.0, p.r0, 0.0});
    if (p.gamma == 0.0) {  // force-free layer never moves
        run.samples.push_back({t_end, p.r0, 0.0});
        return run;
    }

    const double threshold = 1e-6 * p.r0;
    const double t_scale = detail::ode_time_scale(p);
    auto rhs = detail::ode_rhs(p);
    auto stepper =
        odeint::make_controlled<odeint::runge_kutta_dopri5<detail::OdeState>>(tol, tol);
    odeint::runge_kutta_dopri5<detail::OdeState> plain;

    detail::OdeState x{p.r0, 0.0};
    double t = 0.0, dt = 1e-3 * t_scale;
    while (t < t_end) {
        const detail::OdeState x_prev = x;
        const double t_prev = t;
        double dt_try = std::min(dt, t_end - t);
        const auto result = stepper.try_step(rhs, x, t, dt_try);
        if (result == odeint::fail) {
            dt = dt_try;
            if (dt < 1e-14 * std::max(t_scale, t)) {
                if (p.sign == ForceSign::Attractive && x[0] < 1e-3 * p.r0) {
                    run.collapsed = true;  // wedged against the center
                    run.stop_time = t;
                    return run;
                }
                throw StepFailure("ode_oracle: step size underflow away from collapse");
            }
            continue;
        }
        dt = dt_try;

        if (p.sign == ForceSign::Attractive &&
            (!std::isfinite(x[0]) || x[0] <= threshold)) {
            // locate R = threshold inside the last step by bisection on a
            // single plain RK step from the pre-step state
            const double h_max = t - t_prev;
            double lo = 0.0, hi = h_max;
            detail::OdeState x_hit = x;
            for (int it = 0; it < 80; ++it) {
                const double h = 0.5 * (lo + hi);
                detail::OdeState xe = x_prev;
                plain.do_step(rhs, xe, t_prev, h);
                if (!std::isfinite(xe[0]) || xe[0] <= threshold) {
                    hi = h;
                    x_hit = xe;
                } else {
                    lo = h;
                }
                if (hi - lo < 1e-14 * h_max) break;
            }
            run.collapsed = true;
            run.stop_time = t_prev + hi;
            run.samples.push_back({run.stop_time, std::max(x_hit[0], 0.0), x_hit[1]});
            return run;
        }
        run.samples.push_back({t, x[0], x[1]});
    }
    return run;
}

/// Integrate the layer ODE and report (R, V) at the given ascending times.
inline std::vector<OdeSample> ode_states_at(const OdeProblem& p,
                                            std::span<const double> times, double tol) {
    namespace odeint = boost::numeric::odeint;
    detail::validate_ode_input(p, tol);
    std::vector<OdeSample> out;
    out.reserve(times.size());
    if (p.gamma == 0.0) {
        for (double t : times) out.push_back({t, p.r0, 0.0});
        return out;
    }
    auto rhs = detail::ode_rhs(p);
    auto stepper =
        odeint::make_controlled<odeint::runge_kutta_dopri5<detail::OdeState>>(tol, tol);
    detail::OdeState x{p.r0, 0.0};
    double t = 0.0;
    const double dt0 = 1e-3 * detail::ode_time_scale(p);
    for (double target : times) {
        if (!(target >= t)) throw DomainError("ode_states_at: times must ascend");
        if (target > t) {
            odeint::integrate_adaptive(stepper, rhs, x, t, target, dt0);
            t = target;
        }
        out.push_back({t, x[0], x[1]});
    }
    return out;
}

/// Coupling constant of the unified Eulerian (F, v) system:
/// delta/eps0 (electric), -1/nu0 (gravity), or their sum (combined, with
/// the neutral point delta0 = eps0/nu0).
inline double kappa(const PhysicsParams& params) {
    params.validate();
    switch (params.interaction) {
        case Interaction::Electric: return params.delta / params.eps0;
        case Interaction::Gravity: return -1.0 / params.nu0;
        case Interaction::Combined:
            return params.delta / params.eps0 - 1.0 / params.nu0;
    }
    throw UnsupportedError("kappa: bad interaction");
}

/// State of the Eulerian cross-validation system
///   F_t + v F_r = 0,   v_t + v v_r = kappa S(r) F,
/// on a fixed grid with r[0] = 0 pinned to F = 0, v = 0.
///
/// S(r) here is 1/(4 pi r^2) for the sphere and 1/(2 pi r) for the
/// cylinder: F carries the full shell integral (4 pi int f x^2 dx), so the
/// geometric constant must sit in S for kappa * S * F to equal the
/// radial acceleration of the layer equations. With kappa = delta/eps0
/// (electric) this reduces exactly to R'' = delta Q(R)/(4 pi eps0 R^2).
struct EulerianState {
    double t = 0.0;
    std::vector<double> r;
    std::vector<double> bigF;
    std::vector<double> v;
    double kappa = 0.0;
    Symmetry s_kind = Symmetry::Sphere;
};

/// Initial state: F from the profile's enclosed amounts, fluid at rest.
inline EulerianState initial_eulerian_state(const RadialProfile& profile,
                                            const PhysicsParams& params,
                                            std::span<const double> r_grid) {
    if (r_grid.size() < 8 || r_grid.front() != 0.0)
        throw ConfigError("initial_eulerian_state: need >= 8 nodes with r[0] = 0");
    EulerianState s;
    s.r.assign(r_grid.begin(), r_grid.end());
    s.bigF.reserve(r_grid.size());
    for (double r : r_grid) s.bigF.push_back(enclosed(profile, params.symmetry, r));
    s.v.assign(r_grid.size(), 0.0);
    s.kappa = kappa(params);
    s.s_kind = params.symmetry;
    return s;
}

struct PdeRun {
    std::vector<EulerianState> snapshots;          ///< at the requested times
    std::vector<double> tracer_times;              ///< every snapshot time
    std::vector<std::vector<double>> tracer_pos;   ///< [snapshot][tracer]
    std::vector<std::vector<double>> tracer_F;     ///< interpolated F along tracers
    size_t steps = 0;
};

namespace detail {

inline double interp_linear(std::span<const double> x, std::span<const double> y,
                            double q) {
    if (q <= x.front()) return y.front();
    if (q >= x.back()) return y.back();
    const size_t i =
        std::upper_bound(x.begin(), x.end(), q) - x.begin() - 1;
    const double w = (q - x[i]) / (x[i + 1] - x[i]);
    return (1.0 - w) * y[i] + w * y[i + 1];
}

}  // namespace detail

/// March the Eulerian system to t_end with first-order upwind fluxes and
/// explicit Euler time stepping, dt = cfl * min(dr) / u_ref with u_ref an
/// a-priori bound on |v| from the initial forcing (refreshed if overtaken,
/// so the advective CFL condition always holds). Snapshots are emitted at
/// `snap_times`; passive tracers seeded at `tracer_r0` ride the computed
/// velocity field.
inline PdeRun pde_evolve(const EulerianState& init, double t_end, double cfl,
                         std::span<const double> snap_times,
                         std::span<const double> tracer_r0 = {}) {
    if (!(cfl > 0.0 && cfl < 1.0))
        throw CflError("pde_evolve: cfl must lie in (0, 1)");
    if (!(t_end >= init.t)) throw ConfigError("pde_evolve: t_end before initial time");

    const size_t n = init.r.size();
    const auto& r = init.r;
    double dr_min = std::numeric_limits<double>::infinity();
    for (size_t i = 1; i < n; ++i) dr_min = std::min(dr_min, r[i] - r[i - 1]);

    const auto S = [&](double rr) {
        return init.s_kind == Symmetry::Sphere
                   ? 1.0 / (4.0 * std::numbers::pi * rr * rr)
                   : 1.0 / (2.0 * std::numbers::pi * rr);
    };

    // velocity bound from the local free-fall/escape scale 2 |kappa| S F r
    double u_ref = 0.0;
    for (size_t i = 1; i < n; ++i) {
        u_ref = std::max(u_ref, std::abs(init.v[i]));
        u_ref = std::max(u_ref,
                         std::sqrt(2.0 * std::abs(init.kappa) * S(r[i]) *
                                   std::abs(init.bigF[i]) * r[i]));
    }
    if (u_ref == 0.0) u_ref = dr_min;  // frozen system; dt is arbitrary

    PdeRun run;
    EulerianState cur = init;
    std::vector<double> tracers(tracer_r0.begin(), tracer_r0.end());
    std::vector<double> newF(n), newV(n);

    std::vector<double> snaps(snap_times.begin(), snap_times.end());
    std::sort(snaps.begin(), snaps.end());
    size_t next_snap = 0;
    const auto emit = [&]() {
        run.snapshots.push_back(cur);
        run.tracer_times.push_back(cur.t);
        run.tracer_pos.push_back(tracers);
        std::vector<double> tf;
        tf.reserve(tracers.size());
        for (double p : tracers) tf.push_back(detail::interp_linear(cur.r, cur.bigF, p));
        run.tracer_F.push_back(std::move(tf));
    };

    while (true) {
        while (next_snap < snaps.size() && snaps[next_snap] <= cur.t * (1.0 + 1e-15)) {
            emit();
            ++next_snap;
        }
        if (cur.t >= t_end) break;

        double vmax = 0.0;
        for (double vi : cur.v) vmax = std::max(vmax, std::abs(vi));
        if (vmax > u_ref) u_ref = vmax;  // keep the CFL bound honest
        double dt = cfl * dr_min / u_ref;
        if (dt < 1e-13 * (t_end - init.t))
            throw CflError("pde_evolve: time step underflow (velocity blow-up)");
        dt = std::min(dt, t_end - cur.t);
        if (next_snap < snaps.size()) dt = std::min(dt, snaps[next_snap] - cur.t);

        newF[0] = 0.0;  // symmetry pin
        newV[0] = 0.0;
        for (size_t i = 1; i < n; ++i) {
            const double vi = cur.v[i];
            double dFdr, dvdr;
            if (vi >= 0.0) {
                const double h = r[i] - r[i - 1];
                dFdr = (cur.bigF[i] - cur.bigF[i - 1]) / h;
                dvdr = (cur.v[i] - cur.v[i - 1]) / h;
            } else if (i + 1 < n) {
                const double h = r[i + 1] - r[i];
                dFdr = (cur.bigF[i + 1] - cur.bigF[i]) / h;
                dvdr = (cur.v[i + 1] - cur.v[i]) / h;
            } else {
                dFdr = 0.0;  // outflow ghost copies the boundary value
                dvdr = 0.0;
            }
            newF[i] = cur.bigF[i] - dt * vi * dFdr;
            newV[i] = cur.v[i] - dt * vi * dvdr + dt * cur.kappa * S(r[i]) * cur.bigF[i];
        }
        for (double& p : tracers)
            p += dt * detail::interp_linear(cur.r, cur.v, p);
        cur.bigF.swap(newF);
        cur.v.swap(newV);
        cur.t += dt;
        ++run.steps;
    }
    if (run.snapshots.empty() || run.snapshots.back().t < cur.t) emit();
    return run;
}

/// Normalized continuity residual max_i |df/dt + (1/r^d) d_r(r^d f v)|
/// between two snapshots on the same label grid, scaled by max(f)/time_scale.
///
/// Both snapshots sample the same labels, so the forward difference of f at
/// a shared index is the material derivative Df/Dt, and the residual is
/// evaluated through the identity
///   f_t + (1/r^d) (r^d f v)_r = Df/Dt + f (v_r + d v / r),
/// which avoids interpolating one snapshot onto the other's radii.
inline double continuity_residual(const FieldSnapshot& a, const FieldSnapshot& b,
                                  Symmetry sym, double time_scale) {
    if (a.r.size() < 5 || b.r.size() != a.r.size())
        throw ConfigError("continuity_residual: need matching label grids");
    const double dt = b.t - a.t;
    if (!(dt != 0.0)) throw ConfigError("continuity_residual: coincident times");

    const auto dv = gradient(a.v, a.r);
    const double d = sym == Symmetry::Sphere ? 2.0 : 1.0;
    double fmax = 0.0;
    for (double fi : a.f) fmax = std::max(fmax, fi);

    double worst = 0.0;
    for (size_t i = 1; i + 1 < a.r.size(); ++i) {
        const double material = (b.f[i] - a.f[i]) / dt;
        const double stretch = a.f[i] * (dv[i] + d * a.v[i] / a.r[i]);
        worst = std::max(worst, std::abs(material + stretch));
    }
    return worst * time_scale / fmax;
}

}  // namespace mocflow
