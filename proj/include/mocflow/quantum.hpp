#pragma once

/// @file quantum.hpp
/// @brief Reconstruction of the quantum objects carried by a laminar radial
/// probability flow: velocity field, wave-function phase, wave function,
/// and the Schrodinger potential.
///
/// With the density f(r,t) and flow velocity v(r,t) known exactly from the
/// characteristics, the laminar (curl-free) flow determines the phase
/// through v = -2 alpha grad(phi), alpha = -hbar/(2m); the wave function is
/// Psi = sqrt(f) e^{i phi}, and the potential follows from
///   U = -(1/beta) { phi_t + alpha [ Lap(sqrt f)/sqrt f - (grad phi)^2 ] },
/// beta = 1/hbar. The gauge is phi(0, t) = 0, which fixes U up to an
/// additive function of time; compare U across radii, not absolutely.

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "mocflow/density.hpp"
#include "mocflow/stencil.hpp"

namespace mocflow {

struct QuantumParams {
    double hbar = 1.0;
    double mass = 1.0;

    double alpha() const { return -hbar / (2.0 * mass); }  // < 0
    double beta() const { return 1.0 / hbar; }             // > 0

    void validate() const {
        if (!(hbar > 0.0) || !(mass > 0.0))
            throw ConfigError("QuantumParams: hbar and mass must be > 0");
    }
};

/// All reconstructed grids of one instant.
struct QuantumFields {
    double t = 0.0;
    std::vector<double> r;
    std::vector<double> f;
    std::vector<double> v;
    std::vector<double> phi;
    std::vector<double> psi_re;
    std::vector<double> psi_im;
    std::vector<double> U;  ///< NaN where f is below the vacuum floor
};

/// Probability-flow velocity at Eulerian radii: the layer through each r is
/// identified by inverting the layer map, and its velocity is returned.
/// Purely radial (laminar flow, no vortical component).
inline std::vector<double> velocity_field(const RadialProfile& profile,
                                          const PhysicsParams& params,
                                          std::span<const double> r_grid, double t) {
    std::vector<double> v;
    v.reserve(r_grid.size());
    for (double r : r_grid) {
        if (r == 0.0 || t == 0.0) {
            v.push_back(0.0);
            continue;
        }
        const double r0 = label_at(profile, params, r, t);
        v.push_back(characteristic_at(profile, params, r0).velocity(t));
    }
    return v;
}

/// Wave-function phase phi(r) = -(1/(2 alpha)) * integral_0^r v dx by
/// cumulative trapezoid, gauge phi(0) = 0. The segment from 0 to the first
/// node uses v(0) = 0 (radial symmetry). Unwrapped: no mod-2pi reduction.
inline std::vector<double> phase_field(std::span<const double> v_grid,
                                       std::span<const double> r_grid,
                                       const QuantumParams& qp) {
    if (v_grid.size() != r_grid.size())
        throw ConfigError("phase_field: grid size mismatch");
    std::vector<double> phi(r_grid.size());
    const double coef = -0.5 / qp.alpha();
    double acc = 0.0, r_prev = 0.0, v_prev = 0.0;
    for (size_t i = 0; i < r_grid.size(); ++i) {
        acc += 0.5 * (v_prev + v_grid[i]) * (r_grid[i] - r_prev);
        phi[i] = coef * acc;
        r_prev = r_grid[i];
        v_prev = v_grid[i];
    }
    return phi;
}

/// Psi = sqrt(f) e^{i phi}, returned as (Re, Im) grids.
inline std::pair<std::vector<double>, std::vector<double>> wave_function(
    std::span<const double> f_grid, std::span<const double> phi_grid) {
    if (f_grid.size() != phi_grid.size())
        throw ConfigError("wave_function: grid size mismatch");
    std::vector<double> re(f_grid.size()), im(f_grid.size());
    for (size_t i = 0; i < f_grid.size(); ++i) {
        if (f_grid[i] < 0.0) throw DomainError("wave_function: f must be >= 0");
        const double amp = std::sqrt(f_grid[i]);
        re[i] = amp * std::cos(phi_grid[i]);
        im[i] = amp * std::sin(phi_grid[i]);
    }
    return {std::move(re), std::move(im)};
}

/// Schrodinger potential from (f, phi, phi_t) grids. Nodes where f sits
/// below the vacuum floor (1e-30) are undefined and marked NaN.
inline std::vector<double> potential_field(std::span<const double> f_grid,
                                           std::span<const double> phi_grid,
                                           std::span<const double> phi_t_grid,
                                           std::span<const double> r_grid,
                                           const QuantumParams& qp, Symmetry sym) {
    const size_t n = r_grid.size();
    if (f_grid.size() != n || phi_grid.size() != n || phi_t_grid.size() != n)
        throw ConfigError("potential_field: grid size mismatch");
    constexpr double kVacuumFloor = 1e-30;

    std::vector<double> amp(n);
    for (size_t i = 0; i < n; ++i) amp[i] = std::sqrt(std::max(f_grid[i], 0.0));
    const auto lap = radial_laplacian(amp, r_grid, sym);
    const auto dphi = gradient(phi_grid, r_grid);

    std::vector<double> U(n);
    const double alpha = qp.alpha(), beta = qp.beta();
    for (size_t i = 0; i < n; ++i) {
        if (!(f_grid[i] > kVacuumFloor)) {
            U[i] = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        const double bohm = lap[i] / amp[i];
        U[i] = -(phi_t_grid[i] + alpha * (bohm - dphi[i] * dphi[i])) / beta;
    }
    return U;
}

/// Full reconstruction at time t on the given Eulerian grid. phi_t comes
/// from the symmetric two-snapshot difference with half-width dt.
inline QuantumFields reconstruct_fields(const RadialProfile& profile,
                                        const PhysicsParams& params,
                                        const QuantumParams& qp,
                                        std::span<const double> r_grid, double t,
                                        double dt) {
    qp.validate();
    if (!(dt > 0.0) || !(t - dt >= 0.0))
        throw ConfigError("reconstruct_fields: need dt > 0 and t >= dt");
    QuantumFields out;
    out.t = t;
    out.r.assign(r_grid.begin(), r_grid.end());

    out.f.reserve(r_grid.size());
    for (double r : r_grid) {
        const double r0 = label_at(profile, params, r, t);
        out.f.push_back(advected_density(profile, params, r0, t).rho);
    }
    out.v = velocity_field(profile, params, r_grid, t);
    out.phi = phase_field(out.v, r_grid, qp);

    const auto v_lo = velocity_field(profile, params, r_grid, t - dt);
    const auto v_hi = velocity_field(profile, params, r_grid, t + dt);
    const auto phi_lo = phase_field(v_lo, r_grid, qp);
    const auto phi_hi = phase_field(v_hi, r_grid, qp);
    std::vector<double> phi_t(r_grid.size());
    for (size_t i = 0; i < r_grid.size(); ++i)
        phi_t[i] = (phi_hi[i] - phi_lo[i]) / (2.0 * dt);

    auto [re, im] = wave_function(out.f, out.phi);
    out.psi_re = std::move(re);
    out.psi_im = std::move(im);
    out.U = potential_field(out.f, out.phi, phi_t, r_grid, qp, params.symmetry);
    return out;
}

}  // namespace mocflow
