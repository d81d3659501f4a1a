#pragma once

/// @file stencil.hpp
/// @brief Finite-difference stencils on nonuniform radial grids.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "mocflow/errors.hpp"
#include "mocflow/profiles.hpp"

namespace mocflow {

namespace detail {

// Fornberg weights: coefficients of y(x[0..n-1]) approximating the m-th
// derivative at z, exact for polynomials of degree n-1. (Math. Comp. 51,
// 1988.) n is small here (3 or 4), m <= 2.
template <int kMaxDeriv>
inline void fd_weights(double z, std::span<const double> x, int m,
                       std::span<double> w) {
    const int n = static_cast<int>(x.size());
    double c[8][kMaxDeriv + 1] = {};
    double c1 = 1.0, c4 = x[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0, c5 = c4;
        c4 = x[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    for (int j = 0; j < n; ++j) w[j] = c[j][m];
}

inline double apply_stencil(std::span<const double> y, size_t start,
                            std::span<const double> w) {
    double acc = 0.0;
    for (size_t j = 0; j < w.size(); ++j) acc += w[j] * y[start + j];
    return acc;
}

}  // namespace detail

/// First derivative on a (possibly nonuniform) grid: centered three-point
/// stencils inside, one-sided three-point at the ends. Second-order.
inline std::vector<double> gradient(std::span<const double> y, std::span<const double> x) {
    const size_t n = x.size();
    if (y.size() != n || n < 3) throw ConfigError("gradient: need >= 3 matching nodes");
    std::vector<double> g(n);
    double w[4];
    for (size_t i = 0; i < n; ++i) {
        const size_t s = std::clamp<size_t>(i, 1, n - 2) - 1;
        detail::fd_weights<2>(x[i], std::span(x).subspan(s, 3), 1, std::span(w, 3));
        g[i] = detail::apply_stencil(y, s, std::span<const double>(w, 3));
    }
    return g;
}

/// Radial Laplacian g'' + (d-1)/r g' of a symmetric grid function, d = 3
/// (sphere) or 2 (cylinder). Centered three-point stencils inside, one-
/// sided four-point at the ends (both second order). A node at exactly
/// r = 0 uses the symmetric limit d * g''(0) (g'(0) = 0 by parity).
inline std::vector<double> radial_laplacian(std::span<const double> g,
                                            std::span<const double> r, Symmetry sym) {
    const size_t n = r.size();
    if (g.size() != n || n < 4)
        throw ConfigError("radial_laplacian: need >= 4 matching nodes");
    const double d = sym == Symmetry::Sphere ? 3.0 : 2.0;
    const auto d1 = gradient(g, r);
    std::vector<double> out(n);
    double w[4];
    for (size_t i = 0; i < n; ++i) {
        double g2;
        if (i == 0 || i == n - 1) {
            const size_t s = i == 0 ? 0 : n - 4;
            detail::fd_weights<2>(r[i], std::span(r).subspan(s, 4), 2, std::span(w, 4));
            g2 = detail::apply_stencil(g, s, std::span<const double>(w, 4));
        } else {
            detail::fd_weights<2>(r[i], std::span(r).subspan(i - 1, 3), 2, std::span(w, 3));
            g2 = detail::apply_stencil(g, i - 1, std::span<const double>(w, 3));
        }
        out[i] = r[i] == 0.0 ? d * g2 : g2 + (d - 1.0) / r[i] * d1[i];
    }
    return out;
}

}  // namespace mocflow
