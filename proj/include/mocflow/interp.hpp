#pragma once

/// @file interp.hpp
/// @brief Shape-preserving cubic interpolation (Fritsch-Carlson / PCHIP).

#include <algorithm>
#include <cmath>
#include <vector>

#include "mocflow/errors.hpp"

namespace mocflow {

/// Monotone cubic Hermite interpolant through (x, y) nodes with strictly
/// increasing x. Node slopes follow the Fritsch-Carlson limiter, so the
/// interpolant never overshoots the data on monotone stretches.
class MonotoneCubic {
  public:
    MonotoneCubic(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw ConfigError("MonotoneCubic: need >= 2 matching nodes");
        for (size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1]))
                throw ConfigError("MonotoneCubic: x must be strictly increasing");

        std::vector<double> h(n - 1), delta(n - 1);
        for (size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            delta[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        m_.assign(n, 0.0);
        if (n == 2) {
            m_[0] = m_[1] = delta[0];
        } else {
            m_[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
            m_[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
            for (size_t i = 1; i + 1 < n; ++i) {
                if (delta[i - 1] == 0.0 || delta[i] == 0.0 ||
                    (delta[i - 1] > 0) != (delta[i] > 0)) {
                    m_[i] = 0.0;
                } else {
                    const double w1 = 2.0 * h[i] + h[i - 1];
                    const double w2 = h[i] + 2.0 * h[i - 1];
                    m_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
                }
            }
        }
    }

    double operator()(double x) const {
        const auto [i, t, h] = locate(x);
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * m_[i] +
               (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h * m_[i + 1];
    }

    double prime(double x) const {
        const auto [i, t, h] = locate(x);
        const double t2 = t * t;
        return ((6 * t2 - 6 * t) * y_[i] + (3 * t2 - 4 * t + 1) * h * m_[i] +
                (-6 * t2 + 6 * t) * y_[i + 1] + (3 * t2 - 2 * t) * h * m_[i + 1]) /
               h;
    }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

  private:
    static double edge_slope(double h0, double h1, double d0, double d1) {
        // three-point one-sided estimate with the usual shape clamp
        double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d0 == 0.0 || (m > 0) != (d0 > 0)) return 0.0;
        if ((d0 > 0) != (d1 > 0) && std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return m;
    }

    struct Cell { size_t i; double t; double h; };
    Cell locate(double x) const {
        if (std::isnan(x) || x < x_.front() || x > x_.back())
            throw DomainError("MonotoneCubic: query outside node range");
        size_t i = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
        i = std::clamp<size_t>(i, 1, x_.size() - 1) - 1;
        const double h = x_[i + 1] - x_[i];
        return {i, (x - x_[i]) / h, h};
    }

    std::vector<double> x_, y_;
    std::vector<double> m_;  // node slopes
};

}  // namespace mocflow
