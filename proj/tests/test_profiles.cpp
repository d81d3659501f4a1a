#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "mocflow/profiles.hpp"
#include "oracles.hpp"

using namespace mocflow;
using Catch::Approx;

namespace {

PhysicsParams es_params() {
    return PhysicsParams::nondimensional(Symmetry::Sphere, Interaction::Electric);
}

double lognormal_density_oracle(double r, double mu, double sigma, double total) {
    const double s = 2.0 * r;
    const double rho_n = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma * s) *
                         std::exp(-std::pow(std::log(s) - mu, 2) / (2.0 * sigma * sigma));
    return total / (2.0 * std::numbers::pi * r * r) * rho_n;
}

}  // namespace

TEST_CASE("initial_density") {
    RadialProfile uni = UniformProfile{1.0, 1.0};
    CHECK(initial_density(uni, 0.5) == 1.0);
    CHECK(initial_density(uni, 0.0) == 1.0);
    CHECK(initial_density(uni, 2.0) == 0.0);
    CHECK_THROWS_AS(initial_density(uni, -0.1), DomainError);

    RadialProfile ln = LognormalProfile{0.0, 1.0, 1.0};
    // frozen from 40-digit evaluation of the closed form
    CHECK(initial_density(ln, 0.5) == Approx(0.25397454373696387914).epsilon(1e-14));
    CHECK(initial_density(ln, 1.0) == Approx(0.024967275610943127366).epsilon(1e-14));
    CHECK(initial_density(ln, 0.25) == Approx(1.5979056391003601514).epsilon(1e-14));
    CHECK_THROWS_AS(initial_density(ln, 0.0), DomainError);
    CHECK_THROWS_AS(initial_density(ln, -1.0), DomainError);
}

TEST_CASE("enclosed closed forms") {
    RadialProfile ball = UniformProfile{3.0 / (4.0 * std::numbers::pi), 1.0};
    CHECK(enclosed(ball, Symmetry::Sphere, 1.0) == Approx(1.0).epsilon(1e-15));
    CHECK(enclosed(ball, Symmetry::Sphere, 2.0) == Approx(1.0).epsilon(1e-15));
    CHECK(enclosed(ball, Symmetry::Sphere, 0.0) == 0.0);

    RadialProfile ln = LognormalProfile{0.0, 1.0, 1.0};
    CHECK(enclosed(ln, Symmetry::Sphere, 1e6) == Approx(1.0).epsilon(1e-12));
    CHECK(enclosed(ln, Symmetry::Sphere, 0.5) == Approx(0.5).epsilon(1e-14));
    CHECK(enclosed(ln, Symmetry::Sphere, 2.0) ==
          Approx(0.91717148099830151465).epsilon(1e-14));
    CHECK(total_amount(ln, Symmetry::Sphere) == Approx(1.0).epsilon(1e-15));

    RadialProfile rod = UniformProfile{1.0, 2.0};
    CHECK(enclosed(rod, Symmetry::Cylinder, 1.0) == Approx(std::numbers::pi));
    CHECK(enclosed(rod, Symmetry::Cylinder, 5.0) == Approx(4.0 * std::numbers::pi));

    CHECK_THROWS_AS(enclosed(ln, Symmetry::Sphere, -1.0), DomainError);
}

TEST_CASE("enclosed is nondecreasing and matches quadrature") {
    std::mt19937_64 gen = oracle::rng(41);
    std::uniform_real_distribution<double> mu_d(-1.0, 1.0), sig_d(0.3, 1.6), r_d(0.05, 4.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double mu = mu_d(gen), sigma = sig_d(gen), R0 = r_d(gen);
        RadialProfile ln = LognormalProfile{mu, sigma, 1.0};
        const double closed_s = enclosed(ln, Symmetry::Sphere, R0);
        const double quad_s = oracle::integrate(
            [&](double x) {
                return 4.0 * std::numbers::pi * x * x *
                       lognormal_density_oracle(x, mu, sigma, 1.0);
            },
            1e-9, R0, 1e-13);
        CHECK(closed_s == Approx(quad_s).epsilon(1e-10));

        const double closed_c = enclosed(ln, Symmetry::Cylinder, R0);
        const double quad_c = oracle::integrate(
            [&](double x) {
                return 2.0 * std::numbers::pi * x *
                       lognormal_density_oracle(x, mu, sigma, 1.0);
            },
            1e-9, R0, 1e-13);
        CHECK(closed_c == Approx(quad_c).epsilon(1e-9));
    }

    RadialProfile ln = LognormalProfile{0.0, 1.0, 1.0};
    double prev = 0.0;
    for (double r : oracle::logspace(1e-3, 1e3, 200)) {
        const double cur = enclosed(ln, Symmetry::Sphere, r);
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("force_coefficient") {
    const double rho0 = 2.0;
    RadialProfile uni = UniformProfile{rho0, 10.0};
    auto p = es_params();
    for (double r : {0.3, 1.0, 4.0})
        CHECK(force_coefficient(uni, p, r) ==
              Approx(p.delta * rho0 / p.eps0 * r * r * r / 3.0).epsilon(1e-14));

    auto pg = PhysicsParams::nondimensional(Symmetry::Sphere, Interaction::Gravity);
    CHECK(force_coefficient(uni, pg, 2.0) ==
          Approx(rho0 / pg.nu0 * 8.0 / 3.0).epsilon(1e-14));

    // empty interior -> zero coefficient
    RadialProfile shell =
        TabulatedProfile{{1.0, 1.25, 1.5, 1.75, 2.0}, {0.0, 0.0, 0.0, 0.0, 0.0}};
    CHECK(force_coefficient(shell, p, 0.5) == 0.0);

    auto pc = PhysicsParams::nondimensional(Symmetry::Sphere, Interaction::Combined);
    CHECK_THROWS_AS(force_coefficient(uni, pc, 1.0), UnsupportedError);
    CHECK_THROWS_AS(branch_kind(pc), UnsupportedError);
    CHECK_THROWS_AS(force_coefficient(uni, p, 0.0), DomainError);
}

TEST_CASE("layer_rate") {
    // 2 delta rho0 / (3 eps0) = 1  =>  lambda = 1 independent of R0
    RadialProfile uni = UniformProfile{1.5, 1.0};
    auto p = es_params();
    for (double r : {0.01, 0.2, 0.7, 1.0})
        CHECK(layer_rate(uni, p, r) == Approx(1.0).epsilon(1e-14));

    // beyond the support lambda decays as R0^{-3/2} with the full charge
    const double total = total_amount(uni, Symmetry::Sphere);
    for (double r : {1.5, 3.0, 8.0})
        CHECK(layer_rate(uni, p, r) ==
              Approx(std::sqrt(p.delta * total / (2.0 * std::numbers::pi * p.eps0)) /
                     (r * std::sqrt(r)))
                  .epsilon(1e-14));

    RadialProfile ln = LognormalProfile{0.0, 1.0, 1.0};
    CHECK(layer_rate(ln, p, 0.5) == Approx(0.79788456080286535588).epsilon(1e-14));
    // closed form of the lognormal rate
    for (double r : {0.2, 1.0, 3.0}) {
        const double expect = std::sqrt(
            p.delta * 1.0 / (4.0 * std::numbers::pi * p.eps0 * r * r * r) *
            (1.0 + std::erf(std::log(2.0 * r) / std::numbers::sqrt2)));
        CHECK(layer_rate(ln, p, r) == Approx(expect).epsilon(1e-14));
    }

    RadialProfile shell =
        TabulatedProfile{{1.0, 1.25, 1.5, 1.75, 2.0}, {0.0, 0.0, 0.0, 0.0, 0.0}};
    CHECK(layer_rate(shell, p, 0.5) == 0.0);

    // uniform cylinder: lambda = sqrt(delta rho0 / eps0) / 2, constant
    auto pcyl = PhysicsParams::nondimensional(Symmetry::Cylinder, Interaction::Electric);
    RadialProfile rod = UniformProfile{4.0, 1.0};
    for (double r : {0.1, 0.5, 1.0})
        CHECK(layer_rate(rod, pcyl, r) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("layer_rate_slope") {
    auto p = es_params();
    RadialProfile uni = UniformProfile{1.5, 1.0};
    for (double r : {0.1, 0.5, 0.9})
        CHECK(layer_rate_slope(uni, p, r) == Approx(0.0).margin(1e-12));

    auto pg = PhysicsParams::nondimensional(Symmetry::Sphere, Interaction::Gravity);
    CHECK(layer_rate_slope(uni, pg, 0.5) == Approx(0.0).margin(1e-12));

    RadialProfile ln = LognormalProfile{0.0, 1.0, 1.0};
    CHECK(layer_rate_slope(ln, p, 0.5) == Approx(-1.75703391004).epsilon(1e-9));
    for (double r : {0.1, 0.4, 1.3, 4.0}) {
        const double h = 1e-6 * r;
        const double fd = oracle::central_diff(
            [&](double x) { return layer_rate(ln, p, x); }, r, h);
        CHECK(layer_rate_slope(ln, p, r) == Approx(fd).epsilon(1e-5));
    }

    // cylinder form, checked against finite differences as well
    auto pcyl = PhysicsParams::nondimensional(Symmetry::Cylinder, Interaction::Electric);
    for (double r : {0.3, 0.8, 2.0}) {
        const double h = 1e-6 * r;
        const double fd = oracle::central_diff(
            [&](double x) { return layer_rate(ln, pcyl, x); }, r, h);
        CHECK(layer_rate_slope(ln, pcyl, r) == Approx(fd).epsilon(1e-5));
    }

    RadialProfile shell =
        TabulatedProfile{{1.0, 1.25, 1.5, 1.75, 2.0}, {0.0, 0.0, 0.0, 0.0, 0.0}};
    CHECK_THROWS_AS(layer_rate_slope(shell, p, 0.5), SingularError);
}

TEST_CASE("tabulated profile interpolation and integration") {
    auto f = [](double r) { return 1.0 / (1.0 + r * r); };
    std::vector<double> rs = oracle::linspace(0.0, 2.0, 41);
    std::vector<double> rhos;
    for (double r : rs) rhos.push_back(f(r));
    RadialProfile tab = TabulatedProfile{rs, rhos};

    for (double r : {0.11, 0.53, 1.07, 1.93})
        CHECK(initial_density(tab, r) == Approx(f(r)).epsilon(2e-4));
    CHECK(initial_density(tab, 2.5) == 0.0);

    // library integration (per-cell Gauss-Kronrod of the interpolant) vs a
    // Simpson pass over the same interpolant
    const double lib = enclosed(tab, Symmetry::Sphere, 1.7);
    const double simpson = oracle::integrate(
        [&](double x) { return 4.0 * std::numbers::pi * x * x * initial_density(tab, x); },
        0.0, 1.7, 1e-12);
    CHECK(lib == Approx(simpson).epsilon(1e-9));
}

TEST_CASE("params validation") {
    PhysicsParams p = es_params();
    p.eps0 = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = es_params();
    p.particle_mass = -1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK_THROWS_AS((TabulatedProfile{{0.0, 1.0, 0.5, 2.0}, {1.0, 1.0, 1.0, 1.0}}),
                    ConfigError);
    CHECK_THROWS_AS((TabulatedProfile{{0.0}, {1.0}}), ConfigError);
    CHECK_THROWS_AS((TabulatedProfile{{0.0, 1.0}, {1.0, -0.5}}), ConfigError);
}
