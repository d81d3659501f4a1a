#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mocflow/density.hpp"
#include "oracles.hpp"

using namespace mocflow;
using Catch::Approx;

namespace {

PhysicsParams nd(Symmetry s, Interaction i) { return PhysicsParams::nondimensional(s, i); }

// Eq-by-eq transcription of the printed density formulas, used as the
// independent route against the P^d * J form the library evaluates.
double printed_density(const RadialProfile& profile, const PhysicsParams& params,
                       double r, double t) {
    const BranchKind kind = branch_kind(params);
    const double rho0 = initial_density(profile, r);
    const double lam = layer_rate(profile, params, r);
    const double p = radius_ratio(kind, lam * t);
    const double c = params.interaction == Interaction::Electric
                         ? params.delta / params.eps0
                         : 1.0 / params.nu0;
    double denom;
    switch (kind) {
        case BranchKind::ElectricSphere:
            denom = p + t * std::sqrt((p - 1.0) / p) * (c * rho0 / lam - 1.5 * lam);
            return rho0 / (p * p * denom);
        case BranchKind::GravitySphere:
            denom = p - t * std::sqrt((1.0 - p) / p) * (rho0 * c / lam - 1.5 * lam);
            return rho0 / (p * p * denom);
        case BranchKind::ElectricCylinder:
            denom = p + 2.0 * t * std::sqrt(std::log(p)) * (c * rho0 / (4.0 * lam) - lam);
            return rho0 / (p * denom);
        case BranchKind::GravityCylinder:
            denom = p - 2.0 * t * std::sqrt(std::log(1.0 / p)) *
                            (rho0 * c / (4.0 * lam) - lam);
            return rho0 / (p * denom);
    }
    throw std::logic_error("bad kind");
}

}  // namespace

TEST_CASE("advected_density basics") {
    RadialProfile uni = UniformProfile{1.5, 1.0};  // lambda = 1
    auto pe = nd(Symmetry::Sphere, Interaction::Electric);

    SECTION("t = 0 returns the initial data") {
        RadialProfile ln = LognormalProfile{0.0, 1.0, 1.0};
        for (double r0 : {0.1, 0.4, 2.0}) {
            const auto [R, rho] = advected_density(ln, pe, r0, 0.0);
            CHECK(R == r0);
            CHECK(rho == Approx(initial_density(ln, r0)).epsilon(1e-15));
        }
    }
    SECTION("uniform electric sphere: doubled radius, density / 8") {
        const double tP2 = 2.295587149392638074;  // lambda*t with P = 2
        const auto [R, rho] = advected_density(uni, pe, 0.3, tP2);
        CHECK(R == Approx(0.6).epsilon(1e-12));
        CHECK(rho == Approx(1.5 / 8.0).epsilon(1e-12));
    }
    SECTION("uniform gravity sphere at lambda t = pi/3") {
        auto pg = nd(Symmetry::Sphere, Interaction::Gravity);
        const double p = 0.69386717451505293945;  // P_g(pi/3), frozen
        const auto [R, rho] = advected_density(uni, pg, 0.3, std::numbers::pi / 3.0);
        CHECK(R == Approx(0.3 * p).epsilon(1e-12));
        CHECK(rho == Approx(1.5 / (p * p * p)).epsilon(1e-12));
    }
}

TEST_CASE("printed formula and P^d * J formulation agree to 1e-12") {
    RadialProfile ln = LognormalProfile{0.0, 1.0, 1.0};
    for (auto [sym, inter, ts] :
         {std::tuple{Symmetry::Sphere, Interaction::Electric, 2.5},
          std::tuple{Symmetry::Cylinder, Interaction::Electric, 2.5},
          std::tuple{Symmetry::Sphere, Interaction::Gravity, 0.25},
          std::tuple{Symmetry::Cylinder, Interaction::Gravity, 0.25}}) {
        auto params = nd(sym, inter);
        INFO(branch_name(branch_kind(params)));
        for (double r0 : {0.2, 0.5, 1.0, 2.0}) {
            for (double frac : {0.2, 0.6, 1.0}) {
                const double t = ts * frac;
                const double lib = advected_density(ln, params, r0, t).rho;
                CHECK(lib == Approx(printed_density(ln, params, r0, t)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("uniform_sphere_density") {
    CHECK(uniform_sphere_density(2.0, 1.0, BranchKind::ElectricSphere, 0.0) == 2.0);
    CHECK(uniform_sphere_density(2.0, 1.0, BranchKind::ElectricSphere,
                                 2.295587149392638074) == Approx(0.25).epsilon(1e-12));
    // gravity: compression diverges approaching collapse
    const double near = std::numbers::pi / 2.0 - 1e-4;
    CHECK(uniform_sphere_density(1.0, 1.0, BranchKind::GravitySphere, near) > 1e6);
    CHECK_THROWS_AS(uniform_sphere_density(1.0, 1.0, BranchKind::GravitySphere, 2.0),
                    RangeError);
    CHECK_THROWS_AS(uniform_sphere_density(1.0, 1.0, BranchKind::ElectricCylinder, 1.0),
                    UnsupportedError);
}

TEST_CASE("uniform_sphere_scaled_time") {
    CHECK(uniform_sphere_scaled_time(1.0, BranchKind::ElectricSphere) == 0.0);
    CHECK(uniform_sphere_scaled_time(8.0, BranchKind::ElectricSphere) ==
          Approx(2.295587149392638074).epsilon(1e-12));
    CHECK(uniform_sphere_scaled_time(0.125, BranchKind::GravitySphere) ==
          Approx(1.2853981633974483096).epsilon(1e-12));

    SECTION("inverts uniform_sphere_density") {
        for (double tau : oracle::linspace(0.1, 6.0, 12)) {
            const double rho = uniform_sphere_density(1.0, 1.0, BranchKind::ElectricSphere, tau);
            CHECK(uniform_sphere_scaled_time(1.0 / rho, BranchKind::ElectricSphere) ==
                  Approx(tau).epsilon(1e-10));
        }
        for (double tau : oracle::linspace(0.1, 1.4, 10)) {
            const double rho = uniform_sphere_density(1.0, 1.0, BranchKind::GravitySphere, tau);
            CHECK(uniform_sphere_scaled_time(1.0 / rho, BranchKind::GravitySphere) ==
                  Approx(tau).epsilon(1e-10));
        }
    }
    CHECK_THROWS_AS(uniform_sphere_scaled_time(0.5, BranchKind::ElectricSphere), DomainError);
    CHECK_THROWS_AS(uniform_sphere_scaled_time(8.0, BranchKind::GravitySphere), DomainError);
}

TEST_CASE("sample_field") {
    SECTION("t = 0 reproduces the initial density") {
        RadialProfile ln = LognormalProfile{0.0, 1.0, 1.0};
        auto params = nd(Symmetry::Sphere, Interaction::Electric);
        const auto labels = oracle::logspace(0.05, 10.0, 64);
        const auto snap = sample_field(ln, params, labels, 0.0);
        REQUIRE(snap.valid);
        REQUIRE(snap.r.size() == labels.size());
        for (size_t i = 0; i < labels.size(); ++i) {
            CHECK(snap.r[i] == labels[i]);
            CHECK(snap.f[i] == Approx(initial_density(ln, labels[i])).epsilon(1e-14));
            CHECK(snap.v[i] == 0.0);
        }
    }
    SECTION("uniform electric sphere stays spatially uniform") {
        RadialProfile uni = UniformProfile{1.5, 1.0};
        auto params = nd(Symmetry::Sphere, Interaction::Electric);
        const auto labels = oracle::linspace(0.01, 1.0, 100);
        for (double t : {0.5, 1.0, 3.0}) {
            const auto snap = sample_field(uni, params, labels, t);
            REQUIRE(snap.valid);
            const double mean =
                std::accumulate(snap.f.begin(), snap.f.end(), 0.0) / snap.f.size();
            for (double fi : snap.f) CHECK(std::abs(fi - mean) <= 1e-9 * mean);
            CHECK(mean == Approx(uniform_sphere_density(1.5, 1.0,
                                                        BranchKind::ElectricSphere, t))
                              .epsilon(1e-10));
        }
    }
    SECTION("snapshot invariants") {
        RadialProfile ln = LognormalProfile{0.0, 1.0, 1.0};
        auto params = nd(Symmetry::Sphere, Interaction::Electric);
        const auto labels = oracle::logspace(0.02, 30.0, 200);
        for (double t : {1.0, 2.0, 3.0}) {
            const auto snap = sample_field(ln, params, labels, t);
            REQUIRE(snap.valid);
            CHECK(std::is_sorted(snap.r.begin(), snap.r.end()));
            CHECK(std::is_sorted(snap.bigF.begin(), snap.bigF.end()));
            for (double fi : snap.f) CHECK(fi >= 0.0);
            CHECK(snap.bigF.back() <= 1.0 + 1e-9);
        }
    }
    SECTION("density spikes approaching the crossing, then truncates past it") {
        RadialProfile ln = LognormalProfile{0.0, 1.0, 1.0};
        auto params = nd(Symmetry::Sphere, Interaction::Electric);
        const auto labels = oracle::logspace(0.02, 30.0, 400);
        const auto rep = shock_onset(ln, params, labels);
        REQUIRE(rep.has_value());

        const auto before = sample_field(ln, params, labels, rep->t_star * (1.0 - 1e-5));
        REQUIRE(before.valid);
        double rho0_peak = 0.0;
        for (double r0 : labels) rho0_peak = std::max(rho0_peak, initial_density(ln, r0));
        CHECK(*std::max_element(before.f.begin(), before.f.end()) > 10.0 * rho0_peak);

        const auto after = sample_field(ln, params, labels, rep->t_star * 1.05);
        CHECK_FALSE(after.valid);
        CHECK(after.r.size() < labels.size());

        CHECK_THROWS_AS(advected_density(ln, params, rep->r_star, rep->t_star * 1.05),
                        ShockError);
    }
}

TEST_CASE("distribution_function") {
    RadialProfile ln = LognormalProfile{0.0, 1.0, 1.0};
    auto params = nd(Symmetry::Sphere, Interaction::Electric);

    CHECK(distribution_function(ln, params, 0.0, 1.0) == 0.0);
    CHECK(distribution_function(ln, params, 500.0, 0.5) == Approx(1.0).epsilon(1e-9));

    SECTION("layer conservation, electric") {
        std::mt19937_64 gen = oracle::rng(11);
        std::uniform_real_distribution<double> r_d(std::log(0.05), std::log(5.0));
        std::uniform_real_distribution<double> t_d(0.0, 3.0);  // t* = 3.47
        for (int i = 0; i < 100; ++i) {
            const double r0 = std::exp(r_d(gen));
            const double t = t_d(gen);
            const double R = characteristic_at(ln, params, r0).radius(t);
            CHECK(distribution_function(ln, params, R, t) ==
                  Approx(enclosed(ln, Symmetry::Sphere, r0)).epsilon(1e-10));
        }
    }
    SECTION("layer conservation, gravity") {
        auto pg = nd(Symmetry::Sphere, Interaction::Gravity);
        RadialProfile uni = UniformProfile{1.5, 1.0};
        const double T0 = collapse_time(uni, pg);
        std::mt19937_64 gen = oracle::rng(12);
        std::uniform_real_distribution<double> r_d(0.05, 1.0), t_d(0.0, 0.9 * T0);
        for (int i = 0; i < 50; ++i) {
            const double r0 = r_d(gen), t = t_d(gen);
            const double R = characteristic_at(uni, pg, r0).radius(t);
            CHECK(distribution_function(uni, pg, R, t) ==
                  Approx(enclosed(uni, Symmetry::Sphere, r0)).epsilon(1e-10));
        }
    }
    SECTION("snapshot trapezoid reproduces the cumulative at the outer node") {
        RadialProfile uni = UniformProfile{1.5, 1.0};
        const auto labels = oracle::linspace(0.002, 1.0, 500);
        const auto snap = sample_field(uni, params, labels, 1.0);
        REQUIRE(snap.valid);
        double acc = 0.0;
        for (size_t i = 1; i < snap.r.size(); ++i) {
            const double a = snap.r[i - 1], b = snap.r[i];
            acc += 0.5 * (b - a) *
                   (4.0 * std::numbers::pi * a * a * snap.f[i - 1] +
                    4.0 * std::numbers::pi * b * b * snap.f[i]);
        }
        CHECK(acc == Approx(snap.bigF.back()).epsilon(1e-3));
    }
}
