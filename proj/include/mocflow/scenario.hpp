#pragma once

/// @file scenario.hpp
/// @brief Scenario configuration, built-in presets, and the simulate /
/// shock-scan / reconstruct / validate pipelines behind the CLI.
///
/// A scenario is one JSON document (flat sections: profile, constants,
/// grids, tolerances, output). Presets provide complete documents; a config
/// file and --override KEY=VALUE entries overlay them. Every artifact is
/// written deterministically: identical configs give byte-identical files.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mocflow/characteristics.hpp"
#include "mocflow/csvio.hpp"
#include "mocflow/density.hpp"
#include "mocflow/quantum.hpp"
#include "mocflow/validator.hpp"

namespace mocflow::scenario {

using nlohmann::json;

// ---------------------------------------------------------------------------
// configuration

struct ProfileSpec {
    std::string type = "uniform";  // uniform | lognormal | tabulated
    double rho0 = 1.5;             // uniform
    double r_max = 1.0;
    double mu = 0.0;               // lognormal
    double sigma = 1.0;
    double total = 1.0;
    std::string path;              // tabulated: CSV with header r,rho0

    RadialProfile build() const {
        if (type == "uniform") return UniformProfile{rho0, r_max};
        if (type == "lognormal") return LognormalProfile{mu, sigma, total};
        if (type == "tabulated") {
            const CsvTable t = read_csv(path);
            if (t.header.size() != 2 || t.header[0] != "r" || t.header[1] != "rho0")
                throw ConfigError("tabulated profile CSV needs header 'r,rho0'");
            return TabulatedProfile{t.columns[0], t.columns[1]};
        }
        throw ConfigError("unknown profile type '" + type + "'");
    }
};

struct GridSpec {
    int n_labels = 128;   ///< Lagrangian labels per snapshot
    int n_times = 9;      ///< snapshot instants in [0, t_max]
    double t_max = 0.0;   ///< 0: auto (10 / median lambda)
    double r_max = 0.0;   ///< outermost label; 0: auto from the profile
    double r_min = 0.0;   ///< innermost label; 0: auto
};

struct ToleranceSpec {
    double inversion = 1e-10;   ///< round-trip |P(F(x)) - x| bound
    double ode = 1e-12;         ///< ODE oracle local error per step
    double shock = 1e-6;        ///< |J| at the reported shock point
    double pde = 0.02;          ///< upwind-vs-closed-form velocity error
    double continuity = 1e-3;   ///< normalized continuity residual
};

struct ScenarioConfig {
    std::string symmetry = "sphere";        // sphere | cylinder
    std::string interaction = "electric";   // electric | gravity
    ProfileSpec profile;
    bool nondimensional = true;
    double delta = 1.0, eps0 = 1.0, nu0 = 1.0, hbar = 1.0, mass = 1.0;
    GridSpec grids;
    ToleranceSpec tolerances;
    std::string out_dir = "out";

    Symmetry sym() const {
        if (symmetry == "sphere") return Symmetry::Sphere;
        if (symmetry == "cylinder") return Symmetry::Cylinder;
        throw ConfigError("symmetry must be 'sphere' or 'cylinder'");
    }
    Interaction inter() const {
        if (interaction == "electric") return Interaction::Electric;
        if (interaction == "gravity") return Interaction::Gravity;
        throw ConfigError("interaction must be 'electric' or 'gravity'");
    }
    PhysicsParams params() const {
        if (nondimensional) return PhysicsParams::nondimensional(sym(), inter());
        return PhysicsParams{sym(), inter(), delta, eps0, nu0, hbar, mass};
    }

    void validate() const {
        (void)sym();
        (void)inter();
        params().validate();
        if (grids.n_labels < 8 || grids.n_times < 8)
            throw ConfigError("grids: all counts must be >= 8");
        if (grids.t_max < 0.0) throw ConfigError("grids.t_max must be > 0 (or 0 = auto)");
        const auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
        if (!in(tolerances.inversion, 1e-14, 1e-6))
            throw ConfigError("tolerances.inversion outside [1e-14, 1e-6]");
        if (!in(tolerances.ode, 1e-12, 1e-6))
            throw ConfigError("tolerances.ode outside [1e-12, 1e-6]");
        if (!in(tolerances.shock, 1e-12, 1e-3))
            throw ConfigError("tolerances.shock outside [1e-12, 1e-3]");
        if (!in(tolerances.pde, 1e-15, 0.5))
            throw ConfigError("tolerances.pde outside (0, 0.5]");
        if (!in(tolerances.continuity, 1e-15, 0.1))
            throw ConfigError("tolerances.continuity outside (0, 0.1]");
    }
};

inline void to_json(json& j, const ProfileSpec& p) {
    j = json{{"type", p.type}};
    if (p.type == "uniform") {
        j["rho0"] = p.rho0;
        j["r_max"] = p.r_max;
    } else if (p.type == "lognormal") {
        j["mu"] = p.mu;
        j["sigma"] = p.sigma;
        j["total"] = p.total;
    } else {
        j["path"] = p.path;
    }
}

inline void from_json(const json& j, ProfileSpec& p) {
    p.type = j.value("type", p.type);
    p.rho0 = j.value("rho0", p.rho0);
    p.r_max = j.value("r_max", p.r_max);
    p.mu = j.value("mu", p.mu);
    p.sigma = j.value("sigma", p.sigma);
    p.total = j.value("total", p.total);
    p.path = j.value("path", p.path);
}

inline void to_json(json& j, const GridSpec& g) {
    j = json{{"n_labels", g.n_labels}, {"n_times", g.n_times}, {"t_max", g.t_max},
             {"r_max", g.r_max},       {"r_min", g.r_min}};
}

inline void from_json(const json& j, GridSpec& g) {
    g.n_labels = j.value("n_labels", g.n_labels);
    g.n_times = j.value("n_times", g.n_times);
    g.t_max = j.value("t_max", g.t_max);
    g.r_max = j.value("r_max", g.r_max);
    g.r_min = j.value("r_min", g.r_min);
}

inline void to_json(json& j, const ToleranceSpec& t) {
    j = json{{"inversion", t.inversion}, {"ode", t.ode}, {"shock", t.shock},
             {"pde", t.pde},             {"continuity", t.continuity}};
}

inline void from_json(const json& j, ToleranceSpec& t) {
    t.inversion = j.value("inversion", t.inversion);
    t.ode = j.value("ode", t.ode);
    t.shock = j.value("shock", t.shock);
    t.pde = j.value("pde", t.pde);
    t.continuity = j.value("continuity", t.continuity);
}

inline void to_json(json& j, const ScenarioConfig& c) {
    j = json{{"symmetry", c.symmetry},
             {"interaction", c.interaction},
             {"profile", c.profile},
             {"constants",
              json{{"nondimensional", c.nondimensional},
                   {"delta", c.delta},
                   {"eps0", c.eps0},
                   {"nu0", c.nu0},
                   {"hbar", c.hbar},
                   {"mass", c.mass}}},
             {"grids", c.grids},
             {"tolerances", c.tolerances},
             {"output", json{{"dir", c.out_dir}}}};
}

inline void from_json(const json& j, ScenarioConfig& c) {
    c.symmetry = j.value("symmetry", c.symmetry);
    c.interaction = j.value("interaction", c.interaction);
    if (j.contains("profile")) j.at("profile").get_to(c.profile);
    if (j.contains("constants")) {
        const auto& k = j.at("constants");
        c.nondimensional = k.value("nondimensional", c.nondimensional);
        c.delta = k.value("delta", c.delta);
        c.eps0 = k.value("eps0", c.eps0);
        c.nu0 = k.value("nu0", c.nu0);
        c.hbar = k.value("hbar", c.hbar);
        c.mass = k.value("mass", c.mass);
    }
    if (j.contains("grids")) j.at("grids").get_to(c.grids);
    if (j.contains("tolerances")) j.at("tolerances").get_to(c.tolerances);
    if (j.contains("output")) c.out_dir = j.at("output").value("dir", c.out_dir);
}

// ---------------------------------------------------------------------------
// presets: the six canonical scenarios

inline std::vector<std::string> preset_names() {
    return {"uniform-electric-sphere",  "lognormal-electric-sphere",
            "uniform-gravity-sphere",   "lognormal-gravity-sphere",
            "uniform-electric-cylinder", "uniform-gravity-cylinder"};
}

/// All presets use the nondimensional constants; uniform densities are
/// chosen so lambda = 1 (rho0 = 3/2 for spheres, 4 for cylinders).
inline ScenarioConfig preset(const std::string& name) {
    ScenarioConfig c;
    c.out_dir = "out-" + name;
    if (name == "uniform-electric-sphere") {
        c.grids = {128, 9, 3.0, 1.0, 0.0};
    } else if (name == "lognormal-electric-sphere") {
        c.profile = {"lognormal", 0, 0, 0.0, 1.0, 1.0, ""};
        c.grids = {192, 9, 5.0, 30.0, 0.02};
    } else if (name == "uniform-gravity-sphere") {
        c.interaction = "gravity";
        c.grids = {128, 9, 2.0, 1.0, 0.0};
    } else if (name == "lognormal-gravity-sphere") {
        c.interaction = "gravity";
        c.profile = {"lognormal", 0, 0, 0.0, 1.0, 1.0, ""};
        c.grids = {192, 9, 0.5, 30.0, 0.01};
    } else if (name == "uniform-electric-cylinder") {
        c.symmetry = "cylinder";
        c.profile.rho0 = 4.0;
        c.grids = {128, 9, 3.0, 1.0, 0.0};
    } else if (name == "uniform-gravity-cylinder") {
        c.symmetry = "cylinder";
        c.interaction = "gravity";
        c.profile.rho0 = 4.0;
        c.grids = {128, 9, 1.0, 1.0, 0.0};
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    return c;
}

// ---------------------------------------------------------------------------
// derived grids

namespace detail {

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / double(n - 1);
    return v;
}

inline std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) v[i] = std::exp(a + (b - a) * i / double(n - 1));
    return v;
}

inline double support_radius(const RadialProfile& profile) {
    if (const auto* u = std::get_if<UniformProfile>(&profile)) return u->r_max;
    if (const auto* t = std::get_if<TabulatedProfile>(&profile))
        return t->nodes_r().back();
    return 0.0;  // lognormal: unbounded
}

}  // namespace detail

/// Lagrangian label grid of a scenario: linear over compact supports,
/// log-spaced for the lognormal profile.
inline std::vector<double> label_grid(const ScenarioConfig& cfg,
                                      const RadialProfile& profile) {
    const int n = cfg.grids.n_labels;
    const double support = detail::support_radius(profile);
    if (support > 0.0) {
        const double hi = cfg.grids.r_max > 0.0 ? std::min(cfg.grids.r_max, support)
                                                : support;
        const double lo = cfg.grids.r_min > 0.0 ? cfg.grids.r_min : hi / n;
        if (!(lo < hi)) throw ConfigError("label grid: need r_min < r_max");
        return detail::linspace(lo, hi, n);
    }
    const double hi = cfg.grids.r_max > 0.0 ? cfg.grids.r_max : 30.0;
    const double lo = cfg.grids.r_min > 0.0 ? cfg.grids.r_min : hi / 1500.0;
    if (!(lo < hi)) throw ConfigError("label grid: need r_min < r_max");
    return detail::logspace(lo, hi, n);
}

inline double median_rate(const RadialProfile& profile, const PhysicsParams& params,
                          std::span<const double> labels) {
    std::vector<double> lams;
    lams.reserve(labels.size());
    for (double r : labels) lams.push_back(layer_rate(profile, params, r));
    std::nth_element(lams.begin(), lams.begin() + lams.size() / 2, lams.end());
    return lams[lams.size() / 2];
}

struct TimePlan {
    std::vector<double> times;   ///< kept snapshot instants
    double t_max_requested;
    double t_limit;              ///< earliest shock/collapse bound (inf if none)
    std::optional<ShockReport> shock;
    std::optional<double> collapse;  ///< minimal collapse time over labels
    std::vector<std::string> warnings;
};

/// Snapshot times: n_times instants spanning [0, t_max], truncated at the
/// last instant strictly before any shock or collapse.
inline TimePlan plan_times(const ScenarioConfig& cfg, const RadialProfile& profile,
                           const PhysicsParams& params,
                           std::span<const double> labels) {
    TimePlan plan;
    const double lam_med = median_rate(profile, params, labels);
    plan.t_max_requested =
        cfg.grids.t_max > 0.0 ? cfg.grids.t_max
                              : (lam_med > 0.0 ? 10.0 / lam_med : 1.0);

    plan.t_limit = std::numeric_limits<double>::infinity();
    if (labels.size() >= 32) {  // below that the scan has nothing to refine on
        plan.shock = shock_onset(profile, params, labels, plan.t_max_requested * 1.001);
        if (plan.shock) plan.t_limit = plan.shock->t_star;
    }
    if (params.interaction == Interaction::Gravity) {
        double tc = std::numeric_limits<double>::infinity();
        for (double r : labels)
            tc = std::min(tc, characteristic_at(profile, params, r).collapse_time());
        plan.collapse = tc;
        plan.t_limit = std::min(plan.t_limit, tc);
    }

    const auto all = detail::linspace(0.0, plan.t_max_requested, cfg.grids.n_times);
    for (double t : all)
        if (t < 0.99 * plan.t_limit) plan.times.push_back(t);
    if (plan.times.size() < all.size()) {
        plan.warnings.push_back(
            "snapshot times truncated at the last pre-shock instant (limit t = " +
            format_double(plan.t_limit) + ")");
    }
    return plan;
}

// ---------------------------------------------------------------------------
// artifact writers

namespace detail {

inline json shock_to_json(const ShockReport& s) {
    return json{{"t_star", s.t_star},
                {"r_star", s.r_star},
                {"R_star", s.R_star},
                {"branch", branch_name(s.kind)},
                {"focal", s.focal}};
}

inline json manifest_base(const ScenarioConfig& cfg, const TimePlan& plan) {
    json m;
    m["config"] = cfg;
    m["t_max_requested"] = plan.t_max_requested;
    m["times"] = plan.times;
    m["shock"] = plan.shock ? shock_to_json(*plan.shock) : json(nullptr);
    m["collapse_time"] = plan.collapse ? json(*plan.collapse) : json(nullptr);
    m["warnings"] = plan.warnings;
    return m;
}

inline void write_json(const std::filesystem::path& p, const json& j) {
    atomic_write(p, j.dump(2) + "\n");
}

inline std::string snapshot_csv(const FieldSnapshot& s) {
    std::string out = "# t=" + format_double(s.t) + "\nr,f,F,v\n";
    for (size_t i = 0; i < s.r.size(); ++i)
        append_row(out, std::array{s.r[i], s.f[i], s.bigF[i], s.v[i]});
    return out;
}

inline std::string index_name(const char* stem, size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%03zu.csv", stem, i);
    return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// pipelines

/// simulate: characteristics.csv, snapshots/snap_###.csv, manifest.json.
inline TimePlan run_simulate(const ScenarioConfig& cfg) {
    cfg.validate();
    const RadialProfile profile = cfg.profile.build();
    const PhysicsParams params = cfg.params();
    const auto labels = label_grid(cfg, profile);
    const TimePlan plan = plan_times(cfg, profile, params, labels);

    namespace fs = std::filesystem;
    fs::create_directories(fs::path(cfg.out_dir) / "snapshots");

    // layer trajectories, sampled densely for curve reproduction
    {
        const double t_hi = plan.times.empty() ? 0.0 : plan.times.back();
        const auto curve_t = detail::linspace(0.0, t_hi, 129);
        std::string out = "r0,t,R,V\n";
        for (double r0 : labels) {
            const auto c = characteristic_at(profile, params, r0);
            for (double t : curve_t)
                append_row(out, std::array{r0, t, c.radius(t), c.velocity(t)});
        }
        atomic_write(fs::path(cfg.out_dir) / "characteristics.csv", out);
    }

    for (size_t i = 0; i < plan.times.size(); ++i) {
        const auto snap = sample_field(profile, params, labels, plan.times[i]);
        atomic_write(fs::path(cfg.out_dir) / "snapshots" / detail::index_name("snap", i),
                     detail::snapshot_csv(snap));
    }

    detail::write_json(fs::path(cfg.out_dir) / "manifest.json",
                       detail::manifest_base(cfg, plan));
    return plan;
}

/// shock-scan: per-label first-crossing CSV plus the refined report.
inline std::optional<ShockReport> run_shock_scan(const ScenarioConfig& cfg) {
    cfg.validate();
    const RadialProfile profile = cfg.profile.build();
    const PhysicsParams params = cfg.params();
    const auto labels = label_grid(cfg, profile);
    const double lam_med = median_rate(profile, params, labels);
    const double t_max = cfg.grids.t_max > 0.0 ? cfg.grids.t_max
                                               : (lam_med > 0.0 ? 10.0 / lam_med : 1.0);

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);

    std::string out = "r0,t_cross\n";
    for (double r0 : labels) {
        double cap = t_max;
        if (params.interaction == Interaction::Gravity)
            cap = std::min(cap, characteristic_at(profile, params, r0).collapse_time() *
                                    (1.0 - 1e-9));
        const double tc =
            mocflow::detail::first_crossing_time(profile, params, r0, cap);
        append_row(out, std::array{r0, tc});
    }
    atomic_write(fs::path(cfg.out_dir) / "shock_scan.csv", out);

    const auto report = shock_onset(profile, params, labels, t_max);
    json m;
    m["config"] = cfg;
    m["t_max"] = t_max;
    m["shock"] = report ? detail::shock_to_json(*report) : json(nullptr);
    detail::write_json(fs::path(cfg.out_dir) / "manifest.json", m);
    return report;
}

/// reconstruct: quantum/q_###.csv with (r, f, v, phi, psi_re, psi_im, U).
/// Requires a profile whose total charge/mass is 1 (wave-function
/// normalization); snapshot times are truncated pre-shock like simulate.
inline TimePlan run_reconstruct(const ScenarioConfig& cfg) {
    cfg.validate();
    const RadialProfile profile = cfg.profile.build();
    const PhysicsParams params = cfg.params();

    const double total = total_amount(profile, params.symmetry);
    if (std::abs(total - 1.0) > 1e-9)
        throw NormalizationError("reconstruct requires total = 1, got " +
                                 format_double(total));

    const auto labels = label_grid(cfg, profile);
    TimePlan plan = plan_times(cfg, profile, params, labels);
    const double lam_med = median_rate(profile, params, labels);
    const double dt = 1e-4 / lam_med;

    // phi_t needs t - dt >= 0: drop instants too close to the start
    std::vector<double> kept;
    for (double t : plan.times)
        if (t >= 2.0 * dt) kept.push_back(t);
    if (kept.size() < plan.times.size())
        plan.warnings.push_back("initial instants dropped (phase rate needs t >= 2 dt)");
    plan.times = kept;

    namespace fs = std::filesystem;
    fs::create_directories(fs::path(cfg.out_dir) / "quantum");

    QuantumParams qp{params.hbar, params.particle_mass};
    for (size_t i = 0; i < plan.times.size(); ++i) {
        const double t = plan.times[i];
        std::vector<double> grid;
        grid.reserve(labels.size());
        for (double r0 : labels)
            grid.push_back(characteristic_at(profile, params, r0).radius(t));
        const QuantumFields qf = reconstruct_fields(profile, params, qp, grid, t, dt);
        std::string out = "# t=" + format_double(t) + "\nr,f,v,phi,psi_re,psi_im,U\n";
        for (size_t k = 0; k < qf.r.size(); ++k)
            append_row(out, std::array{qf.r[k], qf.f[k], qf.v[k], qf.phi[k],
                                       qf.psi_re[k], qf.psi_im[k], qf.U[k]});
        atomic_write(fs::path(cfg.out_dir) / "quantum" / detail::index_name("q", i), out);
    }

    json m = detail::manifest_base(cfg, plan);
    m["gauge"] = "phi(0, t) = 0; U defined up to an additive function of time";
    m["phase_rate_dt"] = dt;
    detail::write_json(fs::path(cfg.out_dir) / "manifest.json", m);
    return plan;
}

// ---------------------------------------------------------------------------
// validation

struct ValidationCheck {
    std::string name;
    double measured;
    double tolerance;
    bool pass;
    std::string note;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool pass = true;

    void add(std::string name, double measured, double tolerance, bool ok,
             std::string note = "") {
        pass = pass && ok;
        checks.push_back({std::move(name), measured, tolerance, ok, std::move(note)});
    }
    void add_max(std::string name, double measured, double tolerance,
                 std::string note = "") {
        add(std::move(name), measured, tolerance, measured <= tolerance,
            std::move(note));
    }
};

namespace detail {

// max |v_num - v_exact| / max |v_exact| of the upwind solve against the
// closed form, inside the smooth interior (the vacuum-edge kink is smeared
// by upwind diffusion and excluded)
inline double pde_velocity_error(const RadialProfile& profile,
                                 const PhysicsParams& params, double support,
                                 int n_nodes, double t_end) {
    const auto grid = linspace(0.0, 3.0 * support, n_nodes);
    const auto state = initial_eulerian_state(profile, params, grid);
    const double snap_t[] = {t_end};
    const auto run = pde_evolve(state, t_end, 0.4, snap_t);
    const auto& fin = run.snapshots.back();

    const double edge =
        characteristic_at(profile, params, support).radius(t_end);
    double verr = 0.0, vmax = 0.0;
    for (size_t i = 1; i < fin.r.size(); ++i) {
        if (fin.r[i] > 0.95 * edge) break;
        const double r0 = label_at(profile, params, fin.r[i], t_end);
        const double vex = characteristic_at(profile, params, r0).velocity(t_end);
        vmax = std::max(vmax, std::abs(vex));
        verr = std::max(verr, std::abs(fin.v[i] - vex));
    }
    return verr / vmax;
}

inline double tracer_deviation(const RadialProfile& profile,
                               const PhysicsParams& params, double support,
                               int n_nodes, double t_end) {
    const auto grid = linspace(0.0, 3.0 * support, n_nodes);
    const auto state = initial_eulerian_state(profile, params, grid);
    const double snap_t[] = {0.5 * t_end, t_end};
    const double seeds[] = {0.3 * support, 0.6 * support, 0.9 * support};
    const auto run = pde_evolve(state, t_end, 0.4, snap_t, seeds);
    const double F_total = state.bigF.back();
    double dev = 0.0;
    for (size_t k = 0; k < 3; ++k) {
        const double F0 = run.tracer_F.front()[k];
        for (const auto& tf : run.tracer_F)
            dev = std::max(dev, std::abs(tf[k] - F0) / F_total);
    }
    return dev;
}

inline double continuity_case(const RadialProfile& profile, const PhysicsParams& params,
                              std::span<const double> labels, double t0, double dt,
                              double time_scale, Symmetry sym) {
    const auto a = sample_field(profile, params, labels, t0);
    const auto b = sample_field(profile, params, labels, t0 + dt);
    return continuity_residual(a, b, sym, time_scale);
}

}  // namespace detail

/// Run every check applicable to the configured scenario. Writes
/// validation.json into the output directory and returns the report.
inline ValidationReport run_validate(const ScenarioConfig& cfg) {
    cfg.validate();
    const RadialProfile profile = cfg.profile.build();
    const PhysicsParams params = cfg.params();
    const BranchKind kind = branch_kind(params);
    const auto labels = label_grid(cfg, profile);
    const double lam_med = median_rate(profile, params, labels);
    const double t_scale = 1.0 / lam_med;

    // earliest shock/collapse over the grid bounds every sampled time below
    const double t_horizon =
        cfg.grids.t_max > 0.0 ? cfg.grids.t_max : 10.0 * t_scale;
    double t_limit = std::numeric_limits<double>::infinity();
    if (labels.size() >= 32) {
        const auto sh = shock_onset(profile, params, labels, t_horizon);
        if (sh) t_limit = sh->t_star;
    }
    if (params.interaction == Interaction::Gravity)
        for (double r : labels)
            t_limit = std::min(
                t_limit, characteristic_at(profile, params, r).collapse_time());

    ValidationReport rep;

    {   // inversion round trip, all four branches
        double worst = 0.0;
        for (BranchKind k :
             {BranchKind::ElectricSphere, BranchKind::ElectricCylinder,
              BranchKind::GravitySphere, BranchKind::GravityCylinder}) {
            const auto xs = is_gravity(k) ? detail::logspace(1e-8, 1.0, 200)
                                          : detail::logspace(1.0, 1e8, 200);
            for (double x : xs) {
                const double back = radius_ratio(k, scaled_time(k, x));
                worst = std::max(worst, std::abs(back - x) / std::max(1.0, x));
            }
        }
        rep.add_max("inversion-round-trip", worst, cfg.tolerances.inversion,
                    "max |P(F(x)) - x| / max(1, x), 200 points per branch");
    }

    {   // closed forms vs the ODE oracle, this scenario's branch
        std::mt19937_64 gen(20240817);
        std::uniform_real_distribution<double> pick(0.0, 1.0);
        double worst = 0.0, drift = 0.0;
        for (int layer = 0; layer < 10; ++layer) {
            const double r0 =
                labels.front() + pick(gen) * (labels.back() - labels.front());
            const auto c = characteristic_at(profile, params, r0);
            if (!(c.lam > 0.0)) continue;
            const double t_hi =
                is_gravity(kind) ? 0.9 * c.collapse_time() : 8.0 / c.lam;
            const auto prob = ode_problem_for(profile, params, r0);
            const auto times = detail::linspace(t_hi / 20.0, t_hi, 20);
            const auto ode = ode_states_at(prob, times, cfg.tolerances.ode);
            const double E0 = ode_energy(prob, r0, 0.0);
            for (size_t i = 0; i < times.size(); ++i) {
                const double Rc = c.radius(times[i]), Vc = c.velocity(times[i]);
                worst = std::max(worst,
                                 std::abs(ode[i].radius - Rc) / std::abs(Rc));
                worst = std::max(worst,
                                 std::abs(ode[i].velocity - Vc) / std::abs(Vc));
                const double E = ode_energy(prob, ode[i].radius, ode[i].velocity);
                drift = std::max(drift,
                                 std::abs(E - E0) /
                                     std::max(std::abs(E0),
                                              0.5 * Vc * Vc));
            }
        }
        rep.add_max("ode-certification", worst, 1e-8,
                    "closed-form R, V vs adaptive RK, 10 layers x 20 times");
        rep.add_max("ode-energy-drift", drift, 1e-9, "first integral along the runs");
    }

    const auto* uni = std::get_if<UniformProfile>(&profile);

    if (uni && kind == BranchKind::GravitySphere) {  // collapse time, 5 densities
        std::mt19937_64 gen(7);
        std::uniform_real_distribution<double> rho_d(0.3, 6.0);
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            const RadialProfile p2 = UniformProfile{rho_d(gen), uni->r_max};
            const double T0 = collapse_time(p2, params);
            const auto run = ode_oracle(ode_problem_for(p2, params, 0.6 * uni->r_max),
                                        2.0 * T0, cfg.tolerances.ode);
            worst = std::max(worst, std::abs(run.stop_time - T0) / T0);
        }
        rep.add_max("collapse-time", worst, 1e-5,
                    "ODE stop time vs (pi/2) sqrt(3 nu0 / 2 rho0)");
    }

    if (uni && !is_cylinder(kind)) {  // uniform sphere density law
        const double lam = layer_rate(profile, params, 0.5 * uni->r_max);
        double dev = 0.0, law = 0.0;
        const double t_hi = is_gravity(kind)
                                ? 0.9 * max_scaled_time(kind) / lam
                                : 3.0 / lam;
        for (double t : detail::linspace(t_hi / 8.0, t_hi, 8)) {
            const auto snap = sample_field(profile, params, labels, t);
            double mean = 0.0;
            for (double fi : snap.f) mean += fi;
            mean /= double(snap.f.size());
            for (double fi : snap.f) dev = std::max(dev, std::abs(fi - mean) / mean);
            const double expect = uniform_sphere_density(uni->rho0, lam, kind, t);
            law = std::max(law, std::abs(mean - expect) / expect);
        }
        rep.add_max("uniform-spatial-uniformity", dev, 1e-9,
                    "max spatial deviation of f over snapshots");
        rep.add_max("uniform-density-law", law, 1e-10, "f(t)/rho0 vs P^-3(lambda t)");
    }

    {   // layer conservation
        std::mt19937_64 gen(99);
        std::uniform_real_distribution<double> pick(0.0, 1.0);
        const double t_cap = std::min(t_horizon, 0.95 * t_limit);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double r0 =
                labels.front() + pick(gen) * (0.9 * labels.back() - labels.front());
            double t = pick(gen) * t_cap;
            const auto c = characteristic_at(profile, params, r0);
            if (is_gravity(kind)) t = std::min(t, 0.9 * c.collapse_time());
            const double F = distribution_function(profile, params, c.radius(t), t);
            const double expect = enclosed(profile, params.symmetry, r0);
            worst = std::max(worst, std::abs(F - expect) / std::max(expect, 1e-300));
        }
        rep.add_max("layer-conservation", worst, 1e-10,
                    "distribution_function(R(r0,t), t) vs enclosed(r0)");
    }

    {   // continuity residual and its behavior under refinement
        const double t0 = std::min(is_gravity(kind) ? 0.3 * t_scale : t_scale,
                                   0.5 * t_limit);
        const double dt = 2e-4 * t_scale;
        const double e1 = detail::continuity_case(profile, params, labels, t0, dt,
                                                  t_scale, params.symmetry);
        const int n2 = 2 * static_cast<int>(labels.size());
        const auto fine =
            detail::support_radius(profile) > 0.0
                ? detail::linspace(labels.front(), labels.back(), n2)
                : detail::logspace(labels.front(), labels.back(), n2);
        const double e2 = detail::continuity_case(profile, params, fine, t0, 0.5 * dt,
                                                  t_scale, params.symmetry);
        const double ratio = e1 / e2;
        if (uni) {
            // spatially uniform fields: the forward-in-time term dominates
            // and the residual is cleanly first order
            rep.add_max("continuity-residual", e1, cfg.tolerances.continuity,
                        "normalized |df/dt + div(f v)|");
            rep.add("continuity-order", ratio, 2.0, ratio > 1.7 && ratio < 2.3,
                    "residual ratio per halving of (dr, dt); expect ~2");
        } else {
            // steep profiles carry spatial truncation on top: require decay
            rep.add("continuity-refinement", ratio, 1.2, ratio > 1.2,
                    "residual shrinks under (dr, dt) halving; coarse residual = " +
                        format_double(e1));
        }
    }

    if (uni) {  // Eulerian cross-validation needs the compact support
        const double lam = layer_rate(profile, params, 0.5 * uni->r_max);
        const double t_end = is_gravity(kind)
                                 ? 0.5 * max_scaled_time(kind) / lam
                                 : 1.0 / lam;
        const double e1 =
            detail::pde_velocity_error(profile, params, uni->r_max, 400, t_end);
        rep.add_max("pde-velocity", e1, cfg.tolerances.pde,
                    "upwind (F, v) system vs closed-form velocity");
        const double e2 =
            detail::pde_velocity_error(profile, params, uni->r_max, 800, t_end);
        const double ratio = e1 / e2;
        if (kind == BranchKind::ElectricSphere) {
            rep.add("pde-order", ratio, 2.0, ratio > 1.7 && ratio < 2.3,
                    "velocity error ratio per grid halving; expect ~2");
        } else {
            // contracting/cylindrical runs mix boundary terms of higher
            // order into the measurement; require at least first order
            rep.add("pde-order", ratio, 1.5, ratio > 1.5,
                    "velocity error at least halves per grid refinement");
        }

        const double d1 =
            detail::tracer_deviation(profile, params, uni->r_max, 300, t_end);
        const double d2 =
            detail::tracer_deviation(profile, params, uni->r_max, 600, t_end);
        rep.add("tracer-level-set", d1, 0.03, d1 < 0.03 && d1 / d2 > 1.4,
                "tracers ride level sets of F; deviation shrinks ~first order");

        // frozen system: kappa = 0 must change nothing
        const auto grid = detail::linspace(0.0, 3.0 * uni->r_max, 128);
        auto frozen = initial_eulerian_state(profile, params, grid);
        frozen.kappa = 0.0;
        const double snap_t[] = {t_end};
        const auto run = pde_evolve(frozen, t_end, 0.4, snap_t);
        double delta = 0.0;
        for (size_t i = 0; i < grid.size(); ++i) {
            delta = std::max(delta, std::abs(run.snapshots.back().v[i]));
            delta = std::max(delta,
                             std::abs(run.snapshots.back().bigF[i] - frozen.bigF[i]));
        }
        rep.add_max("pde-frozen", delta, 1e-12, "kappa = 0 leaves (F, v) unchanged");
    }

    if (std::get_if<LognormalProfile>(&profile)) {  // shock point quality
        const auto shock = shock_onset(profile, params, labels,
                                       cfg.grids.t_max > 0.0 ? cfg.grids.t_max
                                                             : 10.0 * t_scale);
        if (shock && !shock->focal) {
            const double J =
                std::abs(jacobian(profile, params, shock->r_star, shock->t_star));
            rep.add_max("shock-jacobian", J, cfg.tolerances.shock,
                        "|J| at the reported first crossing");
        }
    }

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    json j;
    j["config"] = cfg;
    j["pass"] = rep.pass;
    j["checks"] = json::array();
    for (const auto& c : rep.checks)
        j["checks"].push_back(json{{"name", c.name},
                                   {"measured", c.measured},
                                   {"tolerance", c.tolerance},
                                   {"pass", c.pass},
                                   {"note", c.note}});
    detail::write_json(fs::path(cfg.out_dir) / "validation.json", j);
    return rep;
}

}  // namespace mocflow::scenario
