#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "mocflow/scenario.hpp"
#include "oracles.hpp"

using namespace mocflow;
using namespace mocflow::scenario;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("mocflow-test-" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(MOCFLOW_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config echo is a JSON fixpoint") {
    for (const auto& name : preset_names()) {
        const ScenarioConfig cfg = preset(name);
        const json j1 = json(cfg);
        const ScenarioConfig back = j1.get<ScenarioConfig>();
        const json j2 = json(back);
        CHECK(j1.dump() == j2.dump());
    }
    CHECK_THROWS_AS(preset("no-such-preset"), ConfigError);
}

TEST_CASE("config validation rejects out-of-range values") {
    ScenarioConfig cfg = preset("uniform-electric-sphere");
    cfg.grids.n_labels = 4;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = preset("uniform-electric-sphere");
    cfg.tolerances.ode = 1e-3;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = preset("uniform-electric-sphere");
    cfg.symmetry = "torus";
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("simulate artifacts") {
    SECTION("identical configs give byte-identical files") {
        ScenarioConfig cfg = preset("uniform-electric-sphere");
        cfg.grids.n_labels = 32;
        cfg.out_dir = fresh_dir("det").string();
        run_simulate(cfg);
        const std::string chars1 = slurp(fs::path(cfg.out_dir) / "characteristics.csv");
        const std::string snap1 = slurp(fs::path(cfg.out_dir) / "snapshots/snap_004.csv");
        const std::string man1 = slurp(fs::path(cfg.out_dir) / "manifest.json");
        run_simulate(cfg);
        CHECK(chars1 == slurp(fs::path(cfg.out_dir) / "characteristics.csv"));
        CHECK(snap1 == slurp(fs::path(cfg.out_dir) / "snapshots/snap_004.csv"));
        CHECK(man1 == slurp(fs::path(cfg.out_dir) / "manifest.json"));

        // the config echo inside the manifest is a parse -> echo -> parse fixpoint
        const json echo = json::parse(man1).at("config");
        const ScenarioConfig back = echo.get<ScenarioConfig>();
        CHECK(json(back).dump() == echo.dump());
    }
    SECTION("uniform electric sphere: non-crossing layer curves") {
        ScenarioConfig cfg = preset("uniform-electric-sphere");
        cfg.grids.n_labels = 16;
        cfg.out_dir = fresh_dir("ues").string();
        run_simulate(cfg);
        const CsvTable t = read_csv(fs::path(cfg.out_dir) / "characteristics.csv");
        REQUIRE(t.header == std::vector<std::string>{"r0", "t", "R", "V"});
        // R strictly increases along each layer's column and layers stay ordered
        std::map<double, double> last_R_by_t;
        double prev_r0 = -1.0, prev_R = -1.0;
        for (size_t row = 0; row < t.columns[0].size(); ++row) {
            const double r0 = t.columns[0][row], R = t.columns[2][row];
            if (r0 != prev_r0) {
                prev_r0 = r0;
                prev_R = -1.0;
            }
            CHECK(R > prev_R);
            prev_R = R;
            auto [it, fresh] = last_R_by_t.try_emplace(t.columns[1][row], R);
            if (!fresh) {
                CHECK(R > it->second);  // outer layers stay outside
                it->second = R;
            }
        }
    }
    SECTION("lognormal manifest records the shock and truncation") {
        ScenarioConfig cfg = preset("lognormal-electric-sphere");
        cfg.grids.n_labels = 64;
        cfg.out_dir = fresh_dir("les").string();
        const TimePlan plan = run_simulate(cfg);
        REQUIRE(plan.shock.has_value());
        CHECK(plan.shock->t_star == Approx(3.4694428755).epsilon(1e-3));
        CHECK_FALSE(plan.warnings.empty());
        CHECK(plan.times.back() < plan.shock->t_star);
        const json m = json::parse(slurp(fs::path(cfg.out_dir) / "manifest.json"));
        CHECK(m.at("shock").at("t_star").get<double>() == Approx(plan.shock->t_star));
        CHECK_FALSE(m.at("shock").at("focal").get<bool>());
    }
    SECTION("uniform gravity sphere stays below T0 and records it") {
        ScenarioConfig cfg = preset("uniform-gravity-sphere");
        cfg.grids.n_labels = 48;
        cfg.out_dir = fresh_dir("ugs").string();
        const TimePlan plan = run_simulate(cfg);
        REQUIRE(plan.collapse.has_value());
        CHECK(*plan.collapse == Approx(std::numbers::pi / 2).epsilon(1e-9));
        for (double t : plan.times) CHECK(t < *plan.collapse);
        const json m = json::parse(slurp(fs::path(cfg.out_dir) / "manifest.json"));
        CHECK(m.at("collapse_time").get<double>() == Approx(*plan.collapse));
    }
}

TEST_CASE("shock-scan artifacts") {
    ScenarioConfig cfg = preset("lognormal-electric-sphere");
    cfg.grids.n_labels = 64;
    cfg.out_dir = fresh_dir("scan").string();
    const auto rep = run_shock_scan(cfg);
    REQUIRE(rep.has_value());
    const CsvTable t = read_csv(fs::path(cfg.out_dir) / "shock_scan.csv");
    REQUIRE(t.header == std::vector<std::string>{"r0", "t_cross"});
    CHECK(t.columns[0].size() == 64);
    double t_min = std::numeric_limits<double>::infinity();
    for (double tc : t.columns[1]) t_min = std::min(t_min, tc);
    CHECK(rep->t_star <= t_min * (1.0 + 1e-9));  // refinement only improves
    CHECK(std::isinf(t.columns[1].back()));      // outermost labels never cross
}

TEST_CASE("reconstruct artifacts") {
    SECTION("quantum CSVs with |Psi|^2 = f") {
        ScenarioConfig cfg = preset("lognormal-electric-sphere");
        cfg.grids.n_labels = 48;
        cfg.grids.t_max = 2.0;
        cfg.out_dir = fresh_dir("rec").string();
        const TimePlan plan = run_reconstruct(cfg);
        REQUIRE(!plan.times.empty());
        const CsvTable t = read_csv(fs::path(cfg.out_dir) / "quantum/q_000.csv");
        REQUIRE(t.header ==
                std::vector<std::string>{"r", "f", "v", "phi", "psi_re", "psi_im", "U"});
        for (size_t i = 0; i < t.columns[0].size(); ++i) {
            const double f = t.columns[1][i];
            const double re = t.columns[4][i], im = t.columns[5][i];
            CHECK(re * re + im * im == Approx(f).epsilon(1e-12));
        }
    }
    SECTION("unnormalized profiles are rejected") {
        ScenarioConfig cfg = preset("lognormal-electric-sphere");
        cfg.profile.total = 2.0;
        cfg.out_dir = fresh_dir("rec2").string();
        CHECK_THROWS_AS(run_reconstruct(cfg), NormalizationError);
    }
    SECTION("times crossing t* are dropped with a warning") {
        ScenarioConfig cfg = preset("lognormal-electric-sphere");
        cfg.grids.n_labels = 48;
        cfg.grids.t_max = 6.0;  // beyond t* = 3.47
        cfg.out_dir = fresh_dir("rec3").string();
        const TimePlan plan = run_reconstruct(cfg);
        CHECK_FALSE(plan.warnings.empty());
        CHECK(plan.times.back() < 3.4694428755);
    }
}

TEST_CASE("validate pipeline") {
    ScenarioConfig cfg = preset("uniform-electric-sphere");
    cfg.out_dir = fresh_dir("val").string();
    const auto rep = run_validate(cfg);
    CHECK(rep.pass);
    CHECK(fs::exists(fs::path(cfg.out_dir) / "validation.json"));

    SECTION("a hopeless tolerance produces an honest failure") {
        cfg.tolerances.pde = 1e-15;  // first-order scheme cannot reach this
        cfg.out_dir = fresh_dir("val2").string();
        const auto rep2 = run_validate(cfg);
        CHECK_FALSE(rep2.pass);
        bool pde_failed = false;
        for (const auto& c : rep2.checks)
            if (c.name == "pde-velocity") pde_failed = !c.pass;
        CHECK(pde_failed);
    }
}

TEST_CASE("tabulated profile from CSV") {
    const fs::path dir = fresh_dir("tab");
    {
        std::ofstream out(dir / "nodes.csv");
        out << "r,rho0\n";
        for (int i = 0; i <= 20; ++i) {
            const double r = 0.1 * i;
            out << format_double(r) << "," << format_double(2.0 / (1.0 + r)) << "\n";
        }
    }
    ProfileSpec spec;
    spec.type = "tabulated";
    spec.path = (dir / "nodes.csv").string();
    const RadialProfile profile = spec.build();
    CHECK(initial_density(profile, 1.0) == Approx(1.0).epsilon(1e-6));
    CHECK(initial_density(profile, 2.5) == 0.0);

    {
        std::ofstream out(dir / "bad.csv");
        out << "radius,density\n0,1\n1,1\n";
    }
    ProfileSpec bad = spec;
    bad.path = (dir / "bad.csv").string();
    CHECK_THROWS_AS(bad.build(), ConfigError);
}

TEST_CASE("cli process exit codes") {
    const fs::path dir = fresh_dir("cli");
    CHECK(run_cli("list-presets") == 0);
    // config errors -> 1
    CHECK(run_cli("simulate --preset no-such-preset") == 1);
    CHECK(run_cli("simulate --preset uniform-electric-sphere --override grids.n_labels=2 --out " +
                  (dir / "a").string()) == 1);
    CHECK(run_cli("reconstruct --preset uniform-electric-sphere --out " +
                  (dir / "b").string()) == 1);  // total != 1
    // small but complete runs -> 0
    CHECK(run_cli("simulate --preset uniform-electric-sphere --override grids.n_labels=16 --out " +
                  (dir / "c").string()) == 0);
    // designed validation failure -> 3
    CHECK(run_cli("validate --preset uniform-electric-sphere --override tolerances.pde=1e-15 --out " +
                  (dir / "d").string()) == 3);
}
