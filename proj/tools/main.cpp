// mocflow command-line scenario runner.
//
// Subcommands: simulate | shock-scan | reconstruct | validate.
// A scenario comes from --preset and/or --config (JSON); --override
// KEY=VALUE entries patch individual keys (dotted paths). Exit codes:
// 0 success, 1 configuration error, 2 runtime error, 3 validation failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mocflow/scenario.hpp"

namespace {

using mocflow::scenario::ScenarioConfig;
using nlohmann::json;

struct CommonArgs {
    std::string config_path;
    std::string preset;
    std::string out_dir;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "scenario JSON file");
    cmd->add_option("--preset", args.preset,
                    "built-in scenario (see `mocflow list-presets`)");
    cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
    cmd->add_option("--override", args.overrides,
                    "KEY=VALUE config patch, dotted keys (e.g. grids.n_labels=64)");
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mocflow::ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw mocflow::ConfigError("config parse error: " + std::string(e.what()));
    }
    return j;
}

void apply_override(json& doc, const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
        throw mocflow::ConfigError("override must be KEY=VALUE: " + kv);
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);

    json::json_pointer ptr;
    size_t pos = 0;
    while (pos != std::string::npos) {
        const size_t dot = key.find('.', pos);
        ptr /= key.substr(pos, dot == std::string::npos ? dot : dot - pos);
        pos = dot == std::string::npos ? dot : dot + 1;
    }
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::parse_error&) {
        parsed = value;  // bare strings are fine
    }
    doc[ptr] = parsed;
}

ScenarioConfig build_config(const CommonArgs& args) {
    json doc;
    if (!args.preset.empty())
        doc = json(mocflow::scenario::preset(args.preset));
    if (!args.config_path.empty()) {
        const json file = load_json(args.config_path);
        doc.merge_patch(file);
    }
    for (const auto& kv : args.overrides) apply_override(doc, kv);
    ScenarioConfig cfg = doc.is_null() ? ScenarioConfig{} : doc.get<ScenarioConfig>();
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    cfg.validate();
    return cfg;
}

int dispatch(const std::string& cmd, const CommonArgs& args) {
    const ScenarioConfig cfg = build_config(args);
    if (cmd == "simulate") {
        const auto plan = mocflow::scenario::run_simulate(cfg);
        std::printf("simulate: %zu snapshots -> %s\n", plan.times.size(),
                    cfg.out_dir.c_str());
        for (const auto& w : plan.warnings) std::printf("note: %s\n", w.c_str());
        if (plan.shock)
            std::printf("shock: t* = %s at r0 = %s%s\n",
                        mocflow::format_double(plan.shock->t_star).c_str(),
                        mocflow::format_double(plan.shock->r_star).c_str(),
                        plan.shock->focal ? " (focal collapse)" : "");
        return 0;
    }
    if (cmd == "shock-scan") {
        const auto report = mocflow::scenario::run_shock_scan(cfg);
        if (report)
            std::printf("shock: t* = %s  r0* = %s  R* = %s%s\n",
                        mocflow::format_double(report->t_star).c_str(),
                        mocflow::format_double(report->r_star).c_str(),
                        mocflow::format_double(report->R_star).c_str(),
                        report->focal ? "  (focal collapse)" : "");
        else
            std::printf("no characteristic crossing below the time horizon\n");
        return 0;
    }
    if (cmd == "reconstruct") {
        const auto plan = mocflow::scenario::run_reconstruct(cfg);
        std::printf("reconstruct: %zu instants -> %s/quantum\n", plan.times.size(),
                    cfg.out_dir.c_str());
        for (const auto& w : plan.warnings) std::printf("note: %s\n", w.c_str());
        return 0;
    }
    if (cmd == "validate") {
        const auto rep = mocflow::scenario::run_validate(cfg);
        for (const auto& c : rep.checks)
            std::printf("[%s] %-26s measured=%-12.4g tol=%-10.4g %s\n",
                        c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured,
                        c.tolerance, c.note.c_str());
        std::printf("%s\n", rep.pass ? "validation passed" : "validation FAILED");
        return rep.pass ? 0 : 3;
    }
    throw mocflow::ConfigError("unknown subcommand " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact radial explosion/collapse characteristics and quantum "
                 "reconstruction"};
    app.require_subcommand(0, 1);

    CommonArgs args;
    const char* names[] = {"simulate", "shock-scan", "reconstruct", "validate"};
    const char* descs[] = {
        "evolve the scenario and write characteristics + field snapshots",
        "locate the first characteristic crossing over the label grid",
        "rebuild (v, phi, Psi, U) from the flow and write quantum CSVs",
        "run the scenario's oracle cross-checks and write a report"};
    for (int i = 0; i < 4; ++i) add_common(app.add_subcommand(names[i], descs[i]), args);
    auto* lp = app.add_subcommand("list-presets", "print built-in scenario names");

    CLI11_PARSE(app, argc, argv);

    try {
        if (lp->parsed()) {
            for (const auto& n : mocflow::scenario::preset_names())
                std::printf("%s\n", n.c_str());
            return 0;
        }
        for (const auto* sub : app.get_subcommands())
            return dispatch(sub->get_name(), args);
        std::fputs(app.help().c_str(), stderr);
        return 1;
    } catch (const mocflow::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const mocflow::NormalizationError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
