#include "config.hpp"
#include "report.hpp"
#include "suites.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>

namespace {

enum Exit { kPass = 0, kFail = 1, kInvalid = 2 };

int run(const std::string& config_path, const flv::cli::Overrides& ov, bool record_time) {
    using namespace flv::cli;
    RunConfig cfg = [&] {
        try {
            return load_config(config_path, ov);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }();

    const auto start = std::chrono::steady_clock::now();
    Tables tables;
    RunReport rep = run_all(cfg, tables);
    if (record_time) rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    for (const auto& r : rep.records) {
        std::printf("%s  %-36s gap=%.3e tol=%.3e%s%s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.gap, r.tolerance,
                    r.note.empty() ? "" : "  ", r.note.c_str());
    }
    try {
        write_report(cfg.out_dir, rep);
        write_tables(cfg.out_dir, tables);
    } catch (const std::exception& e) {
        std::cerr << "verify: " << e.what() << '\n';
        return kInvalid;
    }
    std::printf("%s: %zu records, report in %s/report.json\n", rep.pass ? "PASS" : "FAIL", rep.records.size(),
                cfg.out_dir.c_str());
    return rep.pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks for Liouville solutions of the Finsler N-Laplacian in convex cones", "verify"};
    app.require_subcommand(1);
    auto* cmd = app.add_subcommand("run", "Run verification suites from a JSON config");

    std::string config;
    flv::cli::Overrides ov;
    std::uint64_t seed = 0;
    std::string out;
    int budget = 0;
    bool record_time = false;
    cmd->add_option("--config", config, "Config file (JSON)")->required();
    cmd->add_option("--suite", ov.suites, "Suite to run; repeatable; replaces the config list")
        ->check(CLI::IsMember({"gauge", "dual", "cone", "residual", "mass", "levels", "pohozaev", "poincare", "all"}));
    auto* seed_opt = cmd->add_option("--seed", seed, "Root seed");
    auto* out_opt = cmd->add_option("--out", out, "Output directory");
    auto* budget_opt = cmd->add_option("--budget", budget, "Quadrature budget");
    cmd->add_flag("--record-time", record_time, "Store wall time in the report (breaks byte-identical reruns)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kPass : kInvalid;
    }
    if (*seed_opt) ov.seed = seed;
    if (*out_opt) ov.out_dir = out;
    if (*budget_opt) ov.budget = budget;

    try {
        return run(config, ov, record_time);
    } catch (const flv::cli::ConfigError& e) {
        std::cerr << "verify: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "verify: " << e.what() << '\n';
        return kInvalid;
    }
}
