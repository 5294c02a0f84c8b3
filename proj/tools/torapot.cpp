#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>

#include "torapot/app.hpp"

using namespace torapot;

int main(int argc, char** argv) {
    CLI::App app{"toric pluripotential certificates"};
    app.require_subcommand(1);
    std::optional<uint64_t> seed;
    std::optional<std::string> out;
    int jobs = 1;
    app.add_option("--seed", seed, "override the config seed");
    app.add_option("--out", out, "output directory (overrides TORAPOT_OUT and the config)");
    app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    std::string config, demo;
    auto* verify = app.add_subcommand("verify", "run the certificate suite of a config");
    verify->add_option("config", config)->required();
    auto* sweep = app.add_subcommand("sweep", "cross-product sweep, one CSV row per cell");
    sweep->add_option("config", config)->required();
    auto* experiment = app.add_subcommand("experiment", "exploratory stability search (no pass/fail)");
    experiment->add_option("config", config)->required();
    auto* demo_cmd = app.add_subcommand("demo", "run one bundled demo");
    demo_cmd->add_option("name", demo)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    try {
        if (*demo_cmd) return run_demo(demo, seed.value_or(1), std::cout) ? 0 : 1;

        auto cfg = load_config(config);
        if (seed) cfg.seed = *seed;
        const auto dir = resolve_output_dir(cfg, out);
        if (*sweep) {
            const auto rows = run_sweep(cfg, jobs);
            std::filesystem::create_directories(dir);
            std::ofstream csv(dir / "sweep.csv");
            write_sweep_csv(csv, rows);
            std::cout << rows.size() << " rows written to " << (dir / "sweep.csv").string() << "\n";
            return 0;
        }
        const bool verifying = verify->parsed();
        const auto reports = verifying ? run_verify(cfg, jobs) : run_experiment(cfg, jobs);
        write_reports(dir, verifying ? "report" : "experiment", cfg, reports);
        print_summary(std::cout, reports);
        bool ok = true;
        for (const auto& r : reports) ok = ok && (r.exploratory || r.pass());
        std::cout << reports.size() << " reports, " << (ok ? "all pass" : "FAILURES") << ", wall " << elapsed()
                  << " s, output in " << dir.string() << "\n";
        return ok ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
