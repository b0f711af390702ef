#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "linexp3/config.hpp"
#include "linexp3/experiment.hpp"
#include "linexp3/verify.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw linexp3::ValidationError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file '" + path + "'");
    out << content;
}

std::string sibling_json(const std::string& csv_path) {
    const std::size_t dot = csv_path.rfind('.');
    const std::string stem =
        dot == std::string::npos ? csv_path : csv_path.substr(0, dot);
    return stem + ".json";
}

linexp3::ExperimentConfig load_config(const std::string& path,
                                      const std::string& output_override,
                                      bool seed_set, std::uint64_t seed) {
    linexp3::ExperimentConfig cfg = linexp3::parse_config(read_file(path));
    if (!output_override.empty()) cfg.output = output_override;
    if (seed_set) cfg.seed = seed;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adversarial linear contextual bandit experiments"};
    app.require_subcommand(1);

    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    std::string output_override;
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    app.add_option("--threads", threads, "worker pool size");
    app.add_option("--output", output_override, "override the config's output path");
    app.add_option("--seed", seed_override, "override the config's seed")
        ->each([&](const std::string&) { seed_set = true; });

    std::string run_config;
    CLI::App* run = app.add_subcommand("run", "run one experiment from a config file");
    run->add_option("config", run_config, "config file")->required();

    std::string sweep_config;
    std::vector<int> grid;
    CLI::App* sweep = app.add_subcommand("sweep", "run a horizon sweep and fit the exponent");
    sweep->add_option("config", sweep_config, "config file")->required();
    sweep->add_option("--grid", grid, "horizons, e.g. --grid 1024,2048,4096")
        ->delimiter(',')
        ->required();

    std::string suite;
    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "estimators|mgr|potential|bounds|all")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const linexp3::ExperimentConfig cfg =
                load_config(run_config, output_override, seed_set, seed_override);
            const linexp3::ExperimentResult result = linexp3::run_experiment(cfg, threads);
            write_file(cfg.output, linexp3::curve_to_csv(result.curve));
            write_file(sibling_json(cfg.output), linexp3::summary_json(cfg, result));
            std::printf("wrote %s and %s (final regret %.6g, %.2fs)\n",
                        cfg.output.c_str(), sibling_json(cfg.output).c_str(),
                        result.curve.mean_regret.back(), result.wall_seconds);
            return 0;
        }
        if (sweep->parsed()) {
            const linexp3::ExperimentConfig cfg =
                load_config(sweep_config, output_override, seed_set, seed_override);
            const linexp3::SweepResult result = linexp3::run_sweep(cfg, grid, threads);
            write_file(cfg.output, linexp3::sweep_to_csv(result));
            std::printf("wrote %s (fitted exponent %.4f)\n", cfg.output.c_str(),
                        result.exponent);
            return 0;
        }
        // verify
        const std::vector<linexp3::CheckResult> checks = linexp3::verify_suite(suite);
        bool all_pass = true;
        for (const linexp3::CheckResult& c : checks) {
            std::printf("%s\n", linexp3::format_check(c).c_str());
            all_pass = all_pass && c.pass;
        }
        return all_pass ? 0 : 3;
    } catch (const linexp3::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const linexp3::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const linexp3::UnknownSuite& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
