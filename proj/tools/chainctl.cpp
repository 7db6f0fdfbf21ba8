// chainctl — batch front end for spin-chain transfer experiments.
//
// Subcommands:
//   chainctl run <config.json> [--out DIR] [--threads N] [--seed S]
//   chainctl preset <name> [--n N] [--seed S] [--out DIR] [--threads N]
//   chainctl validate <config.json>
//
// Exit codes: 0 success, 2 config error, 3 numerical failure.
// CHAINCTL_SEED overrides the config seed; an explicit --seed wins over both.

#include "chainctl/experiment.hpp"
#include "chainctl/version.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

chainctl::io::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw chainctl::io::ConfigError("cannot open config file: " + path);
    try {
        return chainctl::io::json::parse(in);
    } catch (const std::exception& e) {
        throw chainctl::io::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
}

std::optional<std::uint64_t> env_seed() {
    const char* value = std::getenv("CHAINCTL_SEED");
    if (!value) return std::nullopt;
    return std::strtoull(value, nullptr, 10);
}

int run_and_report(chainctl::experiment::ExperimentConfig config) {
    const auto outputs = chainctl::experiment::run_experiment(config);
    for (const auto& file : outputs.files) std::cout << file << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chainctl — boundary-controlled spin-chain transfer experiments"};
    app.set_version_flag("--version", std::string("chainctl ") + chainctl::kVersion);
    app.require_subcommand(1);

    std::string config_path, preset_name, out_dir;
    int n_channel = -1;
    int threads = 0;
    std::optional<std::uint64_t> seed_flag;
    std::uint64_t seed_value = 0;

    auto* run_cmd = app.add_subcommand("run", "run an experiment config");
    run_cmd->add_option("config", config_path, "experiment config (JSON)")->required();
    run_cmd->add_option("--out", out_dir, "override output directory");
    run_cmd->add_option("--threads", threads, "worker threads");
    auto* run_seed = run_cmd->add_option("--seed", seed_value, "override master seed");

    auto* preset_cmd = app.add_subcommand("preset", "run a named figure preset");
    preset_cmd->add_option("name", preset_name, "preset name")
        ->required()
        ->check(CLI::IsMember(chainctl::experiment::preset_names()));
    preset_cmd->add_option("--n", n_channel, "channel length N (odd)");
    preset_cmd->add_option("--out", out_dir, "output directory");
    preset_cmd->add_option("--threads", threads, "worker threads");
    auto* preset_seed = preset_cmd->add_option("--seed", seed_value, "master seed");

    auto* validate_cmd = app.add_subcommand("validate", "validate a config and exit");
    validate_cmd->add_option("config", config_path, "experiment config (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) {
            chainctl::experiment::config_from_json(load_json(config_path));
            std::cout << "ok\n";
            return 0;
        }

        chainctl::experiment::ExperimentConfig config;
        if (run_cmd->parsed()) {
            if (run_seed->count()) seed_flag = seed_value;
            config = chainctl::experiment::config_from_json(load_json(config_path));
        } else {
            if (preset_seed->count()) seed_flag = seed_value;
            config = chainctl::experiment::preset(preset_name, n_channel, std::nullopt,
                                                  out_dir.empty() ? "" : out_dir);
        }
        if (const auto env = env_seed()) config.master_seed = *env;
        if (seed_flag) config.master_seed = *seed_flag;
        if (!out_dir.empty()) config.output_dir = out_dir;
        if (threads > 0) config.threads = threads;

        return run_and_report(std::move(config));
    } catch (const chainctl::io::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}
