// sqsim_cli.cpp — command-line runner: run, validate, list-experiments

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sqsim/experiments.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kNumericError = 2;

int exit_code_for(const sqsim::Error& e) { return sqsim::is_numeric(e.code) ? kNumericError : kConfigError; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Superconducting qubit simulation toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output;
    std::optional<std::uint64_t> seed;
    int threads = 1;

    auto* run = app.add_subcommand("run", "Run an experiment from a config file");
    run->add_option("config", config_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--output", output, "Output directory (overrides the config)");
    run->add_option("--seed", seed, "Master seed (overrides the config)");
    run->add_option("--threads", threads, "Worker threads (results do not depend on this)")->check(CLI::PositiveNumber);

    auto* val = app.add_subcommand("validate", "Check a config without running it");
    val->add_option("config", config_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);

    auto* list = app.add_subcommand("list-experiments", "Print the available experiment names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        if (list->parsed()) {
            for (const auto& n : sqsim::exp::experiment_names()) std::cout << n << '\n';
            return kOk;
        }
        auto cfg = sqsim::exp::load_config(config_path);
        if (val->parsed()) {
            auto diags = sqsim::exp::validate(cfg);
            for (const auto& d : diags) std::cout << d.path << ": " << d.message << '\n';
            if (diags.empty()) std::cout << "ok\n";
            return diags.empty() ? kOk : kConfigError;
        }
        if (!output.empty()) cfg.output = output;
        if (seed) cfg.seed = *seed;
        auto m = sqsim::exp::run(cfg);
        std::cout << sqsim::exp::manifest_to_json(m).dump(2) << '\n';
        return kOk;
    } catch (const sqsim::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
}
