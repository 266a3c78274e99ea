// Command-line driver: loads a JSON run configuration and executes one pipeline command.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "toa/errors.hpp"
#include "toa/io/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Quantized time-of-arrival operators: kernels, spectra, evolution and diagnostics"};
    app.set_version_flag("--version", toa::kToolVersion);
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_dir;
    bool quiet = false;

    const std::pair<const char*, const char*> commands[] = {
        {"kernel", "Tabulate the kernel factor on a square grid"},
        {"spectrum", "Assemble the operator matrix and solve its eigenproblem"},
        {"evolve", "Evolve selected eigenfunctions and record observables"},
        {"arrival", "Full pipeline: spectrum, evolution, arrival reports and diagnostics"},
        {"conjugacy", "Finite-difference residual of the time kernel equation"},
        {"parity", "Parity residual of the discretized kernel"},
        {"sweep", "Track an eigenfunction across a family of deformed schemes"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Output directory (overrides the config's \"output\")");
        sub->add_flag("--quiet", quiet, "Suppress progress messages");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        // Usage mistakes, including a missing config file, count as configuration errors.
        app.exit(e);
        return 1;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    toa::RunConfig config;
    try {
        config = toa::load_config(config_path);
    } catch (const toa::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
    if (out_dir.empty()) out_dir = config.output;

    const toa::RunManifest m =
        toa::run_pipeline(config, *toa::parse_command(name), out_dir, quiet ? nullptr : &std::cerr);
    for (const auto& w : m.warnings) std::cerr << "warning: " << w << '\n';
    if (m.exit_code != 0) {
        std::cerr << (m.exit_code == 1 ? "config error: " : "numerical failure: ") << m.error << '\n';
    } else if (!quiet) {
        std::cerr << "wrote " << m.artifacts.size() << " artifacts to " << out_dir << '\n';
    }
    return m.exit_code;
}
