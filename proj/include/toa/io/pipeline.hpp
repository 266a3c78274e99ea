#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "toa/io/config.hpp"

namespace toa {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Command { Kernel, Spectrum, Evolve, Arrival, Conjugacy, Parity, Sweep };

std::optional<Command> parse_command(const std::string& name);
std::string to_string(Command c);

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double limit = 0.0;
};

struct RunManifest {
    nlohmann::json config;
    std::string command;
    std::string simd_backend;
    std::vector<std::pair<std::string, double>> timings;  // stage, seconds
    std::vector<CheckResult> checks;
    std::vector<std::string> warnings;
    std::vector<std::string> artifacts;
    std::string status = "ok";
    std::string error;
    int exit_code = 0;

    nlohmann::json to_json() const;
};

// Selected eigenpair indices: explicit indices, or the lowest-eigenvalue pairs above the
// minimum eigenvalue (default: the resolution floor) with the requested classification.
std::vector<std::size_t> select_eigenpairs(const SpectralDecomposition& s, const SelectionConfig& sel,
                                           double default_min_tau);

// Runs one command and writes its artifacts plus manifest.json into out_dir. Never throws for
// stage failures: they are recorded in the manifest with exit code 1 (config) or 2 (numerical).
RunManifest run_pipeline(const RunConfig& config, Command command, const std::string& out_dir,
                         std::ostream* log = nullptr);

}  // namespace toa
