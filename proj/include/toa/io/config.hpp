#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "toa/analysis/conjugacy.hpp"
#include "toa/analysis/arrival.hpp"
#include "toa/kernel/kernel_factor.hpp"
#include "toa/spectral/spectrum.hpp"

namespace toa {

struct GridConfig {
    double l = 6.0;
    std::size_t N = 512;
};

struct EvolutionSettings {
    double dt = 1e-5;
    double horizon = 3.0;
    std::size_t min_samples = 2000;
    std::size_t density_snapshots = 200;
    std::size_t max_steps = 1000000;
    double edge_fraction = 0.05;
    double edge_mass_limit = 1e-6;
    EdgePolicy edge_policy = EdgePolicy::Warn;

    ArrivalSettings arrival_settings() const;
};

enum class SelectionClass { Antinodal, Nodal, Both, Any };

struct SelectionConfig {
    std::vector<std::size_t> indices;  // explicit indices into the ascending spectrum
    SelectionClass classification = SelectionClass::Both;
    std::size_t count = 3;
    std::optional<double> min_tau;  // defaults to the grid resolution floor
};

struct DiagnosticsConfig {
    SampleBox box{-2.0, 2.0};
    double h = 1e-3;
    int samples = 15;
    bool reflected_check = false;
};

struct SweepConfig {
    std::vector<double> alphas{0.0, 1.0, 1e2, 1e4, 2e4};
    std::optional<double> target_tau;  // defaults to the resolution floor
    Classification classification = Classification::Antinodal;
};

struct KernelDumpConfig {
    std::size_t points = 21;
    double range = 3.0;
};

struct RunConfig {
    Potential potential = Potential::harmonic(1.0);
    QuantizationScheme scheme = QuantizationScheme::weyl();
    PhysicalParams params{};
    GridConfig grid{};
    KernelPolicy kernel{};
    SpectrumOptions spectrum{};
    EvolutionSettings evolution{};
    SelectionConfig selection{};
    DiagnosticsConfig diagnostics{};
    SweepConfig sweep{};
    KernelDumpConfig kernel_dump{};
    std::string output = "out";
    // Normalized echo of the input with defaults filled in.
    nlohmann::json resolved;
};

// Reads and validates a JSON run configuration. Unknown keys are rejected; every error is a
// ConfigError that names the offending field (and the line, for syntax errors).
RunConfig load_config(const std::string& path);
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_text(const std::string& text);

}  // namespace toa
