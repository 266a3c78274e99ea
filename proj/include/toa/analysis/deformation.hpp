#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toa/analysis/arrival.hpp"
#include "toa/kernel/kernel_factor.hpp"
#include "toa/spectral/spectrum.hpp"

namespace toa {

struct SweepSetup {
    QuantizationScheme base = QuantizationScheme::weyl();
    Potential V = Potential::harmonic(1.0);
    PhysicalParams params{};
    SpatialGrid grid;
    KernelPolicy kernel{};
    SpectrumOptions spectrum{};
    ArrivalSettings arrival{};
    double arrival_point = 0.0;
    // Reference state: the smallest eigenvalue >= target_tau of the undeformed operator
    // with the requested classification (Unclassified accepts any).
    double target_tau = 0.0;
    Classification target_class = Classification::Antinodal;
};

struct SweepEntry {
    double alpha = 0.0;
    double tau = 0.0;
    double overlap = 0.0;  // |<psi_ref | psi_alpha>| on the grid
    bool tracking_lost = false;
    std::optional<ArrivalReport> report;
    std::string failure;
    // Global maximum of the density at t_minvar (or at tau when no minimum exists).
    double peak_position = 0.0;
    double peak_density = 0.0;
};

// Deform the base kernel by Omega(x) = 1 + alpha x^2 for each alpha and follow the
// eigenfunction that overlaps most with the undeformed reference.
std::vector<SweepEntry> deformation_sweep(const SweepSetup& setup, const std::vector<double>& alphas);

// Index of the reference eigenpair used by the sweep; throws when none qualifies.
std::size_t select_reference(const SpectralDecomposition& s, double target_tau, Classification cls);

}  // namespace toa
