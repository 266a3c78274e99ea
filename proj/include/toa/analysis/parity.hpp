#pragma once

#include "toa/kernel/kernel_factor.hpp"
#include "toa/spectral/operator_matrix.hpp"
#include "toa/spectral/spectrum.hpp"

namespace toa {

// max over grid pairs of |K(-q_i, -q_j) - K(q_i, q_j)|.
double parity_kernel_residual(const OperatorKernel& kernel, const SpatialGrid& grid);

// Same quantity read off an assembled matrix (entries divided by delta).
double parity_kernel_residual(const OperatorMatrix& M);

struct ReflectedCheck {
    double max_eigen_mismatch = 0.0;     // max_i |tau+_i - tau-_i|
    double max_relative_mismatch = 0.0;  // mismatch / max |tau|
    double min_overlap = 1.0;            // min_i |<Pi psi+_i | psi-_i>|
    double max_abs_tau = 0.0;
    std::size_t pairs = 0;
};

// Compare the spectrum of the operator for V(q) with the one for V(-q): eigenvalues must
// coincide and reflected eigenfunctions must match up to phase.
ReflectedCheck reflected_potential_eigen_check(const Potential& V, const QuantizationScheme& scheme,
                                               const PhysicalParams& params, const SpatialGrid& grid,
                                               const KernelPolicy& policy = {},
                                               const SpectrumOptions& opts = {});

}  // namespace toa
