#pragma once

#include <complex>
#include <string>
#include <vector>

#include "toa/core/physics.hpp"
#include "toa/spectral/antisymmetric_eigen.hpp"
#include "toa/spectral/operator_matrix.hpp"

namespace toa {

enum class Classification { Nodal, Antinodal, Unclassified };
std::string to_string(Classification c);

struct EigenPair {
    double tau = 0.0;
    std::vector<std::complex<double>> psi;  // sum |psi_i|^2 delta = 1
    Classification classification = Classification::Unclassified;
    std::complex<double> parity{0.0, 0.0};  // <psi | Pi psi>
};

enum class ParityMode {
    Auto,  // reduce into even/odd sectors when the matrix is exactly reflection-symmetric
    Off,
};

struct SpectrumOptions {
    Precision precision = Precision::Auto;
    ParityMode parity = ParityMode::Auto;
    bool want_vectors = true;
    double arrival_point = 0.0;
    // Extended precision is chosen when N * eps * max|B| exceeds this.
    double auto_precision_threshold = 1e-9;
};

struct SpectralDecomposition {
    SpatialGrid grid;
    std::vector<EigenPair> pairs;  // ascending in tau
    bool extended = false;
    bool parity_reduced = false;
    double max_abs_entry = 0.0;
};

Precision resolve_precision(const OperatorMatrix& M, const SpectrumOptions& opts);

SpectralDecomposition solve_spectrum(const OperatorMatrix& M, const SpectrumOptions& opts = {});

// Nodal when |psi(q0)|^2 < 0.05 L, antinodal when > 0.5 L, where psi(q0) is linearly
// interpolated and L is the grid density at the local maximum nearest q0.
Classification classify_eigenfunction(const EigenPair& pair, const SpatialGrid& grid,
                                      double arrival_point = 0.0);

std::complex<double> parity_overlap(const EigenPair& pair, const SpatialGrid& grid);

// Scale the vector to unit grid norm and rotate its phase so the first component of
// largest magnitude is real and positive.
void normalize_eigenfunction(std::vector<std::complex<double>>& psi, double delta);

// Eigenvalues below this are dominated by grid-scale oscillation: their eigenfunctions
// carry momenta beyond a quarter of the grid Nyquist limit.
double resolution_floor(const PhysicalParams& params, const SpatialGrid& grid);

}  // namespace toa
