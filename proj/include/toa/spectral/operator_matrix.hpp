#pragma once

#include <complex>
#include <string>
#include <vector>

#include "toa/kernel/kernel_factor.hpp"
#include "toa/numeric/double_double.hpp"
#include "toa/spectral/grid.hpp"

namespace toa {

// Discretized operator M = i B with B real antisymmetric. B is held as a double-double
// pair (hi, lo); lo is nonzero only when entries were computed beyond double precision.
struct OperatorMatrix {
    SpatialGrid grid;
    std::vector<double> hi;
    std::vector<double> lo;
    std::string descriptor;

    std::size_t n() const { return grid.N; }
    double B(std::size_t i, std::size_t j) const { return hi[i * n() + j]; }
    DD B_dd(std::size_t i, std::size_t j) const { return {hi[i * n() + j], lo[i * n() + j]}; }
    std::complex<double> M(std::size_t i, std::size_t j) const { return {0.0, B(i, j)}; }

    double max_abs() const;
    // max |M_ij - conj(M_ji)|
    double hermiticity_residual() const;
    // True when B_ij == B_{N-1-i, N-1-j} for every entry.
    bool reflection_symmetric() const;
};

// M_ij = delta * K(q_i, q_j).
OperatorMatrix build_operator_matrix(const OperatorKernel& kernel, const SpatialGrid& grid);

}  // namespace toa
