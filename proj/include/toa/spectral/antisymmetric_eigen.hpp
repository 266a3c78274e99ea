#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace toa {

enum class Precision { Auto, Double, Extended };

struct HermitianEigen {
    std::size_t n = 0;
    std::vector<double> values;  // ascending
    // Row j holds eigenvector j (unit 2-norm), i.e. vectors[j * n + i] = psi_j[i].
    std::vector<std::complex<double>> vectors;
    bool extended = false;
    int sweeps = 0;  // total implicit QL iterations
};

// Eigen-decomposition of the Hermitian matrix M = i B for real antisymmetric B given as a
// double-double pair (lo may be null). Householder reduction to tridiagonal form, a
// diagonal unitary change of basis to a real symmetric tridiagonal, then implicit QL.
// Precision::Auto must be resolved by the caller.
HermitianEigen eigh_i_antisymmetric(const double* hi, const double* lo, std::size_t n,
                                    Precision precision, bool want_vectors = true);

}  // namespace toa
