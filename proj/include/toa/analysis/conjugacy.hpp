#pragma once

#include "toa/kernel/kernel_factor.hpp"

namespace toa {

struct ConjugacyReport {
    double residual_max = 0.0;  // max |R| over the interior sample
    double diagonal_error = 0.0;      // max |T(q,q) - q/2|
    double antidiagonal_error = 0.0;  // max |T(q,-q)|
    double h = 0.0;
    int samples = 0;
};

struct SampleBox {
    double lo = -2.0;
    double hi = 2.0;
};

// Finite-difference residual of the time kernel equation
//   R = -(h^2/2mu) T_qq + (h^2/2mu) T_q'q' + (V(q) - V(q')) T
// on a samples x samples interior lattice of the square box, plus the boundary errors on
// `samples` diagonal points.
ConjugacyReport tke_residual(const KernelFactor& factor, const SampleBox& box, double h,
                             int samples = 15);

}  // namespace toa
