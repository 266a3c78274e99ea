#include "toa/analysis/parity.hpp"

#include <cmath>

namespace toa {

double parity_kernel_residual(const OperatorKernel& K, const SpatialGrid& grid) {
    // |K(-q',-q) - K(q',q)| equals the (q,q') term by hermiticity, so half the pairs suffice.
    double r = 0.0;
    const auto& q = grid.points;
    for (std::size_t i = 0; i < grid.N; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            const double a = K.imag(q[grid.reflect(i)], q[grid.reflect(j)]);
            const double b = K.imag(q[i], q[j]);
            r = std::max(r, std::fabs(a - b));
        }
    return r;
}

double parity_kernel_residual(const OperatorMatrix& M) {
    double r = 0.0;
    const std::size_t N = M.n();
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < i; ++j)
            r = std::max(r, std::fabs(M.B(N - 1 - i, N - 1 - j) - M.B(i, j)));
    return r / M.grid.delta;
}

ReflectedCheck reflected_potential_eigen_check(const Potential& V, const QuantizationScheme& scheme,
                                               const PhysicalParams& params, const SpatialGrid& grid,
                                               const KernelPolicy& policy,
                                               const SpectrumOptions& opts_in) {
    SpectrumOptions opts = opts_in;
    opts.want_vectors = true;
    auto spectrum_for = [&](const Potential& pot) {
        const KernelFactor f(scheme, pot, params, policy);
        return solve_spectrum(build_operator_matrix(assemble_kernel(f, params), grid), opts);
    };
    const SpectralDecomposition plus = spectrum_for(V);
    const SpectralDecomposition minus = spectrum_for(V.reflected());

    ReflectedCheck c;
    c.pairs = plus.pairs.size();
    for (const auto& p : plus.pairs) c.max_abs_tau = std::max(c.max_abs_tau, std::fabs(p.tau));
    for (std::size_t k = 0; k < c.pairs; ++k) {
        const auto& a = plus.pairs[k];
        const auto& b = minus.pairs[k];
        c.max_eigen_mismatch = std::max(c.max_eigen_mismatch, std::fabs(a.tau - b.tau));
        std::complex<double> ov{0.0, 0.0};
        for (std::size_t i = 0; i < grid.N; ++i) ov += std::conj(a.psi[grid.reflect(i)]) * b.psi[i];
        c.min_overlap = std::min(c.min_overlap, std::abs(ov) * grid.delta);
    }
    c.max_relative_mismatch = c.max_abs_tau > 0.0 ? c.max_eigen_mismatch / c.max_abs_tau : 0.0;
    return c;
}

}  // namespace toa
