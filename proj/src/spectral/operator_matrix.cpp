#include "toa/spectral/operator_matrix.hpp"

#include <cmath>
#include <sstream>

#include "toa/errors.hpp"

namespace toa {

double OperatorMatrix::max_abs() const {
    double m = 0.0;
    for (double v : hi) m = std::max(m, std::fabs(v));
    return m;
}

double OperatorMatrix::hermiticity_residual() const {
    double r = 0.0;
    const std::size_t N = n();
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            r = std::max(r, std::abs(M(i, j) - std::conj(M(j, i))));
    return r;
}

bool OperatorMatrix::reflection_symmetric() const {
    const std::size_t N = n();
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            const std::size_t a = i * N + j, b = (N - 1 - i) * N + (N - 1 - j);
            if (hi[a] != hi[b] || lo[a] != lo[b]) return false;
        }
    return true;
}

OperatorMatrix build_operator_matrix(const OperatorKernel& kernel, const SpatialGrid& grid) {
    OperatorMatrix M;
    M.grid = grid;
    const std::size_t N = grid.N;
    M.hi.assign(N * N, 0.0);
    M.lo.assign(N * N, 0.0);
    const __float128 delta = grid.delta;
    const bool closed = kernel.factor().uses_closed_form();
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            __float128 v;
            try {
                v = closed ? kernel.imag_quad(grid.points[i], grid.points[j])
                           : __float128(kernel.imag(grid.points[i], grid.points[j]));
            } catch (const NumericalError& e) {
                std::ostringstream os;
                os << "kernel evaluation failed at matrix entry (" << i << ", " << j << "): "
                   << e.what();
                throw NumericalError(os.str());
            }
            const DD b(v * delta);
            M.hi[i * N + j] = b.hi;
            M.lo[i * N + j] = b.lo;
            M.hi[j * N + i] = -b.hi;
            M.lo[j * N + i] = -b.lo;
        }
    }
    std::ostringstream os;
    os << kernel.factor().scheme().describe() << " | " << kernel.factor().potential().describe()
       << " | l=" << grid.l << " N=" << N;
    M.descriptor = os.str();
    return M;
}

}  // namespace toa
