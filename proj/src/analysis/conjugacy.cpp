#include "toa/analysis/conjugacy.hpp"

#include <cmath>

#include "toa/errors.hpp"

namespace toa {

ConjugacyReport tke_residual(const KernelFactor& T, const SampleBox& box, double h, int samples) {
    if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
    if (samples < 1) throw DomainError("need at least one sample per axis");
    if (!(box.hi > box.lo)) throw DomainError("sample box must have positive width");

    const auto& P = T.params();
    const auto& V = T.potential();
    const double c = P.hbar * P.hbar / (2.0 * P.mass);
    const double width = box.hi - box.lo;
    auto node = [&](int i) { return box.lo + width * double(i + 1) / double(samples + 1); };

    ConjugacyReport r;
    r.h = h;
    r.samples = samples;
    for (int i = 0; i < samples; ++i) {
        const double q = node(i);
        for (int j = 0; j < samples; ++j) {
            const double qp = node(j);
            const double t = T(q, qp);
            const double tqq = (T(q + h, qp) - 2.0 * t + T(q - h, qp)) / (h * h);
            const double tpp = (T(q, qp + h) - 2.0 * t + T(q, qp - h)) / (h * h);
            const double R = -c * tqq + c * tpp + (V(q) - V(qp)) * t;
            r.residual_max = std::max(r.residual_max, std::fabs(R));
        }
        r.diagonal_error = std::max(r.diagonal_error, std::fabs(T(q, q) - 0.5 * q));
        r.antidiagonal_error = std::max(r.antidiagonal_error, std::fabs(T(q, -q)));
    }
    return r;
}

}  // namespace toa
