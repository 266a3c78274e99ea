#include "toa/simd/kernels.hpp"

namespace toa::simd {

namespace {

double k_dot(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void k_axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void k_axpy2(double a, const double* x, double b, const double* z, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i] + b * z[i];
}

void k_rot(double c, double s, double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i], yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

DD load(ConstDDSpan v, std::size_t i) { return {v.hi[i], v.lo[i]}; }
void store(DDSpan v, std::size_t i, DD a) {
    v.hi[i] = a.hi;
    v.lo[i] = a.lo;
}

DD k_dot_dd(ConstDDSpan x, ConstDDSpan y, std::size_t n) {
    DD s;
    for (std::size_t i = 0; i < n; ++i) s += load(x, i) * load(y, i);
    return s;
}

void k_axpy_dd(DD a, ConstDDSpan x, DDSpan y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) store(y, i, load(y, i) + a * load(x, i));
}

void k_axpy2_dd(DD a, ConstDDSpan x, DD b, ConstDDSpan z, DDSpan y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        store(y, i, load(y, i) + (a * load(x, i) + b * load(z, i)));
}

void k_rot_dd(DD c, DD s, DDSpan x, DDSpan y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const DD xi = load(x, i), yi = load(y, i);
        store(x, i, c * xi - s * yi);
        store(y, i, s * xi + c * yi);
    }
}

void k_mul_phase(std::complex<double>* psi, const std::complex<double>* phase, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double a = psi[i].real(), b = psi[i].imag();
        const double c = phase[i].real(), d = phase[i].imag();
        psi[i] = {a * c - b * d, a * d + b * c};
    }
}

Moments k_moments(const std::complex<double>* psi, const double* q, std::size_t n) {
    Moments m;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = psi[i].real() * psi[i].real() + psi[i].imag() * psi[i].imag();
        m.m0 += r;
        m.m1 += q[i] * r;
        m.m2 += q[i] * q[i] * r;
    }
    return m;
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable t{"scalar", k_dot,    k_axpy,    k_axpy2,     k_rot,    k_dot_dd,
                               k_axpy_dd,  k_axpy2_dd, k_rot_dd, k_mul_phase, k_moments};
    return t;
}

}  // namespace toa::simd
