#pragma once

#include <complex>
#include <cstddef>
#include <string>

#include "toa/numeric/double_double.hpp"

namespace toa::simd {

// Structure-of-arrays view of a double-double vector.
struct DDSpan {
    double* hi;
    double* lo;
    DDSpan operator+(std::size_t k) const { return {hi + k, lo + k}; }
};

struct ConstDDSpan {
    const double* hi;
    const double* lo;
    ConstDDSpan(const double* h, const double* l) : hi(h), lo(l) {}
    ConstDDSpan(DDSpan s) : hi(s.hi), lo(s.lo) {}
    ConstDDSpan operator+(std::size_t k) const { return {hi + k, lo + k}; }
};

struct Moments {
    double m0 = 0.0;  // sum |psi|^2
    double m1 = 0.0;  // sum q |psi|^2
    double m2 = 0.0;  // sum q^2 |psi|^2
};

// One implementation of every hot loop. Rotation convention:
// (x, y) <- (c x - s y, s x + c y).
struct KernelTable {
    const char* name;

    double (*dot)(const double* x, const double* y, std::size_t n);
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    void (*axpy2)(double a, const double* x, double b, const double* z, double* y,
                  std::size_t n);
    void (*rot)(double c, double s, double* x, double* y, std::size_t n);

    DD (*dot_dd)(ConstDDSpan x, ConstDDSpan y, std::size_t n);
    void (*axpy_dd)(DD a, ConstDDSpan x, DDSpan y, std::size_t n);
    void (*axpy2_dd)(DD a, ConstDDSpan x, DD b, ConstDDSpan z, DDSpan y, std::size_t n);
    void (*rot_dd)(DD c, DD s, DDSpan x, DDSpan y, std::size_t n);

    void (*mul_phase)(std::complex<double>* psi, const std::complex<double>* phase,
                      std::size_t n);
    Moments (*moments)(const std::complex<double>* psi, const double* q, std::size_t n);
};

const KernelTable& scalar_kernels();
// Null when the build or the CPU lacks AVX2+FMA.
const KernelTable* avx2_kernels();

enum class Backend { Auto, Scalar, Avx2 };

// Kernels used by the library. Resolved once from CPU features; TOA_SIMD=scalar in the
// environment forces the reference path.
const KernelTable& active();
void select_backend(Backend b);
std::string active_name();

inline double dot(const double* x, const double* y, std::size_t n) { return active().dot(x, y, n); }
inline DD dot(ConstDDSpan x, ConstDDSpan y, std::size_t n) { return active().dot_dd(x, y, n); }
inline void axpy(double a, const double* x, double* y, std::size_t n) { active().axpy(a, x, y, n); }
inline void axpy(DD a, ConstDDSpan x, DDSpan y, std::size_t n) { active().axpy_dd(a, x, y, n); }
inline void axpy2(double a, const double* x, double b, const double* z, double* y, std::size_t n) {
    active().axpy2(a, x, b, z, y, n);
}
inline void axpy2(DD a, ConstDDSpan x, DD b, ConstDDSpan z, DDSpan y, std::size_t n) {
    active().axpy2_dd(a, x, b, z, y, n);
}
inline void rot(double c, double s, double* x, double* y, std::size_t n) { active().rot(c, s, x, y, n); }
inline void rot(DD c, DD s, DDSpan x, DDSpan y, std::size_t n) { active().rot_dd(c, s, x, y, n); }

}  // namespace toa::simd
