// Built with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "toa/simd/kernels.hpp"

namespace toa::simd {

namespace {

struct V {
    __m256d hi, lo;
};

inline V quick_two_sum(__m256d a, __m256d b) {
    __m256d s = _mm256_add_pd(a, b);
    return {s, _mm256_sub_pd(b, _mm256_sub_pd(s, a))};
}

inline V two_sum(__m256d a, __m256d b) {
    __m256d s = _mm256_add_pd(a, b);
    __m256d bb = _mm256_sub_pd(s, a);
    __m256d e = _mm256_add_pd(_mm256_sub_pd(a, _mm256_sub_pd(s, bb)), _mm256_sub_pd(b, bb));
    return {s, e};
}

inline V add(V a, V b) {
    V s = two_sum(a.hi, b.hi);
    V t = two_sum(a.lo, b.lo);
    s.lo = _mm256_add_pd(s.lo, t.hi);
    s = quick_two_sum(s.hi, s.lo);
    s.lo = _mm256_add_pd(s.lo, t.lo);
    return quick_two_sum(s.hi, s.lo);
}

inline V neg(V a) {
    const __m256d z = _mm256_setzero_pd();
    return {_mm256_sub_pd(z, a.hi), _mm256_sub_pd(z, a.lo)};
}

inline V mul(V a, V b) {
    __m256d p = _mm256_mul_pd(a.hi, b.hi);
    __m256d e = _mm256_fmsub_pd(a.hi, b.hi, p);
    __m256d t = _mm256_add_pd(_mm256_mul_pd(a.hi, b.lo), _mm256_mul_pd(a.lo, b.hi));
    e = _mm256_add_pd(e, t);
    return quick_two_sum(p, e);
}

inline V broadcast(DD a) { return {_mm256_set1_pd(a.hi), _mm256_set1_pd(a.lo)}; }
inline V load(ConstDDSpan v, std::size_t i) {
    return {_mm256_loadu_pd(v.hi + i), _mm256_loadu_pd(v.lo + i)};
}
inline void store(DDSpan v, std::size_t i, V a) {
    _mm256_storeu_pd(v.hi + i, a.hi);
    _mm256_storeu_pd(v.lo + i, a.lo);
}

inline DD sload(ConstDDSpan v, std::size_t i) { return {v.hi[i], v.lo[i]}; }
inline void sstore(DDSpan v, std::size_t i, DD a) {
    v.hi[i] = a.hi;
    v.lo[i] = a.lo;
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double k_dot(const double* x, const double* y, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
        a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
    }
    for (; i + 4 <= n; i += 4)
        a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    double s = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void k_axpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), t));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void k_axpy2(double a, const double* x, double b, const double* z, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a), vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_add_pd(_mm256_mul_pd(va, _mm256_loadu_pd(x + i)),
                                  _mm256_mul_pd(vb, _mm256_loadu_pd(z + i)));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), t));
    }
    for (; i < n; ++i) y[i] += a * x[i] + b * z[i];
}

void k_rot(double c, double s, double* x, double* y, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c), vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xi = _mm256_loadu_pd(x + i), yi = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(x + i, _mm256_sub_pd(_mm256_mul_pd(vc, xi), _mm256_mul_pd(vs, yi)));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_mul_pd(vs, xi), _mm256_mul_pd(vc, yi)));
    }
    for (; i < n; ++i) {
        const double xi = x[i], yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

DD k_dot_dd(ConstDDSpan x, ConstDDSpan y, std::size_t n) {
    V acc{_mm256_setzero_pd(), _mm256_setzero_pd()};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = add(acc, mul(load(x, i), load(y, i)));
    alignas(32) double h[4], l[4];
    _mm256_store_pd(h, acc.hi);
    _mm256_store_pd(l, acc.lo);
    DD s = (DD(h[0], l[0]) + DD(h[1], l[1])) + (DD(h[2], l[2]) + DD(h[3], l[3]));
    for (; i < n; ++i) s += sload(x, i) * sload(y, i);
    return s;
}

void k_axpy_dd(DD a, ConstDDSpan x, DDSpan y, std::size_t n) {
    const V va = broadcast(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) store(y, i, add(load(y, i), mul(va, load(x, i))));
    for (; i < n; ++i) sstore(y, i, sload(y, i) + a * sload(x, i));
}

void k_axpy2_dd(DD a, ConstDDSpan x, DD b, ConstDDSpan z, DDSpan y, std::size_t n) {
    const V va = broadcast(a), vb = broadcast(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        store(y, i, add(load(y, i), add(mul(va, load(x, i)), mul(vb, load(z, i)))));
    for (; i < n; ++i) sstore(y, i, sload(y, i) + (a * sload(x, i) + b * sload(z, i)));
}

void k_rot_dd(DD c, DD s, DDSpan x, DDSpan y, std::size_t n) {
    const V vc = broadcast(c), vs = broadcast(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const V xi = load(x, i), yi = load(y, i);
        store(x, i, add(mul(vc, xi), neg(mul(vs, yi))));
        store(y, i, add(mul(vs, xi), mul(vc, yi)));
    }
    for (; i < n; ++i) {
        const DD xi = sload(x, i), yi = sload(y, i);
        sstore(x, i, c * xi - s * yi);
        sstore(y, i, s * xi + c * yi);
    }
}

void k_mul_phase(std::complex<double>* psi, const std::complex<double>* phase, std::size_t n) {
    double* p = reinterpret_cast<double*>(psi);
    const double* f = reinterpret_cast<const double*>(phase);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v = _mm256_loadu_pd(p + 2 * i);
        __m256d w = _mm256_loadu_pd(f + 2 * i);
        __m256d wr = _mm256_movedup_pd(w);
        __m256d wi = _mm256_permute_pd(w, 0xF);
        __m256d vs = _mm256_permute_pd(v, 0x5);
        _mm256_storeu_pd(p + 2 * i, _mm256_addsub_pd(_mm256_mul_pd(v, wr), _mm256_mul_pd(vs, wi)));
    }
    for (; i < n; ++i) {
        const double a = psi[i].real(), b = psi[i].imag();
        const double c = phase[i].real(), d = phase[i].imag();
        psi[i] = {a * c - b * d, a * d + b * c};
    }
}

Moments k_moments(const std::complex<double>* psi, const double* q, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(psi);
    __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd(), s2 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d a = _mm256_loadu_pd(p + 2 * i);
        __m256d b = _mm256_loadu_pd(p + 2 * i + 4);
        // hadd interleaves: lanes hold points i, i+2, i+1, i+3.
        __m256d r = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
        __m256d qv = _mm256_permute4x64_pd(_mm256_loadu_pd(q + i), 0xD8);
        __m256d qr = _mm256_mul_pd(qv, r);
        s0 = _mm256_add_pd(s0, r);
        s1 = _mm256_add_pd(s1, qr);
        s2 = _mm256_add_pd(s2, _mm256_mul_pd(qv, qr));
    }
    Moments m{hsum(s0), hsum(s1), hsum(s2)};
    for (; i < n; ++i) {
        const double r = psi[i].real() * psi[i].real() + psi[i].imag() * psi[i].imag();
        m.m0 += r;
        m.m1 += q[i] * r;
        m.m2 += q[i] * q[i] * r;
    }
    return m;
}

}  // namespace

const KernelTable* avx2_kernels_impl() {
    static const KernelTable t{"avx2",  k_dot,     k_axpy,     k_axpy2,     k_rot,    k_dot_dd,
                               k_axpy_dd, k_axpy2_dd, k_rot_dd,  k_mul_phase, k_moments};
    return &t;
}

}  // namespace toa::simd
