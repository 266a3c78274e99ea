#include "toa/spectral/antisymmetric_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "toa/errors.hpp"
#include "toa/numeric/double_double.hpp"
#include "toa/simd/kernels.hpp"

namespace toa {

namespace {

// Dense row-major storage with kernel-compatible row views.
template <class Real>
struct Store;

template <>
struct Store<double> {
    std::size_t n = 0;
    std::vector<double> a;
    Store(std::size_t rows, std::size_t cols) : n(cols), a(rows * cols, 0.0) {}
    double* row(std::size_t i) { return a.data() + i * n; }
    double get(std::size_t i, std::size_t j) const { return a[i * n + j]; }
    void set(std::size_t i, std::size_t j, double v) { a[i * n + j] = v; }
};

template <>
struct Store<DD> {
    std::size_t n = 0;
    std::vector<double> hi, lo;
    Store(std::size_t rows, std::size_t cols) : n(cols), hi(rows * cols, 0.0), lo(rows * cols, 0.0) {}
    simd::DDSpan row(std::size_t i) { return {hi.data() + i * n, lo.data() + i * n}; }
    DD get(std::size_t i, std::size_t j) const { return {hi[i * n + j], lo[i * n + j]}; }
    void set(std::size_t i, std::size_t j, DD v) {
        hi[i * n + j] = v.hi;
        lo[i * n + j] = v.lo;
    }
};

template <class Real>
struct Traits;
template <>
struct Traits<double> {
    static double eps() { return 0x1p-53; }
    static double from(double h, double) { return h; }
};
template <>
struct Traits<DD> {
    static DD eps() { return DD(0x1p-104); }
    static DD from(double h, double l) { return DD(h) + DD(l); }
};

using std::abs;
using std::sqrt;

template <class Real>
Real pythag(Real a, Real b) {
    const Real aa = abs(a), bb = abs(b);
    if (aa > bb) {
        const Real r = bb / aa;
        return aa * sqrt(Real(1.0) + r * r);
    }
    if (bb == Real(0.0)) return Real(0.0);
    const Real r = aa / bb;
    return bb * sqrt(Real(1.0) + r * r);
}

template <class Real>
Real with_sign(Real mag, Real s) {
    return s >= Real(0.0) ? abs(mag) : -abs(mag);
}

template <class Real>
HermitianEigen solve(const double* hi, const double* lo, std::size_t n, bool want_vectors) {
    Store<Real> A(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            A.set(i, j, Traits<Real>::from(hi[i * n + j], lo ? lo[i * n + j] : 0.0));

    // Householder reduction. Reflector k maps column k below the diagonal onto e_1;
    // for antisymmetric A the two-sided update is A += beta (v w^T - w v^T), w = A v.
    std::vector<Real> e(n, Real(0.0)), beta(n, Real(0.0));
    Store<Real> Vs(n, n);
    Store<Real> w(1, n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t len = n - k - 1;
        auto v = Vs.row(k);
        Real norm2(0.0);
        for (std::size_t i = 0; i < len; ++i) {
            const Real x = -A.get(k, k + 1 + i);
            Vs.set(k, i, x);
            norm2 += x * x;
        }
        if (norm2 == Real(0.0)) {
            e[k] = Real(0.0);
            continue;
        }
        const Real norm = sqrt(norm2);
        const Real x0 = Vs.get(k, 0);
        const Real alpha = x0 >= Real(0.0) ? -norm : norm;
        Vs.set(k, 0, x0 - alpha);
        const Real b = Real(1.0) / (norm2 + abs(x0) * norm);
        beta[k] = b;
        e[k] = alpha;

        auto wr = w.row(0);
        for (std::size_t i = 0; i < len; ++i)
            w.set(0, i, simd::dot(A.row(k + 1 + i) + (k + 1), v, len));
        for (std::size_t i = 0; i < len; ++i) {
            const Real vi = Vs.get(k, i), wi = w.get(0, i);
            simd::axpy2(b * vi, wr, -(b * wi), v, A.row(k + 1 + i) + (k + 1), len);
        }
    }
    if (n >= 2) e[n - 2] = A.get(n - 1, n - 2);
    e[n - 1] = Real(0.0);

    // The antisymmetric tridiagonal T with T[k+1][k] = e_k becomes, after the change of
    // basis D = diag(i^k), the real symmetric tridiagonal with zero diagonal and
    // off-diagonal e_k that represents i T.
    std::vector<Real> d(n, Real(0.0));
    Store<Real> Z(want_vectors ? n : 0, n);
    if (want_vectors)
        for (std::size_t i = 0; i < n; ++i) Z.set(i, i, Real(1.0));

    const Real eps = Traits<Real>::eps();
    int sweeps = 0;
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const Real dd = abs(d[m]) + abs(d[m + 1]);
                if (abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 120)
                    throw NumericalError("eigensolver did not converge for eigenvalue " +
                                         std::to_string(l) + " of " + std::to_string(n));
                ++sweeps;
                Real g = (d[l + 1] - d[l]) / (Real(2.0) * e[l]);
                Real r = pythag(g, Real(1.0));
                g = d[m] - d[l] + e[l] / (g + with_sign(r, g));
                Real s(1.0), c(1.0), p(0.0);
                bool underflow = false;
                for (std::size_t ii = m; ii-- > l;) {
                    const Real f = s * e[ii];
                    const Real b = c * e[ii];
                    r = pythag(f, g);
                    e[ii + 1] = r;
                    if (r == Real(0.0)) {
                        d[ii + 1] -= p;
                        e[m] = Real(0.0);
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[ii + 1] - p;
                    r = (d[ii] - g) * s + Real(2.0) * c * b;
                    p = s * r;
                    d[ii + 1] = g + p;
                    g = c * r - b;
                    if (want_vectors) simd::rot(c, s, Z.row(ii), Z.row(ii + 1), n);
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = Real(0.0);
            }
        } while (m != l);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    HermitianEigen out;
    out.n = n;
    out.extended = std::is_same_v<Real, DD>;
    out.sweeps = sweeps;
    out.values.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.values[j] = to_double(d[order[j]]);
    if (!want_vectors) return out;

    // psi = Q D z, with Q = P_0 P_1 ... P_{n-3}. D splits z into a real part on
    // indices k = 0 mod 2 and an imaginary part on odd k; both are back-transformed.
    Store<Real> Re(n, n), Im(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        for (std::size_t k = 0; k < n; ++k) {
            const Real z = Z.get(src, k);
            switch (k & 3) {
                case 0: Re.set(j, k, z); break;
                case 1: Im.set(j, k, z); break;
                case 2: Re.set(j, k, -z); break;
                default: Im.set(j, k, -z); break;
            }
        }
    }
    for (std::size_t k = n >= 2 ? n - 2 : 0; k-- > 0;) {
        if (beta[k] == Real(0.0)) continue;
        const std::size_t len = n - k - 1;
        auto v = Vs.row(k);
        for (std::size_t j = 0; j < n; ++j) {
            auto re = Re.row(j) + (k + 1);
            auto im = Im.row(j) + (k + 1);
            const Real sr = simd::dot(v, re, len), si = simd::dot(v, im, len);
            if (sr != Real(0.0)) simd::axpy(-(beta[k] * sr), v, re, len);
            if (si != Real(0.0)) simd::axpy(-(beta[k] * si), v, im, len);
        }
    }
    out.vectors.resize(n * n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            out.vectors[j * n + k] = {to_double(Re.get(j, k)), to_double(Im.get(j, k))};
    return out;
}

}  // namespace

HermitianEigen eigh_i_antisymmetric(const double* hi, const double* lo, std::size_t n,
                                    Precision precision, bool want_vectors) {
    if (n == 0) return {};
    if (precision == Precision::Auto)
        throw DomainError("eigh_i_antisymmetric needs an explicit precision");
    for (std::size_t i = 0; i < n * n; ++i)
        if (!std::isfinite(hi[i])) throw NumericalError("operator matrix has non-finite entries");
    return precision == Precision::Extended ? solve<DD>(hi, lo, n, want_vectors)
                                            : solve<double>(hi, lo, n, want_vectors);
}

}  // namespace toa
