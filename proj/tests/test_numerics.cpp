#include <doctest.h>

#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include <quadmath.h>

#include "toa/errors.hpp"
#include "toa/numeric/double_double.hpp"
#include "toa/quad/gauss_kronrod.hpp"
#include "toa/simd/kernels.hpp"
#include "toa/special/hypergeometric.hpp"

using namespace toa;

namespace {

// Defining series summed in quad precision until the terms vanish.
double hyp_oracle(double z) {
    __float128 term = 1, sum = 1, Z = z;
    for (int k = 1; k < 2000; ++k) {
        term *= Z / (__float128(k) * k);
        sum += term;
        if (fabsq(term) < 1e-34Q * fabsq(sum) && k > 4) break;
    }
    return double(sum);
}

double bessel_route(double z) {
    if (z >= 0) return std::cyl_bessel_i(0.0, 2.0 * std::sqrt(z));
    return std::cyl_bessel_j(0.0, 2.0 * std::sqrt(-z));
}

}  // namespace

TEST_CASE("hyp0f1 reference values") {
    CHECK(hyp0f1_one(0.0) == 1.0);
    CHECK(hyp0f1_one(1.0) == doctest::Approx(2.2795853023360673).epsilon(1e-15));
    CHECK(hyp0f1_one(-1.0) == doctest::Approx(0.22389077914123567).epsilon(1e-15));
    CHECK(std::fabs(hyp0f1_one(1.0) - hyp_oracle(1.0)) <= 1e-15 * hyp_oracle(1.0));
}

TEST_CASE("hyp0f1 matches the quad-precision series") {
    // Away from the zeros of J0 the relative error is meaningful.
    for (double z = -30.0; z <= 60.0; z += 0.37) {
        const double ref = hyp_oracle(z);
        CAPTURE(z);
        CHECK(std::fabs(hyp0f1_one(z) - ref) <= 1e-13 * std::max(1.0, std::fabs(ref)));
    }
}

TEST_CASE("hyp0f1 agrees with the Bessel identities on [-50, 50]") {
    for (double z = -50.0; z <= 50.0; z += 0.25) {
        const double a = hyp0f1_one(z), b = bessel_route(z);
        CAPTURE(z);
        CHECK(std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b)));
    }
}

TEST_CASE("hyp0f1 is positive and increasing for z >= 0") {
    double prev = 0.0;
    for (double z = 0.0; z < 3000.0; z = z * 1.3 + 0.01) {
        const double f = hyp0f1_one(z);
        CHECK(f > 0.0);
        CHECK(f > prev);
        prev = f;
    }
}

TEST_CASE("hyp0f1 satisfies z f'' + f' - f = 0") {
    const double h = 1e-4;
    for (double z : {-5.0, -0.5, 0.5, 5.0}) {
        const double fm = hyp0f1_one(z - h), f0 = hyp0f1_one(z), fp = hyp0f1_one(z + h);
        const double d1 = (fp - fm) / (2 * h), d2 = (fp - 2 * f0 + fm) / (h * h);
        // Two-ulp function error amplified by the second difference; it dominates 1e-8 at z = 5.
        const double roundoff = 2 * DBL_EPSILON * (std::fabs(fp) + 2 * std::fabs(f0) + std::fabs(fm)) * std::fabs(z) / (h * h);
        CAPTURE(z);
        CAPTURE(roundoff);
        CHECK(std::fabs(z * d2 + d1 - f0) < 1e-8 + roundoff);
    }
}

TEST_CASE("hyp0f1 oscillatory regime beyond the series switch") {
    for (double z : {-31.0, -100.0, -1e4, -1e6}) CHECK(std::fabs(hyp0f1_one(z) - bessel_route(z)) < 1e-13);
}

TEST_CASE("hyp0f1 errors") {
    CHECK_THROWS_AS(hyp0f1_one(1e7), NumericalError);
    HypEvalPolicy tiny;
    tiny.max_terms = 2;
    CHECK_THROWS_AS(hyp0f1_one(10.0, tiny), NumericalError);
    HypEvalPolicy bad;
    bad.series_tolerance = 0.0;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("double factorial") {
    CHECK(double_factorial(-1) == 1);
    CHECK(double_factorial(0) == 1);
    CHECK(double_factorial(5) == 15);
    CHECK(double_factorial(6) == 48);
    CHECK_THROWS_AS(double_factorial(-2), DomainError);
    CHECK_THROWS_AS(double_factorial(200), DomainError);
    for (int k = 0; k < 15; ++k) {
        double fact = 1;
        for (int j = 2; j <= k; ++j) fact *= j;
        CHECK(odd_factorial_ratio(k) == doctest::Approx(double(double_factorial(2 * k - 1)) / fact).epsilon(1e-15));
    }
}

TEST_CASE("Gauss-Kronrod integrates polynomials through degree 31 exactly") {
    for (int deg = 0; deg <= 31; ++deg) {
        auto f = [deg](double x) { return std::pow(x, deg); };
        const double a = -1.0, b = 1.5;
        const double exact = (std::pow(b, deg + 1) - std::pow(a, deg + 1)) / (deg + 1);
        const auto seg = gk21::rule(f, a, b);
        CAPTURE(deg);
        CHECK(std::fabs(seg.value - exact) <= 1e-14 * std::max(1.0, std::fabs(exact)));
    }
}

TEST_CASE("adaptive quadrature") {
    SUBCASE("peaked integrand") {
        auto f = [](double x) { return 1.0 / (1e-4 + x * x); };
        const auto r = integrate(f, -1.0, 1.0);
        CHECK(r.value == doctest::Approx(2.0 / 1e-2 * std::atan(1.0 / 1e-2)).epsilon(1e-10));
    }
    SUBCASE("mirrored integrands give negated results bitwise") {
        auto f = [](double x) { return std::exp(std::sin(3 * x)) / (1.1 + x); };
        auto g = [&](double x) { return f(-x); };
        const double a = integrate(f, 0.0, 0.9).value;
        const double b = integrate(g, 0.0, -0.9).value;
        CHECK(a == -b);
    }
    SUBCASE("non-convergence names the worst subinterval") {
        QuadPolicy p;
        p.max_intervals = 8;
        auto f = [](double x) { return 1.0 / std::sqrt(std::fabs(x - 0.3)); };
        try {
            integrate(f, 0.0, 1.0, p);
            FAIL("expected NumericalError");
        } catch (const NumericalError& e) {
            CHECK(std::string(e.what()).find("worst subinterval") != std::string::npos);
        }
    }
}

TEST_CASE("double-double arithmetic against quad precision") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 2000; ++t) {
        const DD a = DD(__float128(u(rng)) / 3 * __float128(std::exp(4 * u(rng))));
        const DD b = DD(__float128(u(rng)) / 7 * __float128(std::exp(4 * u(rng))));
        const __float128 A = a.to_quad(), B = b.to_quad();
        auto rel = [](DD x, __float128 X) { return double(fabsq(x.to_quad() - X) / fabsq(X)); };
        CHECK(rel(a + b, A + B) < 1e-30 * std::max(1.0, double(fabsq(A) + fabsq(B)) / double(fabsq(A + B))));
        CHECK(rel(a * b, A * B) < 1e-30);
        CHECK(rel(a / b, A / B) < 1e-30);
        CHECK(rel(sqrt(abs(a)), sqrtq(fabsq(A))) < 1e-30);
    }
}

TEST_CASE("SIMD kernels match the scalar reference") {
    const simd::KernelTable* v = simd::avx2_kernels();
    if (!v) {
        MESSAGE("AVX2 kernels unavailable; equivalence not exercised");
        return;
    }
    const auto& s = simd::scalar_kernels();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 16u, 33u, 257u}) {
        CAPTURE(n);
        std::vector<double> x(n), y(n), z(n), xl(n), yl(n), zl(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = u(rng), y[i] = u(rng), z[i] = u(rng);
            xl[i] = 1e-17 * u(rng), yl[i] = 1e-17 * u(rng), zl[i] = 1e-17 * u(rng);
        }
        const double d1 = s.dot(x.data(), y.data(), n), d2 = v->dot(x.data(), y.data(), n);
        CHECK(std::fabs(d1 - d2) <= 1e-14 * double(n + 1));

        // Elementwise kernels are bitwise identical.
        auto y1 = y, y2 = y;
        s.axpy(0.3, x.data(), y1.data(), n);
        v->axpy(0.3, x.data(), y2.data(), n);
        CHECK(y1 == y2);
        s.axpy2(0.3, x.data(), -0.7, z.data(), y1.data(), n);
        v->axpy2(0.3, x.data(), -0.7, z.data(), y2.data(), n);
        CHECK(y1 == y2);
        auto x1 = x, x2 = x;
        s.rot(0.6, 0.8, x1.data(), y1.data(), n);
        v->rot(0.6, 0.8, x2.data(), y2.data(), n);
        CHECK(x1 == x2);
        CHECK(y1 == y2);

        auto yh1 = y, yl1 = yl, yh2 = y, yl2 = yl;
        const DD a(0.3, 1e-18), b(-0.7, 2e-18);
        s.axpy_dd(a, {x.data(), xl.data()}, {yh1.data(), yl1.data()}, n);
        v->axpy_dd(a, {x.data(), xl.data()}, {yh2.data(), yl2.data()}, n);
        CHECK(yh1 == yh2);
        CHECK(yl1 == yl2);
        s.axpy2_dd(a, {x.data(), xl.data()}, b, {z.data(), zl.data()}, {yh1.data(), yl1.data()}, n);
        v->axpy2_dd(a, {x.data(), xl.data()}, b, {z.data(), zl.data()}, {yh2.data(), yl2.data()}, n);
        CHECK(yh1 == yh2);
        CHECK(yl1 == yl2);
        auto xh1 = x, xl1 = xl, xh2 = x, xl2 = xl;
        s.rot_dd(DD(0.6), DD(0.8), {xh1.data(), xl1.data()}, {yh1.data(), yl1.data()}, n);
        v->rot_dd(DD(0.6), DD(0.8), {xh2.data(), xl2.data()}, {yh2.data(), yl2.data()}, n);
        CHECK(xh1 == xh2);
        CHECK(xl1 == xl2);
        const DD e1 = s.dot_dd({x.data(), xl.data()}, {y.data(), yl.data()}, n);
        const DD e2 = v->dot_dd({x.data(), xl.data()}, {y.data(), yl.data()}, n);
        CHECK(std::fabs(double(e1 - e2)) <= 1e-28 * double(n + 1));

        std::vector<std::complex<double>> psi(n), phase(n);
        std::vector<double> q(n);
        for (std::size_t i = 0; i < n; ++i) {
            psi[i] = {u(rng), u(rng)};
            phase[i] = std::polar(1.0, 3 * u(rng));
            q[i] = 5 * u(rng);
        }
        auto p1 = psi, p2 = psi;
        s.mul_phase(p1.data(), phase.data(), n);
        v->mul_phase(p2.data(), phase.data(), n);
        CHECK(p1 == p2);
        const auto m1 = s.moments(psi.data(), q.data(), n), m2 = v->moments(psi.data(), q.data(), n);
        CHECK(std::fabs(m1.m0 - m2.m0) <= 1e-13 * double(n + 1));
        CHECK(std::fabs(m1.m1 - m2.m1) <= 1e-12 * double(n + 1));
        CHECK(std::fabs(m1.m2 - m2.m2) <= 1e-11 * double(n + 1));
    }
}

TEST_CASE("backend selection") {
    const std::string before = simd::active_name();
    simd::select_backend(simd::Backend::Scalar);
    CHECK(simd::active_name() == "scalar");
    simd::select_backend(simd::Backend::Auto);
    CHECK(simd::active_name() == before);
}
