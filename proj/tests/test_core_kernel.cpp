#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "toa/core/physics.hpp"
#include "toa/errors.hpp"
#include "toa/kernel/kernel_factor.hpp"

using namespace toa;

namespace {

const PhysicalParams unit{1.0, 1.0};
const NamedScheme named[] = {NamedScheme::Weyl, NamedScheme::SimpleSymmetric, NamedScheme::BornJordan};

std::vector<Potential> potential_family() {
    return {Potential::free(), Potential::harmonic(1.0), Potential::sinusoidal(1.0, 1.0),
            Potential::polynomial({0.1, -0.4, 0.3, 0.2})};
}

}  // namespace

TEST_CASE("potential evaluation") {
    CHECK(potential_eval(Potential::harmonic(1.0), 2.0) == 2.0);
    CHECK(potential_eval(Potential::free(), 5.0) == 0.0);
    CHECK(potential_eval(Potential::sinusoidal(1.0, 1.0), std::numbers::pi / 2) == doctest::Approx(1.0));
    CHECK(potential_eval(Potential::polynomial({1.0, 2.0, 3.0}), 2.0) == 17.0);
    CHECK(Potential::harmonic(2.0, 3.0)(1.0) == 6.0);
}

TEST_CASE("potential evenness and reflection") {
    CHECK(Potential::harmonic(1.0).is_even());
    CHECK(Potential::free().is_even());
    CHECK_FALSE(Potential::sinusoidal(1.0, 1.0).is_even());
    CHECK(Potential::sinusoidal(0.0, 1.0).is_even());
    CHECK(Potential::polynomial({1.0, 0.0, 2.0, 0.0, 5.0}).is_even());
    CHECK_FALSE(Potential::polynomial({1.0, 0.5, 2.0}).is_even());
    for (const auto& V : potential_family())
        for (double q : {-1.7, 0.0, 0.4, 2.5}) CHECK(V.reflected()(q) == V(-q));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((PhysicalParams{0.0, 1.0}.validate()), ConfigError);
    CHECK_THROWS_AS((PhysicalParams{1.0, -1.0}.validate()), ConfigError);
}

TEST_CASE("classical harmonic time of arrival") {
    CHECK(classical_toa_harmonic(unit, 1.0, {0.0, 1.0}) == 0.0);
    CHECK(classical_toa_harmonic(unit, 1.0, {1.0, 1.0}) == doctest::Approx(-std::numbers::pi / 4));
    CHECK(classical_toa_harmonic(unit, 1.0, {-1.0, 1.0}) == doctest::Approx(std::numbers::pi / 4));
    try {
        classical_toa_harmonic(unit, 1.0, {1.0, 0.0});
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("stationary-turning input") != std::string::npos);
    }
}

TEST_CASE("local time of arrival series") {
    for (int k : {0, 1, 5, 20}) CHECK(ltoa_series(unit, Potential::free(), 0.0, {2.0, 1.0}, k).value == -2.0);
    CHECK(ltoa_series(unit, Potential::harmonic(1.0), 0.0, {0.1, 1.0}, 0).value == doctest::Approx(-0.1));
    const auto r = ltoa_series(unit, Potential::harmonic(1.0), 0.0, {0.1, 1.0}, 10);
    CHECK(std::fabs(r.value + std::atan(0.1)) < 1e-9);
    CHECK(r.error_estimate >= 0.0);
    CHECK_THROWS_AS(ltoa_series(unit, Potential::harmonic(1.0), 0.0, {0.1, 0.0}, 3), DomainError);

    SUBCASE("error decreases with order inside the convergence radius") {
        const double exact = classical_toa_harmonic(unit, 1.0, {0.5, 1.0});
        double prev = INFINITY;
        for (int k = 3; k < 14; ++k) {
            const double e = std::fabs(ltoa_series(unit, Potential::harmonic(1.0), 0.0, {0.5, 1.0}, k).value - exact);
            CHECK(e < prev);
            prev = e;
        }
    }
    SUBCASE("odd under reflection about x for even potentials") {
        for (double q : {0.2, 0.45}) {
            const double a = ltoa_series(unit, Potential::harmonic(1.3), 0.0, {q, 0.9}, 8).value;
            const double b = ltoa_series(unit, Potential::harmonic(1.3), 0.0, {-q, 0.9}, 8).value;
            CHECK(a == doctest::Approx(-b).epsilon(1e-12));
        }
    }
    SUBCASE("divergence is reported") {
        try {
            ltoa_series(unit, Potential::harmonic(1.0), 0.0, {3.0, 1.0}, 30);
            FAIL("expected divergence");
        } catch (const NumericalError& e) {
            CHECK(std::string(e.what()).find("series diverging") != std::string::npos);
        }
    }
}

TEST_CASE("quantizing polynomials") {
    CHECK(quantizing_polynomial(QuantizationScheme::weyl(), 1, 2.0, 0.0) == 1.0);
    CHECK(quantizing_polynomial(QuantizationScheme::symmetric(), 2, 1.0, 3.0) == 5.0);
    CHECK(quantizing_polynomial(QuantizationScheme::born_jordan(), 2, 1.0, 1.0) == 1.0);
    // Born-Jordan: (q^3 - q'^3) / (3 (q - q')) at (2, 1) = 7/3.
    CHECK(quantizing_polynomial(QuantizationScheme::born_jordan(), 2, 2.0, 1.0) == doctest::Approx(7.0 / 3.0));
    for (int n = 0; n < 7; ++n)
        for (auto s : named) CHECK(quantizing_polynomial(QuantizationScheme(s), n, 1.3, 1.3) == doctest::Approx(std::pow(1.3, n)));
}

TEST_CASE("general coefficient rows reproduce the named polynomials") {
    const auto w = GeneralPolynomial::weyl_rows(8), s = GeneralPolynomial::symmetric_rows(8),
               b = GeneralPolynomial::born_jordan_rows(8);
    for (int n = 0; n <= 8; ++n)
        for (double q : {-1.1, 0.3})
            for (double qp : {0.7, 2.0}) {
                CHECK(quantizing_polynomial(QuantizationScheme(w), n, q, qp) ==
                      doctest::Approx(quantizing_polynomial(QuantizationScheme::weyl(), n, q, qp)));
                CHECK(quantizing_polynomial(QuantizationScheme(s), n, q, qp) ==
                      doctest::Approx(quantizing_polynomial(QuantizationScheme::symmetric(), n, q, qp)));
                CHECK(quantizing_polynomial(QuantizationScheme(b), n, q, qp) ==
                      doctest::Approx(quantizing_polynomial(QuantizationScheme::born_jordan(), n, q, qp)));
            }
}

TEST_CASE("scheme validation") {
    CHECK_THROWS_AS(QuantizationScheme(GeneralPolynomial{{{1.0}, {1.0, 2.0}}}), ConfigError);  // not palindromic
    CHECK_THROWS_AS(QuantizationScheme(GeneralPolynomial{{{1.0}, {1.0, -1.0}}}), ConfigError);
    CHECK_THROWS_AS(QuantizationScheme(GeneralPolynomial{{{1.0}, {0.5, 0.0, 0.5}}}), ConfigError);  // wrong length
    Deformation odd{"odd", [](__float128 x) { return 1 + x; }};
    CHECK_THROWS_AS(QuantizationScheme::deformed(QuantizationScheme::weyl(), odd), ConfigError);
    Deformation shifted{"shifted", [](__float128 x) { return 2 + x * x; }};
    CHECK_THROWS_AS(QuantizationScheme::deformed(QuantizationScheme::weyl(), shifted), ConfigError);
}

TEST_CASE("kernel factor reference values") {
    for (auto s : named) {
        CHECK(kernel_factor(QuantizationScheme(s), Potential::free(), unit, 1.0, 3.0) == doctest::Approx(1.0));
        for (const auto& V : potential_family())
            CHECK(kernel_factor(QuantizationScheme(s), V, unit, 0.8, 0.8) == doctest::Approx(0.4).epsilon(1e-12));
    }
    const double half_sinh_half = 0.5 * std::sinh(0.5);
    CHECK(kernel_factor(QuantizationScheme::weyl(), Potential::harmonic(1.0), unit, 1.0, 0.0) ==
          doctest::Approx(half_sinh_half).epsilon(1e-14));
    KernelPolicy quad;
    quad.method = KernelMethod::Quadrature;
    CHECK(kernel_factor(QuantizationScheme::weyl(), Potential::harmonic(1.0), unit, 1.0, 0.0, quad) ==
          doctest::Approx(half_sinh_half).epsilon(1e-12));
}

TEST_CASE("harmonic closed forms") {
    CHECK(kernel_factor_harmonic_closed(NamedScheme::Weyl, unit, 1.0, 1.0, 0.0) == doctest::Approx(0.2605477).epsilon(1e-7));
    for (auto s : named) CHECK(kernel_factor_harmonic_closed(s, unit, 1.0, 0.8, 0.8) == doctest::Approx(0.4));
    CHECK(kernel_factor_harmonic_closed(NamedScheme::Weyl, unit, 1.0, 1.0, -1.0) == 0.0);
    CHECK_THROWS_AS(kernel_factor_harmonic_closed(NamedScheme::Weyl, unit, 1.0, 60.0, -20.0), NumericalError);
    // Log-space branch stays finite and continuous across the switch.
    const double a = kernel_factor_harmonic_closed(NamedScheme::Weyl, unit, 1.0, 30.0, -23.3);
    CHECK(std::isfinite(a));
    CHECK(a == doctest::Approx(double(harmonic_factor_quad(NamedScheme::Weyl, 1, 30.0, -23.3))).epsilon(1e-12));
    // Near-diagonal series joins the exact value.
    const double d = 5e-9;
    for (auto s : named)
        CHECK(kernel_factor_harmonic_closed(s, unit, 1.0, 1.2 + d, 1.2) ==
              doctest::Approx(double(harmonic_factor_quad(s, 1, 1.2 + d, 1.2))).epsilon(1e-14));
}

TEST_CASE("kernel factor symmetry and diagonal on random points") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> pts(12);
    for (auto& p : pts) p = u(rng);
    for (const auto& V : potential_family())
        for (auto s : named) {
            const KernelFactor T(QuantizationScheme(s), V, unit);
            for (double a : pts) {
                CHECK(std::fabs(T(a, a) - 0.5 * a) < 1e-10);
                for (double b : pts) CHECK(std::fabs(T(a, b) - T(b, a)) < 1e-10);
            }
        }
}

TEST_CASE("free reduction and hyperbolic identities") {
    KernelPolicy quad;
    quad.method = KernelMethod::Quadrature;
    for (auto s : named) {
        const KernelFactor T(QuantizationScheme(s), Potential::free(), unit, quad);
        for (double a = -3; a <= 3; a += 0.5)
            for (double b = -3; b <= 3; b += 0.5) CHECK(std::fabs(T(a, b) - 0.25 * (a + b)) < 1e-10);
    }
    for (double a = -2.5; a <= 2.5; a += 0.5)
        for (double b = -2.5; b <= 2.5; b += 0.7) {
            if (a == b) continue;
            const double w = kernel_factor_harmonic_closed(NamedScheme::Weyl, unit, 1.0, a, b);
            const double x = 0.5 * (a - b) * (a - b);
            CHECK(kernel_factor_harmonic_closed(NamedScheme::SimpleSymmetric, unit, 1.0, a, b) ==
                  doctest::Approx(w * std::cosh(x)).epsilon(1e-10));
            CHECK(kernel_factor_harmonic_closed(NamedScheme::BornJordan, unit, 1.0, a, b) ==
                  doctest::Approx(w * std::sinh(x) / x).epsilon(1e-10));
        }
}

TEST_CASE("closed forms honour mass, hbar and omega") {
    const PhysicalParams p{2.0, 0.5};
    const double omega = 1.5;
    KernelPolicy quad;
    quad.method = KernelMethod::Quadrature;
    for (auto s : named) {
        const KernelFactor closed(QuantizationScheme(s), Potential::harmonic(omega, p.mass), p);
        const KernelFactor integral(QuantizationScheme(s), Potential::harmonic(omega, p.mass), p, quad);
        for (double a : {-0.9, 0.4, 1.1})
            for (double b : {-0.3, 0.8})
                CHECK(closed(a, b) == doctest::Approx(integral(a, b)).epsilon(1e-9));
    }
}

TEST_CASE("general-coefficient series matches the integral forms") {
    const Potential V = Potential::polynomial({0.0, 0.0, 0.5});
    for (auto [rows, s] : {std::pair{GeneralPolynomial::weyl_rows(81), NamedScheme::Weyl},
                           std::pair{GeneralPolynomial::symmetric_rows(81), NamedScheme::SimpleSymmetric},
                           std::pair{GeneralPolynomial::born_jordan_rows(81), NamedScheme::BornJordan}}) {
        const KernelFactor general(QuantizationScheme(rows), V, unit);
        for (double a : {-1.0, 0.3, 1.2})
            for (double b : {-0.6, 0.9})
                CHECK(general(a, b) == doctest::Approx(kernel_factor_harmonic_closed(s, unit, 1.0, a, b)).epsilon(1e-10));
    }
    // A non-polynomial potential has no coefficient expansion.
    CHECK_THROWS_AS(KernelFactor(QuantizationScheme(GeneralPolynomial::weyl_rows(10)), Potential::sinusoidal(1, 1), unit),
                    ConfigError);
}

TEST_CASE("potential difference coefficients") {
    // V = q^2: int_0^q (q^2 - s^2) ds = 2 q^3 / 3; squared: int_0^q (q^2 - s^2)^2 ds = 8 q^5 / 15.
    const auto a = potential_difference_coefficients({0.0, 0.0, 1.0}, 2);
    CHECK(a[0][1] == 1.0);
    CHECK(a[1][3] == doctest::Approx(2.0 / 3.0));
    CHECK(a[2][5] == doctest::Approx(8.0 / 15.0));
}

TEST_CASE("deformed kernel is the base kernel times Omega") {
    const auto def = QuantizationScheme::deformed(QuantizationScheme::weyl(), Deformation::quadratic(20.0));
    const KernelFactor T(def, Potential::harmonic(1.0), unit), W(QuantizationScheme::weyl(), Potential::harmonic(1.0), unit);
    for (double a : {-1.0, 0.5})
        for (double b : {0.2, 1.7}) CHECK(T(a, b) == doctest::Approx(W(a, b) * (1 + 20.0 * (a - b) * (a - b))));
    CHECK(T(0.8, 0.8) == doctest::Approx(0.4));
}

TEST_CASE("kernel method selection") {
    KernelPolicy closed;
    closed.method = KernelMethod::Closed;
    CHECK_THROWS_AS(KernelFactor(QuantizationScheme::weyl(), Potential::sinusoidal(1, 1), unit, closed), ConfigError);
    CHECK(KernelFactor(QuantizationScheme::weyl(), Potential::harmonic(1.0), unit).uses_closed_form());
    CHECK_FALSE(KernelFactor(QuantizationScheme::weyl(), Potential::sinusoidal(1, 1), unit).uses_closed_form());
}

TEST_CASE("operator kernel") {
    const KernelFactor W(QuantizationScheme::weyl(), Potential::harmonic(1.0), unit);
    const auto K = assemble_kernel(W, unit);
    CHECK(K(0.8, 0.8) == std::complex<double>(0.0, 0.0));
    const KernelFactor F(QuantizationScheme::weyl(), Potential::free(), unit);
    const auto KF = assemble_kernel(F, unit);
    CHECK(KF(3.0, 1.0) == std::complex<double>(0.0, -1.0));
    CHECK(K(1.0, 0.0) == std::conj(K(0.0, 1.0)));
    for (double a : {-1.5, 0.2, 2.0})
        for (double b : {-0.4, 1.0}) {
            CHECK(K(a, b) == std::conj(K(b, a)));
            CHECK(K(a, b).real() == 0.0);
        }
    const PhysicalParams p{2.0, 0.5};
    const KernelFactor F2(QuantizationScheme::weyl(), Potential::free(), p);
    CHECK(assemble_kernel(F2, p)(3.0, 1.0).imag() == doctest::Approx(-4.0));
}
