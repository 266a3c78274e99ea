#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace toa {

enum class NamedScheme { Weyl, SimpleSymmetric, BornJordan };

std::string to_string(NamedScheme s);

// Even factor Omega(x) of the separation x = q - q' with Omega(0) = 1.
struct Deformation {
    std::string tag;
    std::function<__float128(__float128)> omega;

    // Omega(x) = 1 + alpha x^2
    static Deformation quadratic(double alpha);

    double operator()(double x) const { return double(omega(__float128(x))); }
    __float128 eval_quad(__float128 x) const { return omega(x); }
};

// Ordering-rule coefficients a_j^(n), one row of length n+1 per order n >= 0.
// Rows must be real and palindromic with a nonzero sum.
struct GeneralPolynomial {
    std::vector<std::vector<double>> rows;

    void validate() const;

    static GeneralPolynomial weyl_rows(int n_max);
    static GeneralPolynomial symmetric_rows(int n_max);
    static GeneralPolynomial born_jordan_rows(int n_max);
};

class QuantizationScheme;

struct DeformedScheme {
    std::shared_ptr<const QuantizationScheme> base;
    Deformation omega;
};

class QuantizationScheme {
public:
    using Variant = std::variant<NamedScheme, GeneralPolynomial, DeformedScheme>;

    QuantizationScheme(NamedScheme s) : v_(s) {}
    QuantizationScheme(GeneralPolynomial g);
    QuantizationScheme(DeformedScheme d);

    static QuantizationScheme weyl() { return NamedScheme::Weyl; }
    static QuantizationScheme symmetric() { return NamedScheme::SimpleSymmetric; }
    static QuantizationScheme born_jordan() { return NamedScheme::BornJordan; }
    static QuantizationScheme deformed(const QuantizationScheme& base, Deformation omega);

    const Variant& variant() const { return v_; }

    // The scheme with every deformation layer stripped.
    const QuantizationScheme& root() const;
    std::optional<NamedScheme> named_root() const;
    // Product of every deformation layer at separation x.
    __float128 deformation_factor(__float128 x) const;

    std::string describe() const;

private:
    Variant v_;
};

// P_n(q|q') for the scheme; deformed schemes return P_n * Omega(q - q').
double quantizing_polynomial(const QuantizationScheme& scheme, int n, double q, double qp,
                             double diag_eps = 1e-8);

}  // namespace toa
