#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "toa/core/physics.hpp"
#include "toa/kernel/scheme.hpp"
#include "toa/quad/gauss_kronrod.hpp"
#include "toa/special/hypergeometric.hpp"

namespace toa {

enum class KernelMethod {
    Auto,        // closed form where one exists, otherwise quadrature or series
    Closed,      // closed form required; error if unavailable
    Quadrature,  // integral representations even when a closed form exists
};

struct KernelPolicy {
    QuadPolicy quad{1e-12, 1e-10, 4000};
    HypEvalPolicy hyp{};
    // Separations below diag_eps * length_scale use analytic diagonal limits.
    double diag_eps = 1e-8;
    double length_scale = 1.0;
    KernelMethod method = KernelMethod::Auto;
    // Truncation controls for the general-coefficient series.
    int series_k_max = 40;
    double series_tol = 1e-15;

    double eps_diag() const { return diag_eps * length_scale; }
};

// T_Q(q, q'): real, symmetric, T(q, q) = q / 2.
class KernelFactor {
public:
    KernelFactor(QuantizationScheme scheme, Potential V, PhysicalParams params,
                 KernelPolicy policy = {});

    double operator()(double q, double qp) const;
    // Quad-precision value where a closed form is used; otherwise the double value.
    __float128 eval_quad(double q, double qp) const;
    bool uses_closed_form() const { return closed_; }

    const QuantizationScheme& scheme() const { return scheme_; }
    const Potential& potential() const { return V_; }
    const PhysicalParams& params() const { return params_; }
    const KernelPolicy& policy() const { return policy_; }

private:
    double root_value(double q, double qp) const;
    double weyl_integral(double q, double qp) const;
    double symmetric_integral(double q, double qp) const;
    double born_jordan_integral(double q, double qp) const;
    double general_series(double q, double qp) const;

    QuantizationScheme scheme_;
    Potential V_;
    PhysicalParams params_;
    KernelPolicy policy_;
    bool closed_ = false;
    // a_n(k) for polynomial-type potentials, indexed [k][n].
    std::vector<std::vector<double>> a_nk_;
};

double kernel_factor(const QuantizationScheme& scheme, const Potential& V,
                     const PhysicalParams& params, double q, double qp,
                     const KernelPolicy& policy = {});

// Literal sinh/cosh closed forms for the harmonic oscillator.
double kernel_factor_harmonic_closed(NamedScheme scheme, const PhysicalParams& params,
                                     double omega, double q, double qp, double diag_eps = 1e-8);

// Cancellation-free product forms of the same closed forms, evaluated in quad precision:
// T_W = (m/2) sinhc(a d m), T_S = T_W cosh(a d^2/2), T_BJ = T_W sinhc(a d^2/2).
__float128 harmonic_factor_quad(NamedScheme scheme, __float128 a, __float128 q, __float128 qp);

// Coefficients a_n(k) of int_0^q (V(q) - V(s))^k ds = sum_n a_n(k) q^n, for k = 0..k_max.
std::vector<std::vector<double>> potential_difference_coefficients(
    const std::vector<double>& poly, int k_max);

// K(q, q') = -i (mu / hbar) T(q, q') sgn(q - q'), sgn(0) = 0.
class OperatorKernel {
public:
    OperatorKernel(std::shared_ptr<const KernelFactor> factor, PhysicalParams params);

    std::complex<double> operator()(double q, double qp) const;
    // Imaginary part of K, which carries all of its content.
    double imag(double q, double qp) const;
    __float128 imag_quad(double q, double qp) const;

    const KernelFactor& factor() const { return *factor_; }
    const PhysicalParams& params() const { return params_; }

private:
    std::shared_ptr<const KernelFactor> factor_;
    PhysicalParams params_;
};

OperatorKernel assemble_kernel(const KernelFactor& factor, const PhysicalParams& params);

}  // namespace toa
