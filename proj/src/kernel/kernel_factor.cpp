#include "toa/kernel/kernel_factor.hpp"

#include <quadmath.h>

#include <cfloat>
#include <cmath>
#include <sstream>

#include "toa/errors.hpp"

namespace toa {

namespace {

std::optional<std::vector<double>> polynomial_form(const Potential& V) {
    return std::visit(
        [&](const auto& v) -> std::optional<std::vector<double>> {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, FreePotential>) {
                return std::vector<double>{};
            } else if constexpr (std::is_same_v<T, HarmonicPotential>) {
                return std::vector<double>{0.0, 0.0, 0.5 * V.mass() * v.omega * v.omega};
            } else if constexpr (std::is_same_v<T, PolynomialPotential>) {
                return v.coefficients;
            } else {
                return std::nullopt;
            }
        },
        V.variant());
}

__float128 sinhc_q(__float128 x) {
    if (fabsq(x) < __float128(1e-4)) {
        __float128 x2 = x * x;
        return 1 + x2 / 6 * (1 + x2 / 20 * (1 + x2 / 42));
    }
    return sinhq(x) / x;
}

// log(sinh(x)/x) and log(cosh(x)) for x >= 0.
double log_sinhc(double x) {
    if (x < 1e-8) return x * x / 6.0;
    if (x < 1.0) return std::log(std::sinh(x) / x);
    return x - std::log(2.0 * x) + std::log1p(-std::exp(-2.0 * x));
}
double log_cosh(double x) { return x - std::log(2.0) + std::log1p(std::exp(-2.0 * x)); }

QuadPolicy tighter(const QuadPolicy& p) {
    return {p.abs_tol * 0.1, p.rel_tol * 0.1, p.max_intervals};
}

}  // namespace

KernelFactor::KernelFactor(QuantizationScheme scheme, Potential V, PhysicalParams params,
                           KernelPolicy policy)
    : scheme_(std::move(scheme)), V_(std::move(V)), params_(params), policy_(policy) {
    params_.validate();
    policy_.hyp.validate();
    if (!(policy_.length_scale > 0.0)) throw ConfigError("length_scale must be positive");

    const auto named = scheme_.named_root();
    const bool harmonic = std::holds_alternative<HarmonicPotential>(V_.variant());
    const bool closed_available = V_.is_free() || (named && harmonic);
    closed_ = closed_available && policy_.method != KernelMethod::Quadrature;
    if (policy_.method == KernelMethod::Closed && !closed_available)
        throw ConfigError("kernel method 'closed' needs a free potential or a harmonic "
                          "potential with a named scheme");

    if (!closed_ && !named) {
        auto poly = polynomial_form(V_);
        if (!poly)
            throw ConfigError("general coefficient scheme requires a polynomial-type potential");
        a_nk_ = potential_difference_coefficients(*poly, policy_.series_k_max);
    }
}

double KernelFactor::operator()(double q, double qp) const {
    if (closed_) return double(eval_quad(q, qp));
    const double t = root_value(q, qp);
    if (std::holds_alternative<DeformedScheme>(scheme_.variant()))
        return t * double(scheme_.deformation_factor(__float128(q) - __float128(qp)));
    return t;
}

__float128 KernelFactor::eval_quad(double q, double qp) const {
    if (!closed_) return (*this)(q, qp);
    const __float128 Q = q, QP = qp;
    __float128 t;
    if (V_.is_free()) {
        t = (Q + QP) / 4;
    } else {
        const auto& h = std::get<HarmonicPotential>(V_.variant());
        const __float128 a = __float128(params_.mass) * __float128(h.omega) / __float128(params_.hbar);
        t = harmonic_factor_quad(*scheme_.named_root(), a, Q, QP);
    }
    return t * scheme_.deformation_factor(Q - QP);
}

double KernelFactor::root_value(double q, double qp) const {
    const auto named = scheme_.named_root();
    if (!named) return general_series(q, qp);
    switch (*named) {
        case NamedScheme::Weyl: return weyl_integral(q, qp);
        case NamedScheme::SimpleSymmetric: return symmetric_integral(q, qp);
        case NamedScheme::BornJordan: return born_jordan_integral(q, qp);
    }
    return 0.0;
}

double KernelFactor::weyl_integral(double q, double qp) const {
    const double m = 0.5 * (q + qp);
    if (m == 0.0) return 0.0;
    const double d = q - qp;
    const double c = params_.mass * d * d / (2.0 * params_.hbar * params_.hbar);
    const double vm = V_(m);
    auto f = [&](double s) { return hyp0f1_one(c * (vm - V_(s)), policy_.hyp); };
    return 0.5 * integrate(f, 0.0, m, policy_.quad).value;
}

double KernelFactor::symmetric_integral(double q, double qp) const {
    const double d = q - qp;
    const double c = params_.mass * d * d / (2.0 * params_.hbar * params_.hbar);
    auto half = [&](double x) {
        if (x == 0.0) return 0.0;
        const double vx = V_(x);
        auto f = [&](double s) { return hyp0f1_one(c * (vx - V_(s)), policy_.hyp); };
        return integrate(f, 0.0, x, policy_.quad).value;
    };
    return 0.25 * (half(q) + half(qp));
}

double KernelFactor::born_jordan_integral(double q, double qp) const {
    const double d = q - qp;
    const double c = params_.mass * d * d / (2.0 * params_.hbar * params_.hbar);
    const QuadPolicy inner = tighter(policy_.quad);
    auto H = [&](double s) {
        if (s == 0.0) return 0.0;
        const double vs = V_(s);
        auto f = [&](double u) { return hyp0f1_one(c * (vs - V_(u)), policy_.hyp); };
        return integrate(f, 0.0, s, inner).value;
    };
    if (std::fabs(d) < policy_.eps_diag()) return 0.5 * H(0.5 * (q + qp));
    return integrate(H, qp, q, policy_.quad).value / (2.0 * d);
}

double KernelFactor::general_series(double q, double qp) const {
    const auto& root = scheme_.root();
    const double d = q - qp;
    const double x = params_.mass * d * d / (params_.hbar * params_.hbar);
    double coef = 1.0, sum = 0.0;
    int quiet = 0;
    for (std::size_t k = 0; k < a_nk_.size(); ++k) {
        double J = 0.0;
        for (std::size_t n = 0; n < a_nk_[k].size(); ++n)
            if (a_nk_[k][n] != 0.0)
                J += a_nk_[k][n] * quantizing_polynomial(root, int(n), q, qp, policy_.eps_diag());
        const double term = coef * J;
        sum += term;
        if (std::fabs(term) <= policy_.series_tol * std::fabs(sum)) {
            if (++quiet >= 2) return 0.5 * sum;
        } else {
            quiet = 0;
        }
        coef *= x / (double(k + 1) * double(2 * k + 2));
    }
    std::ostringstream os;
    os << "general-scheme kernel series did not converge by k = " << a_nk_.size() - 1
       << " at (q, q') = (" << q << ", " << qp << ")";
    throw NumericalError(os.str());
}

std::vector<std::vector<double>> potential_difference_coefficients(
    const std::vector<double>& poly, int k_max) {
    // D(q, s) = V(q) - V(s) as a bivariate table D[i][j] of q^i s^j.
    const int deg = poly.empty() ? 0 : int(poly.size()) - 1;
    const int size = deg * k_max + 1;
    auto at = [size](std::vector<double>& t, int i, int j) -> double& { return t[i * size + j]; };

    std::vector<double> D((deg + 1) * (deg + 1), 0.0);
    for (int n = 1; n <= deg; ++n) {
        D[n * (deg + 1)] += poly[n];
        D[n] -= poly[n];
    }

    std::vector<std::vector<double>> a(k_max + 1);
    std::vector<double> P(size * size, 0.0), next(size * size);
    at(P, 0, 0) = 1.0;
    int pdeg = 0;
    for (int k = 0; k <= k_max; ++k) {
        // int_0^q q^i s^j ds = q^{i+j+1} / (j+1)
        a[k].assign(pdeg + 2, 0.0);
        for (int i = 0; i <= pdeg; ++i)
            for (int j = 0; i + j <= pdeg; ++j) a[k][i + j + 1] += at(P, i, j) / double(j + 1);
        if (k == k_max) break;
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i <= pdeg; ++i)
            for (int j = 0; i + j <= pdeg; ++j) {
                const double pij = at(P, i, j);
                if (pij == 0.0) continue;
                for (int u = 0; u <= deg; ++u)
                    for (int v = 0; u + v <= deg; ++v)
                        if (double dv = D[u * (deg + 1) + v]; dv != 0.0)
                            at(next, i + u, j + v) += pij * dv;
            }
        std::swap(P, next);
        pdeg += deg;
    }
    return a;
}

double kernel_factor(const QuantizationScheme& scheme, const Potential& V,
                     const PhysicalParams& params, double q, double qp,
                     const KernelPolicy& policy) {
    return KernelFactor(scheme, V, params, policy)(q, qp);
}

double kernel_factor_harmonic_closed(NamedScheme scheme, const PhysicalParams& params,
                                     double omega, double q, double qp, double diag_eps) {
    params.validate();
    if (!(omega > 0.0)) throw DomainError("omega must be positive");
    const double a = params.mass * omega / params.hbar;
    const double d = q - qp;
    const double m = 0.5 * (q + qp);

    if (std::fabs(d) < diag_eps) {
        // All three forms agree through third order in the separation.
        const double z = a * d * m;
        return 0.5 * m * (1.0 + z * z / 6.0);
    }

    const double xw = 0.5 * a * (q * q - qp * qp);
    const double x1 = a * q * d, x2 = a * qp * d;
    const double biggest = std::max({std::fabs(xw), std::fabs(x1), std::fabs(x2)});
    if (biggest > 700.0) {
        // Log-space product forms; only the final exponentiation can overflow.
        if (m == 0.0) return 0.0;
        const double h = 0.5 * a * d * d;
        double l = std::log(0.5 * std::fabs(m)) + log_sinhc(std::fabs(a * d * m));
        if (scheme == NamedScheme::SimpleSymmetric) l += log_cosh(h);
        if (scheme == NamedScheme::BornJordan) l += log_sinhc(h);
        if (l > std::log(DBL_MAX)) {
            std::ostringstream os;
            os << "harmonic kernel factor overflows double: sinh/cosh argument magnitude "
               << biggest;
            throw NumericalError(os.str());
        }
        return std::copysign(std::exp(l), m);
    }

    switch (scheme) {
        case NamedScheme::Weyl: return std::sinh(xw) / (2.0 * a * d);
        case NamedScheme::SimpleSymmetric: return (std::sinh(x1) + std::sinh(x2)) / (4.0 * a * d);
        case NamedScheme::BornJordan: {
            // cosh x - cosh y written as 2 (sinh^2(x/2) - sinh^2(y/2)) to avoid
            // cancelling against the constant 1 in each cosh.
            const double s1 = std::sinh(0.5 * x1), s2 = std::sinh(0.5 * x2);
            const double dcosh = 2.0 * (s1 * s1 - s2 * s2);
            return dcosh / (2.0 * a * a * d * d * d);
        }
    }
    return 0.0;
}

__float128 harmonic_factor_quad(NamedScheme scheme, __float128 a, __float128 q, __float128 qp) {
    const __float128 d = q - qp, m = (q + qp) / 2;
    __float128 t = m / 2 * sinhc_q(a * d * m);
    const __float128 h = a * d * d / 2;
    if (scheme == NamedScheme::SimpleSymmetric) t *= coshq(h);
    if (scheme == NamedScheme::BornJordan) t *= sinhc_q(h);
    if (!(fabsq(t) < __float128(DBL_MAX))) {
        std::ostringstream os;
        os << "harmonic kernel factor overflows: argument magnitude "
           << double(fabsq(a * d * m) + h);
        throw NumericalError(os.str());
    }
    return t;
}

OperatorKernel::OperatorKernel(std::shared_ptr<const KernelFactor> factor, PhysicalParams params)
    : factor_(std::move(factor)), params_(params) {
    params_.validate();
}

double OperatorKernel::imag(double q, double qp) const {
    if (q == qp) return 0.0;
    const double t = (*factor_)(q, qp);
    const double v = params_.mass / params_.hbar * t;
    return q > qp ? -v : v;
}

__float128 OperatorKernel::imag_quad(double q, double qp) const {
    if (q == qp) return 0;
    const __float128 v = __float128(params_.mass) / __float128(params_.hbar) * factor_->eval_quad(q, qp);
    return q > qp ? -v : v;
}

std::complex<double> OperatorKernel::operator()(double q, double qp) const {
    return {0.0, imag(q, qp)};
}

OperatorKernel assemble_kernel(const KernelFactor& factor, const PhysicalParams& params) {
    return OperatorKernel(std::make_shared<const KernelFactor>(factor), params);
}

}  // namespace toa
