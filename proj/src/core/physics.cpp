#include "toa/core/physics.hpp"

#include <quadmath.h>

#include <cmath>
#include <sstream>

#include "toa/errors.hpp"
#include "toa/quad/gauss_kronrod.hpp"
#include "toa/special/hypergeometric.hpp"

namespace toa {

void PhysicalParams::validate() const {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw ConfigError("mass must be positive");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ConfigError("hbar must be positive");
}

Potential::Potential(Variant v, double mass) : v_(std::move(v)), mass_(mass) {
    if (!(mass_ > 0.0)) throw ConfigError("mass must be positive");
    if (auto* h = std::get_if<HarmonicPotential>(&v_)) {
        if (!(h->omega > 0.0) || !std::isfinite(h->omega))
            throw ConfigError("omega must be positive");
    } else if (auto* s = std::get_if<SinusoidalPotential>(&v_)) {
        if (!std::isfinite(s->v0) || !std::isfinite(s->a))
            throw ConfigError("sinusoidal v0 and a must be finite");
    } else if (auto* p = std::get_if<PolynomialPotential>(&v_)) {
        for (double c : p->coefficients)
            if (!std::isfinite(c)) throw ConfigError("polynomial coefficients must be finite");
    }
}

double Potential::operator()(double q) const {
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, FreePotential>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, HarmonicPotential>) {
                return 0.5 * mass_ * v.omega * v.omega * q * q;
            } else if constexpr (std::is_same_v<T, SinusoidalPotential>) {
                return v.v0 * std::sin(v.a * q);
            } else {
                double r = 0.0;
                for (auto it = v.coefficients.rbegin(); it != v.coefficients.rend(); ++it)
                    r = r * q + *it;
                return r;
            }
        },
        v_);
}

__float128 Potential::eval_quad(__float128 q) const {
    return std::visit(
        [&](const auto& v) -> __float128 {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, FreePotential>) {
                return 0;
            } else if constexpr (std::is_same_v<T, HarmonicPotential>) {
                __float128 w = v.omega;
                return __float128(0.5) * __float128(mass_) * w * w * q * q;
            } else if constexpr (std::is_same_v<T, SinusoidalPotential>) {
                return __float128(v.v0) * sinq(__float128(v.a) * q);
            } else {
                __float128 r = 0;
                for (auto it = v.coefficients.rbegin(); it != v.coefficients.rend(); ++it)
                    r = r * q + __float128(*it);
                return r;
            }
        },
        v_);
}

Potential Potential::reflected() const {
    if (auto* s = std::get_if<SinusoidalPotential>(&v_))
        return Potential(SinusoidalPotential{-s->v0, s->a}, mass_);
    if (auto* p = std::get_if<PolynomialPotential>(&v_)) {
        PolynomialPotential r = *p;
        for (std::size_t n = 1; n < r.coefficients.size(); n += 2)
            r.coefficients[n] = -r.coefficients[n];
        return Potential(r, mass_);
    }
    return *this;
}

bool Potential::is_even() const {
    if (auto* s = std::get_if<SinusoidalPotential>(&v_)) return s->v0 == 0.0 || s->a == 0.0;
    if (auto* p = std::get_if<PolynomialPotential>(&v_)) {
        for (std::size_t n = 1; n < p->coefficients.size(); n += 2)
            if (p->coefficients[n] != 0.0) return false;
    }
    return true;
}

bool Potential::is_free() const {
    if (std::holds_alternative<FreePotential>(v_)) return true;
    if (auto* s = std::get_if<SinusoidalPotential>(&v_)) return s->v0 == 0.0;
    if (auto* p = std::get_if<PolynomialPotential>(&v_)) {
        // A constant offset leaves every V(q) - V(q') difference at zero.
        for (std::size_t n = 1; n < p->coefficients.size(); ++n)
            if (p->coefficients[n] != 0.0) return false;
        return true;
    }
    return false;
}

std::string Potential::describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, FreePotential>) {
                os << "free";
            } else if constexpr (std::is_same_v<T, HarmonicPotential>) {
                os << "harmonic(omega=" << v.omega << ")";
            } else if constexpr (std::is_same_v<T, SinusoidalPotential>) {
                os << "sinusoidal(v0=" << v.v0 << ", a=" << v.a << ")";
            } else {
                os << "polynomial(";
                for (std::size_t i = 0; i < v.coefficients.size(); ++i)
                    os << (i ? ", " : "") << v.coefficients[i];
                os << ")";
            }
        },
        v_);
    return os.str();
}

double classical_toa_harmonic(const PhysicalParams& params, double omega, PhaseSpacePoint pt) {
    if (pt.p == 0.0) throw DomainError("stationary-turning input: p = 0");
    if (!(omega > 0.0)) throw DomainError("omega must be positive");
    return -std::atan(params.mass * omega * pt.q / pt.p) / omega;
}

SeriesResult ltoa_series(const PhysicalParams& params, const Potential& V, double x,
                         PhaseSpacePoint pt, int k_max) {
    if (pt.p == 0.0) throw DomainError("stationary-turning input: p = 0");
    if (k_max < 0) throw DomainError("k_max must be non-negative");

    const double mu = params.mass, p = pt.p, q = pt.q;
    const double vq = V(q);
    const QuadPolicy qp{1e-13, 1e-12, 2000};

    SeriesResult res;
    double prefactor = mu / p;  // mu^{k+1} / p^{2k+1}
    double prev_mag = -1.0;
    int rising = 0;
    for (int k = 0; k <= k_max; ++k) {
        double inner;
        if (k == 0) {
            inner = q - x;
        } else if (V.is_free()) {
            inner = 0.0;
        } else {
            inner = integrate([&](double s) { return std::pow(vq - V(s), k); }, x, q, qp).value;
        }
        const double sign = (k & 1) ? -1.0 : 1.0;
        const double term = -sign * odd_factorial_ratio(k) * prefactor * inner;
        res.value += term;
        res.error_estimate = std::fabs(term);
        res.terms = k + 1;

        const double mag = std::fabs(term);
        if (mag > 0.0 && prev_mag > 0.0 && mag >= prev_mag) {
            if (++rising >= 3)
                throw NumericalError("series diverging at this phase-space point (q = " +
                                     std::to_string(q) + ", p = " + std::to_string(p) + ")");
        } else {
            rising = 0;
        }
        if (mag > 0.0) prev_mag = mag;
        prefactor *= mu / (p * p);
    }
    return res;
}

}  // namespace toa
