#pragma once

#include <string>
#include <variant>
#include <vector>

namespace toa {

struct PhysicalParams {
    double mass = 1.0;
    double hbar = 1.0;

    void validate() const;
};

struct PhaseSpacePoint {
    double q = 0.0;
    double p = 0.0;
};

struct FreePotential {};

struct HarmonicPotential {
    double omega = 1.0;
};

// V(q) = v0 * sin(a q)
struct SinusoidalPotential {
    double v0 = 1.0;
    double a = 1.0;
};

// V(q) = sum_n c[n] q^n
struct PolynomialPotential {
    std::vector<double> coefficients;
};

class Potential {
public:
    using Variant = std::variant<FreePotential, HarmonicPotential, SinusoidalPotential,
                                 PolynomialPotential>;

    Potential() = default;
    Potential(Variant v, double mass = 1.0);

    static Potential free() { return Potential(FreePotential{}); }
    static Potential harmonic(double omega, double mass = 1.0) {
        return Potential(HarmonicPotential{omega}, mass);
    }
    static Potential sinusoidal(double v0, double a) {
        return Potential(SinusoidalPotential{v0, a});
    }
    static Potential polynomial(std::vector<double> c) {
        return Potential(PolynomialPotential{std::move(c)});
    }

    double operator()(double q) const;
    __float128 eval_quad(__float128 q) const;

    // V(-q) as a potential of the same family.
    Potential reflected() const;

    bool is_even() const;
    bool is_free() const;
    const Variant& variant() const { return v_; }
    double mass() const { return mass_; }
    std::string describe() const;

private:
    Variant v_ = FreePotential{};
    // The harmonic variant stores (1/2) mu omega^2 q^2, so it needs mu.
    double mass_ = 1.0;
};

inline double potential_eval(const Potential& V, double q) { return V(q); }

// Exact harmonic time of arrival at the origin, -(1/omega) atan(mu omega q / p).
double classical_toa_harmonic(const PhysicalParams& params, double omega, PhaseSpacePoint pt);

struct SeriesResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int terms = 0;
};

// Local time of arrival at x, summed through order k_max.
SeriesResult ltoa_series(const PhysicalParams& params, const Potential& V, double x,
                         PhaseSpacePoint pt, int k_max);

}  // namespace toa
