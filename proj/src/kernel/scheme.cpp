#include "toa/kernel/scheme.hpp"

#include <cmath>
#include <sstream>

#include "toa/errors.hpp"

namespace toa {

std::string to_string(NamedScheme s) {
    switch (s) {
        case NamedScheme::Weyl: return "weyl";
        case NamedScheme::SimpleSymmetric: return "symmetric";
        case NamedScheme::BornJordan: return "born_jordan";
    }
    return "unknown";
}

Deformation Deformation::quadratic(double alpha) {
    if (!std::isfinite(alpha)) throw ConfigError("alpha must be finite");
    std::ostringstream os;
    os.precision(17);
    os << "1+" << alpha << "*x^2";
    const __float128 a = alpha;
    return {os.str(), [a](__float128 x) { return __float128(1) + a * x * x; }};
}

void GeneralPolynomial::validate() const {
    if (rows.empty()) throw ConfigError("general scheme needs at least one coefficient row");
    for (std::size_t n = 0; n < rows.size(); ++n) {
        const auto& r = rows[n];
        if (r.size() != n + 1)
            throw ConfigError("general scheme row " + std::to_string(n) + " must have " +
                              std::to_string(n + 1) + " coefficients");
        double sum = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            if (!std::isfinite(r[j])) throw ConfigError("general scheme coefficients must be finite");
            // Decimal input may differ from its mirror image in the last bits.
            if (std::fabs(r[j] - r[n - j]) > 1e-14 * std::max(std::fabs(r[j]), std::fabs(r[n - j])))
                throw ConfigError("general scheme row " + std::to_string(n) +
                                  " violates a_k = a_{n-k}");
            sum += r[j];
        }
        if (sum == 0.0)
            throw ConfigError("general scheme row " + std::to_string(n) + " sums to zero");
    }
}

GeneralPolynomial GeneralPolynomial::weyl_rows(int n_max) {
    GeneralPolynomial g;
    for (int n = 0; n <= n_max; ++n) {
        std::vector<double> r(n + 1, 1.0);
        for (int j = 1; 2 * j <= n; ++j) r[j] = r[n - j] = r[j - 1] * double(n - j + 1) / double(j);
        g.rows.push_back(std::move(r));
    }
    return g;
}

GeneralPolynomial GeneralPolynomial::symmetric_rows(int n_max) {
    GeneralPolynomial g;
    for (int n = 0; n <= n_max; ++n) {
        std::vector<double> r(n + 1, 0.0);
        r.front() = 1.0;
        r.back() = 1.0;
        g.rows.push_back(std::move(r));
    }
    return g;
}

GeneralPolynomial GeneralPolynomial::born_jordan_rows(int n_max) {
    GeneralPolynomial g;
    for (int n = 0; n <= n_max; ++n) g.rows.emplace_back(n + 1, 1.0);
    return g;
}

QuantizationScheme::QuantizationScheme(GeneralPolynomial g) : v_(std::move(g)) {
    std::get<GeneralPolynomial>(v_).validate();
}

QuantizationScheme::QuantizationScheme(DeformedScheme d) : v_(std::move(d)) {
    const auto& ds = std::get<DeformedScheme>(v_);
    if (!ds.base) throw ConfigError("deformed scheme needs a base scheme");
    if (!ds.omega.omega) throw ConfigError("deformed scheme needs a deformation function");
    if (ds.omega.eval_quad(0) != 1) throw ConfigError("deformation must satisfy Omega(0) = 1");
    for (double x : {0.1, 0.5, 1.0, 3.0}) {
        __float128 a = ds.omega.eval_quad(x), b = ds.omega.eval_quad(-x);
        if (a != b) throw ConfigError("deformation must be even in the separation");
    }
}

QuantizationScheme QuantizationScheme::deformed(const QuantizationScheme& base, Deformation omega) {
    return QuantizationScheme(
        DeformedScheme{std::make_shared<const QuantizationScheme>(base), std::move(omega)});
}

const QuantizationScheme& QuantizationScheme::root() const {
    if (auto* d = std::get_if<DeformedScheme>(&v_)) return d->base->root();
    return *this;
}

std::optional<NamedScheme> QuantizationScheme::named_root() const {
    if (auto* n = std::get_if<NamedScheme>(&root().v_)) return *n;
    return std::nullopt;
}

__float128 QuantizationScheme::deformation_factor(__float128 x) const {
    if (auto* d = std::get_if<DeformedScheme>(&v_))
        return d->omega.eval_quad(x) * d->base->deformation_factor(x);
    return 1;
}

std::string QuantizationScheme::describe() const {
    if (auto* n = std::get_if<NamedScheme>(&v_)) return to_string(*n);
    if (auto* g = std::get_if<GeneralPolynomial>(&v_))
        return "general(" + std::to_string(g->rows.size()) + " rows)";
    const auto& d = std::get<DeformedScheme>(v_);
    return "deformed(" + d.base->describe() + ", " + d.omega.tag + ")";
}

namespace {

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

double named_polynomial(NamedScheme s, int n, double q, double qp, double diag_eps) {
    switch (s) {
        case NamedScheme::Weyl: return ipow(0.5 * (q + qp), n);
        case NamedScheme::SimpleSymmetric: return 0.5 * (ipow(q, n) + ipow(qp, n));
        case NamedScheme::BornJordan: {
            if (std::fabs(q - qp) < diag_eps) {
                double s = 0.0;
                for (int j = 0; j <= n; ++j) s += ipow(q, j) * ipow(qp, n - j);
                return s / double(n + 1);
            }
            return (ipow(q, n + 1) - ipow(qp, n + 1)) / (double(n + 1) * (q - qp));
        }
    }
    return 0.0;
}

}  // namespace

double quantizing_polynomial(const QuantizationScheme& scheme, int n, double q, double qp,
                             double diag_eps) {
    if (n < 0) throw DomainError("quantizing polynomial order must be non-negative");
    const auto& v = scheme.variant();
    if (auto* s = std::get_if<NamedScheme>(&v)) return named_polynomial(*s, n, q, qp, diag_eps);
    if (auto* g = std::get_if<GeneralPolynomial>(&v)) {
        if (std::size_t(n) >= g->rows.size())
            throw DomainError("general scheme has no coefficient row for order " +
                              std::to_string(n));
        const auto& r = g->rows[n];
        double num = 0.0, den = 0.0;
        for (int j = 0; j <= n; ++j) {
            num += r[j] * ipow(q, j) * ipow(qp, n - j);
            den += r[j];
        }
        return num / den;
    }
    const auto& d = std::get<DeformedScheme>(v);
    return quantizing_polynomial(*d.base, n, q, qp, diag_eps) * d.omega(q - qp);
}

}  // namespace toa
