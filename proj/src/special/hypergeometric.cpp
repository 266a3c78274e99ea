#include "toa/special/hypergeometric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "toa/errors.hpp"

namespace toa {

namespace {

// Beyond this the positive series needs too many terms; I0 is used instead.
constexpr double kPositiveSeriesLimit = 2500.0;
// Below this the alternating series cancels too much even in long double.
constexpr double kAlternatingLimit = -30.0;

[[noreturn]] void fail_convergence(double z, int terms) {
    std::ostringstream os;
    os << "0F1(;1;z) series did not converge for |z| = " << std::fabs(z) << " within "
       << terms << " terms";
    throw NumericalError(os.str());
}

}  // namespace

void HypEvalPolicy::validate() const {
    if (!(series_tolerance > 0.0)) throw ConfigError("series_tolerance must be positive");
    if (max_terms < 1) throw ConfigError("max_terms must be at least 1");
}

double hyp0f1_one(double z, const HypEvalPolicy& policy) {
    if (!std::isfinite(z)) throw DomainError("0F1(;1;z) requires finite z");
    if (z == 0.0) return 1.0;

    if (z > kPositiveSeriesLimit) {
        double v = std::cyl_bessel_i(0.0, 2.0 * std::sqrt(z));
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "0F1(;1;z) overflows for |z| = " << z;
            throw NumericalError(os.str());
        }
        return v;
    }
    if (z < kAlternatingLimit) return std::cyl_bessel_j(0.0, 2.0 * std::sqrt(-z));

    if (z > 0.0) {
        double term = 1.0, sum = 1.0;
        for (int k = 1; k <= policy.max_terms; ++k) {
            term *= z / (double(k) * double(k));
            sum += term;
            if (term <= policy.series_tolerance * sum) return sum;
        }
        fail_convergence(z, policy.max_terms);
    }

    // Alternating regime. Terms first grow to ~exp(2 sqrt|z|), so carry extra bits.
    long double lz = z, term = 1.0L, sum = 1.0L, peak = 1.0L;
    for (int k = 1; k <= policy.max_terms; ++k) {
        term *= lz / ((long double)k * (long double)k);
        sum += term;
        peak = std::max(peak, std::fabs(term));
        if (std::fabs(term) <= 0.01L * policy.series_tolerance * std::fabs(sum) ||
            std::fabs(term) <= std::numeric_limits<long double>::epsilon() * peak * 1e-3L)
            return double(sum);
    }
    fail_convergence(z, policy.max_terms);
}

std::uint64_t double_factorial(int n) {
    if (n < -1) throw DomainError("double factorial requires n >= -1");
    std::uint64_t r = 1;
    for (int m = n; m > 1; m -= 2) {
        if (r > std::numeric_limits<std::uint64_t>::max() / std::uint64_t(m))
            throw DomainError("double factorial overflows 64 bits for n = " + std::to_string(n));
        r *= std::uint64_t(m);
    }
    return r;
}

double odd_factorial_ratio(int k) {
    if (k < 0) throw DomainError("odd_factorial_ratio requires k >= 0");
    // (2k-1)!!/k! = prod_{j=1..k} (2j-1)/j
    double r = 1.0;
    for (int j = 1; j <= k; ++j) r *= double(2 * j - 1) / double(j);
    return r;
}

}  // namespace toa
