#pragma once

#include <cmath>
#include <limits>

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2, giving ~106 bits of significand.
// Translation units using this header must be compiled with -ffp-contract=off so the
// error-free transforms below are not fused away.

namespace toa {

struct DD {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DD() = default;
    constexpr DD(double h) : hi(h), lo(0.0) {}
    constexpr DD(double h, double l) : hi(h), lo(l) {}

    explicit DD(__float128 x) {
        hi = double(x);
        lo = double(x - __float128(hi));
    }
    explicit operator double() const { return hi + lo; }
    __float128 to_quad() const { return __float128(hi) + __float128(lo); }
};

namespace dd_detail {

inline DD quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

}  // namespace dd_detail

inline DD operator+(DD a, DD b) {
    DD s = dd_detail::two_sum(a.hi, b.hi);
    DD t = dd_detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = dd_detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return dd_detail::quick_two_sum(s.hi, s.lo);
}

inline DD operator-(DD a) { return {-a.hi, -a.lo}; }
inline DD operator-(DD a, DD b) { return a + (-b); }

inline DD operator*(DD a, DD b) {
    DD p = dd_detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline DD operator*(DD a, double b) {
    DD p = dd_detail::two_prod(a.hi, b);
    p.lo += a.lo * b;
    return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline DD operator/(DD a, DD b) {
    double q1 = a.hi / b.hi;
    DD r = a - b * q1;
    double q2 = r.hi / b.hi;
    r = r - b * q2;
    double q3 = r.hi / b.hi;
    return dd_detail::quick_two_sum(q1, q2) + DD(q3);
}

inline DD& operator+=(DD& a, DD b) { return a = a + b; }
inline DD& operator-=(DD& a, DD b) { return a = a - b; }
inline DD& operator*=(DD& a, DD b) { return a = a * b; }
inline DD& operator/=(DD& a, DD b) { return a = a / b; }

inline bool operator<(DD a, DD b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(DD a, DD b) { return b < a; }
inline bool operator<=(DD a, DD b) { return !(b < a); }
inline bool operator>=(DD a, DD b) { return !(a < b); }
inline bool operator==(DD a, DD b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(DD a, DD b) { return !(a == b); }

inline DD abs(DD a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

inline DD sqrt(DD a) {
    if (a.hi <= 0.0) return DD(0.0);
    double x = std::sqrt(a.hi);
    DD r = a - dd_detail::two_prod(x, x);
    return dd_detail::quick_two_sum(x, r.hi * (0.5 / x));
}

inline double to_double(DD a) { return a.hi + a.lo; }
inline double to_double(double a) { return a; }

}  // namespace toa
