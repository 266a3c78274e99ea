#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "toa/errors.hpp"

namespace toa {

struct QuadPolicy {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_intervals = 4000;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

namespace gk21 {

// Kronrod abscissae on [0,1]; odd entries (1,3,...,9) are the 10-point Gauss nodes.
inline constexpr double xgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr double wgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr double wg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

// Node placement is symmetric in (a, b), so integrating a mirrored integrand over a
// mirrored interval yields the bitwise-negated result.
template <class F>
Segment rule(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = wgk[10] * fc;
    double gauss = 0.0;
    for (int j = 0; j < 10; ++j) {
        const double dx = h * xgk[j];
        const double s = f(c - dx) + f(c + dx);
        kron += wgk[j] * s;
        if (j & 1) gauss += wg[j / 2] * s;
    }
    return {a, b, kron * h, std::fabs((kron - gauss) * h)};
}

}  // namespace gk21

// Globally adaptive Gauss-Kronrod (G10/K21) integration of f over [a, b].
// Throws NumericalError naming the worst subinterval when the tolerance is not met.
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadPolicy& policy = {}) {
    if (a == b) return {0.0, 0.0, 0};
    // Max-heap on error, kept in a vector so the totals can be re-summed exactly.
    std::vector<gk21::Segment> heap{gk21::rule(f, a, b)};
    double total = heap.front().value, err = heap.front().error;
    int evals = 21;

    // The incremental updates cancel large early estimates against small late ones; the
    // exact sums remove that drift before any decision that depends on it.
    // Pieces are summed outward from `a`, so a mirrored problem sums in mirrored order.
    std::vector<gk21::Segment> ordered;
    auto resum = [&] {
        ordered = heap;
        std::sort(ordered.begin(), ordered.end(), [a](const gk21::Segment& x, const gk21::Segment& y) {
            return std::fabs(x.a - a) + std::fabs(x.b - a) < std::fabs(y.a - a) + std::fabs(y.b - a);
        });
        total = 0.0;
        err = 0.0;
        for (const auto& p : ordered) {
            total += p.value;
            err += p.error;
        }
    };
    auto converged = [&] {
        return err <= std::max(policy.abs_tol, policy.rel_tol * std::fabs(total));
    };
    for (int iter = 1; !converged(); ++iter) {
        if (int(heap.size()) >= policy.max_intervals || iter % 64 == 0) {
            resum();
            if (converged()) break;
        }
        if (int(heap.size()) >= policy.max_intervals) {
            const gk21::Segment& w = heap.front();
            std::ostringstream os;
            os << "quadrature did not converge on [" << a << ", " << b << "]: error " << err
               << " after " << heap.size() << " subintervals; worst subinterval [" << w.a
               << ", " << w.b << "] with error " << w.error;
            throw NumericalError(os.str());
        }
        std::pop_heap(heap.begin(), heap.end());
        const gk21::Segment s = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (s.a + s.b);
        const gk21::Segment l = gk21::rule(f, s.a, mid);
        const gk21::Segment r = gk21::rule(f, mid, s.b);
        evals += 42;
        total += (l.value + r.value) - s.value;
        err += (l.error + r.error) - s.error;
        heap.push_back(l);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(r);
        std::push_heap(heap.begin(), heap.end());
    }
    resum();
    return {total, err, evals};
}

}  // namespace toa
