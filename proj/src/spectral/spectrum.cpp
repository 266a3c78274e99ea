#include "toa/spectral/spectrum.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <numbers>

#include "toa/errors.hpp"

namespace toa {

std::string to_string(Classification c) {
    switch (c) {
        case Classification::Nodal: return "nodal";
        case Classification::Antinodal: return "antinodal";
        case Classification::Unclassified: return "unclassified";
    }
    return "unclassified";
}

Precision resolve_precision(const OperatorMatrix& M, const SpectrumOptions& opts) {
    if (opts.precision != Precision::Auto) return opts.precision;
    const double err = double(M.n()) * 0x1p-53 * M.max_abs();
    return err > opts.auto_precision_threshold ? Precision::Extended : Precision::Double;
}

void normalize_eigenfunction(std::vector<std::complex<double>>& psi, double delta) {
    double norm2 = 0.0, best = -1.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double a = std::norm(psi[i]);
        norm2 += a;
        if (a > best) {
            best = a;
            arg = i;
        }
    }
    if (!(norm2 > 0.0)) throw NumericalError("cannot normalize a zero eigenvector");
    const std::complex<double> phase = std::conj(psi[arg]) / std::abs(psi[arg]);
    const double scale = 1.0 / std::sqrt(norm2 * delta);
    for (auto& z : psi) z *= phase * scale;
    psi[arg] = {std::abs(psi[arg]), 0.0};
}

std::complex<double> parity_overlap(const EigenPair& pair, const SpatialGrid& grid) {
    std::complex<double> s{0.0, 0.0};
    for (std::size_t i = 0; i < grid.N; ++i) s += std::conj(pair.psi[i]) * pair.psi[grid.reflect(i)];
    return s * grid.delta;
}

Classification classify_eigenfunction(const EigenPair& pair, const SpatialGrid& grid,
                                      double q0) {
    const auto& q = grid.points;
    const std::size_t N = grid.N;
    if (q0 <= q.front() || q0 >= q.back()) return Classification::Unclassified;
    std::size_t hi = std::upper_bound(q.begin(), q.end(), q0) - q.begin();
    std::size_t lo = hi - 1;
    const double t = (q0 - q[lo]) / (q[hi] - q[lo]);
    const double at_q0 = std::norm((1.0 - t) * pair.psi[lo] + t * pair.psi[hi]);

    auto rho = [&](std::size_t i) { return std::norm(pair.psi[i]); };
    auto is_peak = [&](std::size_t i) {
        return (i == 0 || rho(i) >= rho(i - 1)) && (i + 1 == N || rho(i) >= rho(i + 1));
    };
    // Walk outward from q0 to the nearest local maximum of the grid density.
    double L = 0.0;
    for (std::size_t step = 0; step < N && L == 0.0; ++step) {
        double best = 0.0;
        if (lo >= step && is_peak(lo - step)) best = rho(lo - step);
        if (hi + step < N && is_peak(hi + step)) best = std::max(best, rho(hi + step));
        L = best;
    }
    if (!(L > 0.0)) return Classification::Unclassified;
    if (at_q0 < 0.05 * L) return Classification::Nodal;
    if (at_q0 > 0.5 * L) return Classification::Antinodal;
    return Classification::Unclassified;
}

double resolution_floor(const PhysicalParams& params, const SpatialGrid& grid) {
    return 8.0 * params.mass * grid.l * grid.l / (std::numbers::pi * params.hbar * double(grid.N));
}

namespace {

void append_pairs(const HermitianEigen& e, std::vector<EigenPair>& out,
                  const std::function<void(const std::complex<double>*, EigenPair&)>& expand) {
    for (std::size_t j = 0; j < e.n; ++j) {
        EigenPair p;
        p.tau = e.values[j];
        if (!e.vectors.empty()) expand(e.vectors.data() + j * e.n, p);
        out.push_back(std::move(p));
    }
}

}  // namespace

SpectralDecomposition solve_spectrum(const OperatorMatrix& M, const SpectrumOptions& opts) {
    const std::size_t N = M.n();
    if (M.hermiticity_residual() > 1e-12)
        throw NumericalError("operator matrix is not Hermitian to 1e-12");

    SpectralDecomposition out;
    out.grid = M.grid;
    out.max_abs_entry = M.max_abs();
    const Precision prec = resolve_precision(M, opts);
    out.extended = prec == Precision::Extended;

    if (opts.parity == ParityMode::Auto && M.reflection_symmetric()) {
        // In the basis (e_k +- e_{N-1-k}) / sqrt 2, B splits into two antisymmetric blocks
        // B_km +- B_k,N-1-m of half size.
        out.parity_reduced = true;
        const std::size_t h = N / 2;
        const double r = 1.0 / std::sqrt(2.0);
        for (int sign : {+1, -1}) {
            std::vector<double> shi(h * h), slo(h * h);
            for (std::size_t k = 0; k < h; ++k)
                for (std::size_t m = 0; m < h; ++m) {
                    const DD a = M.B_dd(k, m), b = M.B_dd(k, N - 1 - m);
                    const DD v = sign > 0 ? a + b : a - b;
                    shi[k * h + m] = v.hi;
                    slo[k * h + m] = v.lo;
                }
            const HermitianEigen e =
                eigh_i_antisymmetric(shi.data(), slo.data(), h, prec, opts.want_vectors);
            append_pairs(e, out.pairs, [&](const std::complex<double>* c, EigenPair& p) {
                p.psi.assign(N, {0.0, 0.0});
                for (std::size_t k = 0; k < h; ++k) {
                    p.psi[k] = c[k] * r;
                    p.psi[N - 1 - k] = c[k] * (r * sign);
                }
            });
        }
        std::stable_sort(out.pairs.begin(), out.pairs.end(),
                         [](const EigenPair& a, const EigenPair& b) { return a.tau < b.tau; });
    } else {
        const HermitianEigen e =
            eigh_i_antisymmetric(M.hi.data(), M.lo.data(), N, prec, opts.want_vectors);
        append_pairs(e, out.pairs, [&](const std::complex<double>* c, EigenPair& p) {
            p.psi.assign(c, c + N);
        });
    }

    if (opts.want_vectors) {
        for (auto& p : out.pairs) {
            normalize_eigenfunction(p.psi, M.grid.delta);
            p.parity = parity_overlap(p, M.grid);
            p.classification = classify_eigenfunction(p, M.grid, opts.arrival_point);
        }
    }
    return out;
}

}  // namespace toa
