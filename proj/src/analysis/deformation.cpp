#include "toa/analysis/deformation.hpp"

#include <cmath>

#include "toa/errors.hpp"

namespace toa {

std::size_t select_reference(const SpectralDecomposition& s, double target_tau, Classification cls) {
    for (std::size_t k = 0; k < s.pairs.size(); ++k) {
        const auto& p = s.pairs[k];
        if (p.tau >= target_tau && p.tau > 0.0 &&
            (cls == Classification::Unclassified || p.classification == cls))
            return k;
    }
    throw NumericalError("no eigenfunction at or above the target eigenvalue has the "
                         "requested classification");
}

namespace {

SpectralDecomposition spectrum_for(const SweepSetup& s, const QuantizationScheme& scheme) {
    const KernelFactor f(scheme, s.V, s.params, s.kernel);
    return solve_spectrum(build_operator_matrix(assemble_kernel(f, s.params), s.grid), s.spectrum);
}

double overlap(const EigenPair& a, const EigenPair& b, double delta) {
    std::complex<double> s{0.0, 0.0};
    for (std::size_t i = 0; i < a.psi.size(); ++i) s += std::conj(a.psi[i]) * b.psi[i];
    return std::abs(s) * delta;
}

}  // namespace

std::vector<SweepEntry> deformation_sweep(const SweepSetup& setup, const std::vector<double>& alphas) {
    for (double a : alphas)
        if (!(a >= 0.0)) throw ConfigError("alpha values must be non-negative");

    const SpectralDecomposition ref_spec = spectrum_for(setup, setup.base);
    const std::size_t ref_idx = select_reference(ref_spec, setup.target_tau, setup.target_class);
    const EigenPair& ref = ref_spec.pairs[ref_idx];

    std::vector<SweepEntry> out;
    for (double alpha : alphas) {
        SweepEntry e;
        e.alpha = alpha;
        const SpectralDecomposition spec =
            alpha == 0.0 ? ref_spec
                         : spectrum_for(setup, QuantizationScheme::deformed(
                                                   setup.base, Deformation::quadratic(alpha)));
        std::size_t best = 0;
        double best_ov = -1.0;
        for (std::size_t k = 0; k < spec.pairs.size(); ++k) {
            if (!(spec.pairs[k].tau > 0.0)) continue;
            const double ov = overlap(ref, spec.pairs[k], setup.grid.delta);
            if (ov > best_ov) {
                best_ov = ov;
                best = k;
            }
        }
        const EigenPair& pair = spec.pairs[best];
        e.tau = pair.tau;
        e.overlap = best_ov;
        e.tracking_lost = best_ov < 0.5;

        ArrivalRun run = evolve_eigenfunction(pair, setup.grid, setup.V, setup.params,
                                              setup.arrival, setup.arrival_point);
        e.report = run.report;
        e.failure = run.failure;
        const double t_peak = e.report ? *e.report->t_minvar : pair.tau;
        const WavefunctionState init{setup.grid, pair.psi, 0.0};
        const PeakShape shape = peak_shape(
            density_at(init, setup.V, setup.params, t_peak, setup.arrival.dt), setup.grid);
        e.peak_position = shape.position;
        e.peak_density = shape.peak;
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace toa
