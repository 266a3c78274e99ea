#include "toa/propagate/propagator.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>

#include "toa/errors.hpp"
#include "toa/simd/kernels.hpp"

namespace toa {

void EvolutionConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
    if (stride < 1) throw ConfigError("stride must be at least 1");
    if (!(edge_fraction >= 0.0 && edge_fraction < 0.5))
        throw ConfigError("edge_fraction must lie in [0, 0.5)");
}

struct SplitStepPropagator::Fft {
    fftw_complex* buf = nullptr;
    fftw_plan forward = nullptr, backward = nullptr;

    explicit Fft(std::size_t n) {
        buf = fftw_alloc_complex(n);
        // ESTIMATE plans depend only on the size, so repeated runs are bit-identical.
        forward = fftw_plan_dft_1d(int(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        backward = fftw_plan_dft_1d(int(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Fft() {
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
        fftw_free(buf);
    }
};

SplitStepPropagator::SplitStepPropagator(const SpatialGrid& grid, const Potential& V,
                                         const PhysicalParams& params, double dt)
    : N_(grid.N), dt_(dt), half_v_(grid.N), kinetic_(grid.N), fft_(std::make_unique<Fft>(grid.N)) {
    params.validate();
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    const double L = 2.0 * grid.l;
    for (std::size_t i = 0; i < N_; ++i)
        half_v_[i] = std::polar(1.0, -V(grid.points[i]) * dt / (2.0 * params.hbar));
    for (std::size_t n = 0; n < N_; ++n) {
        const double m = n < N_ / 2 ? double(n) : double(n) - double(N_);
        const double k = 2.0 * std::numbers::pi * m / L;
        kinetic_[n] = std::polar(1.0 / double(N_), -params.hbar * k * k * dt / (2.0 * params.mass));
    }
}

SplitStepPropagator::~SplitStepPropagator() = default;

void SplitStepPropagator::step(std::complex<double>* psi) {
    const auto& K = simd::active();
    auto* buf = reinterpret_cast<std::complex<double>*>(fft_->buf);
    K.mul_phase(psi, half_v_.data(), N_);
    std::memcpy(buf, psi, N_ * sizeof(std::complex<double>));
    fftw_execute(fft_->forward);
    K.mul_phase(buf, kinetic_.data(), N_);
    fftw_execute(fft_->backward);
    std::memcpy(psi, buf, N_ * sizeof(std::complex<double>));
    K.mul_phase(psi, half_v_.data(), N_);
}

Observables measure(const std::vector<std::complex<double>>& psi, const SpatialGrid& grid) {
    const simd::Moments m = simd::active().moments(psi.data(), grid.points.data(), grid.N);
    const double norm = m.m0 * grid.delta;
    const double mean = m.m1 * grid.delta;
    const double var = std::max(0.0, m.m2 * grid.delta - mean * mean);
    return {norm, mean, var};
}

void split_step(WavefunctionState& state, const Potential& V, const PhysicalParams& params,
                double dt) {
    SplitStepPropagator prop(state.grid, V, params, dt);
    prop.step(state.psi.data());
    state.t += dt;
}

namespace {

double edge_mass(const std::vector<std::complex<double>>& psi, const SpatialGrid& grid,
                 double fraction) {
    const double cut = (1.0 - fraction) * grid.l;
    double s = 0.0;
    for (std::size_t i = 0; i < grid.N; ++i)
        if (std::fabs(grid.points[i]) > cut) s += std::norm(psi[i]);
    return s * grid.delta;
}

}  // namespace

ObservableSeries evolve_and_record(WavefunctionState& state, const Potential& V,
                                   const PhysicalParams& params, const EvolutionConfig& config) {
    config.validate();
    if (state.psi.size() != state.grid.N) throw DomainError("state does not match its grid");

    SplitStepPropagator prop(state.grid, V, params, config.dt);
    ObservableSeries s;
    const double norm0 = measure(state.psi, state.grid).norm;
    s.initial_edge_mass = edge_mass(state.psi, state.grid, config.edge_fraction);
    s.max_edge_mass = s.initial_edge_mass;
    bool warned = false;
    if (config.density_stride > 0) s.density_q = state.grid.points;

    auto record = [&](std::size_t step) {
        const Observables o = measure(state.psi, state.grid);
        s.times.push_back(state.t);
        s.mean_q.push_back(o.mean);
        s.var_q.push_back(o.var);
        s.norm.push_back(o.norm);
        if (std::fabs(o.norm - norm0) > config.norm_drift_limit) {
            std::ostringstream os;
            os << "norm drifted from " << norm0 << " to " << o.norm << " at t = " << state.t;
            throw NumericalError(os.str());
        }
        if (config.density_stride > 0 && step % config.density_stride == 0) {
            std::vector<double> rho(state.grid.N);
            for (std::size_t i = 0; i < state.grid.N; ++i) rho[i] = std::norm(state.psi[i]);
            s.density_times.push_back(state.t);
            s.densities.push_back(std::move(rho));
        }
        const double edge = edge_mass(state.psi, state.grid, config.edge_fraction);
        s.max_edge_mass = std::max(s.max_edge_mass, edge);
        if (edge > config.edge_mass_limit && !warned) {
            std::ostringstream os;
            os << "probability " << edge << " in the outer " << config.edge_fraction * 100
               << "% of the box at t = " << state.t << "; periodic wraparound may affect results";
            if (config.edge_policy == EdgePolicy::Abort) throw NumericalError(os.str());
            s.warnings.push_back(os.str());
            warned = true;
        }
    };

    const double t0 = state.t;
    record(0);
    for (std::size_t k = 1; k <= config.steps; ++k) {
        prop.step(state.psi.data());
        // Recompute from the step count so long runs do not accumulate time round-off.
        state.t = t0 + double(k) * config.dt;
        const bool obs = k % config.stride == 0 || k == config.steps;
        const bool dens = config.density_stride > 0 && k % config.density_stride == 0;
        if (obs || dens) record(k);
    }
    return s;
}

std::vector<double> density_at(const WavefunctionState& initial, const Potential& V,
                               const PhysicalParams& params, double t, double dt_max) {
    if (!(t >= 0.0)) throw DomainError("density_at needs t >= 0");
    WavefunctionState s = initial;
    const std::size_t steps = std::size_t(std::ceil(t / dt_max));
    if (steps > 0) {
        SplitStepPropagator prop(s.grid, V, params, t / double(steps));
        for (std::size_t k = 0; k < steps; ++k) prop.step(s.psi.data());
    }
    std::vector<double> rho(s.grid.N);
    for (std::size_t i = 0; i < s.grid.N; ++i) rho[i] = std::norm(s.psi[i]);
    return rho;
}

}  // namespace toa
