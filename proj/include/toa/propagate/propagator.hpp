#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "toa/core/physics.hpp"
#include "toa/spectral/grid.hpp"

namespace toa {

struct WavefunctionState {
    SpatialGrid grid;
    std::vector<std::complex<double>> psi;
    double t = 0.0;
};

enum class EdgePolicy { Warn, Abort };

struct EvolutionConfig {
    double dt = 1e-5;
    std::size_t steps = 0;
    std::size_t stride = 1;          // observables every stride steps
    std::size_t density_stride = 0;  // density snapshots every density_stride steps; 0 = none
    double norm_drift_limit = 1e-6;
    // Probability in the outer edge_fraction of the box that counts as wraparound.
    double edge_fraction = 0.05;
    double edge_mass_limit = 1e-6;
    EdgePolicy edge_policy = EdgePolicy::Warn;

    void validate() const;
};

struct ObservableSeries {
    std::vector<double> times;
    std::vector<double> mean_q;
    std::vector<double> var_q;
    std::vector<double> norm;
    std::vector<double> density_times;
    std::vector<std::vector<double>> densities;
    std::vector<double> density_q;  // grid points of each snapshot
    double max_edge_mass = 0.0;
    double initial_edge_mass = 0.0;
    std::vector<std::string> warnings;
};

// Strang splitting exp(-iV dt/2h) F^-1 exp(-i h k^2 dt / 2mu) F exp(-iV dt/2h) with
// periodic momenta k_n = 2 pi n / (2l), n in [-N/2, N/2).
class SplitStepPropagator {
public:
    SplitStepPropagator(const SpatialGrid& grid, const Potential& V, const PhysicalParams& params,
                        double dt);
    ~SplitStepPropagator();
    SplitStepPropagator(const SplitStepPropagator&) = delete;
    SplitStepPropagator& operator=(const SplitStepPropagator&) = delete;

    void step(std::complex<double>* psi);
    double dt() const { return dt_; }

private:
    struct Fft;
    std::size_t N_;
    double dt_;
    std::vector<std::complex<double>> half_v_;
    std::vector<std::complex<double>> kinetic_;  // includes the 1/N of the inverse transform
    std::unique_ptr<Fft> fft_;
};

struct Observables {
    double norm, mean, var;
};
Observables measure(const std::vector<std::complex<double>>& psi, const SpatialGrid& grid);

void split_step(WavefunctionState& state, const Potential& V, const PhysicalParams& params,
                double dt);

ObservableSeries evolve_and_record(WavefunctionState& state, const Potential& V,
                                   const PhysicalParams& params, const EvolutionConfig& config);

// Density |psi(q, t)|^2 after evolving to time t with a step no larger than dt_max.
std::vector<double> density_at(const WavefunctionState& initial, const Potential& V,
                               const PhysicalParams& params, double t, double dt_max);

}  // namespace toa
