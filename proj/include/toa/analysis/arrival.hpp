#pragma once

#include <optional>
#include <vector>

#include "toa/errors.hpp"
#include "toa/propagate/propagator.hpp"
#include "toa/spectral/spectrum.hpp"

namespace toa {

// Raised when the variance has no interior minimum in the recorded window.
class NoArrival : public NumericalError {
public:
    using NumericalError::NumericalError;
};

struct ArrivalReport {
    double tau = 0.0;
    std::optional<double> t_cross;
    std::optional<double> t_minvar;
    double min_var = 0.0;
    std::optional<double> rel_dev_cross;
    std::optional<double> rel_dev_minvar;
    // Time at which the two largest density peaks are closest; needs density snapshots.
    std::optional<double> t_coalesce;
    double mean_q_at_tau = 0.0;
    Classification classification = Classification::Unclassified;
};

// Throws NoArrival when the variance minimum sits on the window boundary.
ArrivalReport arrival_report(const ObservableSeries& series, double tau,
                             double arrival_point = 0.0,
                             Classification cls = Classification::Unclassified);

struct ArrivalSettings {
    double dt = 1e-5;
    double horizon = 3.0;           // run to horizon * tau
    std::size_t min_samples = 2000; // observables recorded at least this often
    std::size_t density_snapshots = 0;
    // Long windows widen the step instead of exceeding this many steps.
    std::size_t max_steps = 1000000;
    EvolutionConfig base{};
};

struct ArrivalRun {
    ObservableSeries series;
    std::optional<ArrivalReport> report;
    std::string failure;
};

// Evolve an eigenfunction from t = 0 to horizon * tau and analyse its arrival.
ArrivalRun evolve_eigenfunction(const EigenPair& pair, const SpatialGrid& grid, const Potential& V,
                                const PhysicalParams& params, const ArrivalSettings& settings,
                                double arrival_point = 0.0);

struct PeakShape {
    double peak = 0.0;
    double position = 0.0;
    double fwhm = 0.0;
};

// Height, location and full width at half maximum of the global density peak, with
// linear interpolation of the half-maximum crossings.
PeakShape peak_shape(const std::vector<double>& density, const SpatialGrid& grid);

}  // namespace toa
