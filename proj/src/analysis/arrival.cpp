#include "toa/analysis/arrival.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace toa {

namespace {

// Vertex of the parabola through three points.
double parabola_vertex(double t0, double y0, double t1, double y1, double t2, double y2) {
    const double d01 = (y1 - y0) / (t1 - t0);
    const double d12 = (y2 - y1) / (t2 - t1);
    const double a = (d12 - d01) / (t2 - t0);
    if (!(a > 0.0)) return t1;
    return 0.5 * (t0 + t1) - d01 / (2.0 * a);
}

double interpolate(const std::vector<double>& t, const std::vector<double>& y, double x) {
    if (x <= t.front()) return y.front();
    if (x >= t.back()) return y.back();
    const std::size_t hi = std::upper_bound(t.begin(), t.end(), x) - t.begin();
    const std::size_t lo = hi - 1;
    const double w = (x - t[lo]) / (t[hi] - t[lo]);
    return (1.0 - w) * y[lo] + w * y[hi];
}

// Distance between the two largest local maxima of a density profile.
std::optional<double> peak_separation(const std::vector<double>& rho,
                                      const std::vector<double>& q) {
    double b1 = -1.0, b2 = -1.0;
    std::size_t i1 = 0, i2 = 0;
    for (std::size_t i = 1; i + 1 < rho.size(); ++i) {
        if (!(rho[i] >= rho[i - 1] && rho[i] > rho[i + 1])) continue;
        if (rho[i] > b1) {
            b2 = b1;
            i2 = i1;
            b1 = rho[i];
            i1 = i;
        } else if (rho[i] > b2) {
            b2 = rho[i];
            i2 = i;
        }
    }
    if (b2 < 0.0) return 0.0;  // single peak: fully coalesced
    return std::fabs(q[i1] - q[i2]);
}

}  // namespace

ArrivalReport arrival_report(const ObservableSeries& s, double tau, double q0,
                             Classification cls) {
    const std::size_t n = s.times.size();
    if (n < 3) throw DomainError("arrival analysis needs at least 3 samples");
    ArrivalReport r;
    r.tau = tau;
    r.classification = cls;

    // Crossing of <q> through the arrival point nearest tau.
    double scale = 0.0;
    for (double m : s.mean_q) scale = std::max(scale, std::fabs(m - q0));
    if (scale > 1e-10) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double a = s.mean_q[i] - q0, b = s.mean_q[i + 1] - q0;
            if ((a < 0.0) == (b < 0.0) && a != 0.0) continue;
            if (a == 0.0 && b == 0.0) continue;
            const double t = a == b ? s.times[i]
                                    : s.times[i] + (s.times[i + 1] - s.times[i]) * a / (a - b);
            if (std::fabs(t - tau) < std::fabs(best - tau)) best = t;
        }
        if (std::isfinite(best)) r.t_cross = best;
    }

    const auto it = std::min_element(s.var_q.begin(), s.var_q.end());
    const std::size_t k = it - s.var_q.begin();
    if (k == 0 || k + 1 == n)
        throw NoArrival("no arrival detected: variance minimum lies on the window boundary");
    r.t_minvar = parabola_vertex(s.times[k - 1], s.var_q[k - 1], s.times[k], s.var_q[k],
                                 s.times[k + 1], s.var_q[k + 1]);
    r.min_var = s.var_q[k];

    if (tau != 0.0) {
        r.rel_dev_minvar = std::fabs(*r.t_minvar - tau) / std::fabs(tau);
        if (r.t_cross) r.rel_dev_cross = std::fabs(*r.t_cross - tau) / std::fabs(tau);
    }
    r.mean_q_at_tau = interpolate(s.times, s.mean_q, tau);

    if (s.densities.size() >= 3 && !s.density_q.empty()) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < s.densities.size(); ++j) {
            const auto sep = peak_separation(s.densities[j], s.density_q);
            if (sep && *sep < best) {
                best = *sep;
                r.t_coalesce = s.density_times[j];
            }
        }
    }
    return r;
}

ArrivalRun evolve_eigenfunction(const EigenPair& pair, const SpatialGrid& grid, const Potential& V,
                                const PhysicalParams& params, const ArrivalSettings& settings,
                                double q0) {
    ArrivalRun run;
    if (!(pair.tau > 0.0)) {
        run.failure = "arrival analysis needs a positive eigenvalue";
        return run;
    }
    WavefunctionState state{grid, pair.psi, 0.0};
    EvolutionConfig cfg = settings.base;
    cfg.dt = settings.dt;
    const double window = settings.horizon * pair.tau;
    std::string widened;
    if (window / settings.dt > double(settings.max_steps)) {
        cfg.dt = window / double(settings.max_steps);
        widened = "time step widened to " + std::to_string(cfg.dt) + " to cover the window in " +
                  std::to_string(settings.max_steps) + " steps";
    }
    cfg.steps = std::size_t(std::ceil(window / cfg.dt));
    cfg.stride = std::max<std::size_t>(1, cfg.steps / std::max<std::size_t>(1, settings.min_samples));
    cfg.density_stride = settings.density_snapshots
                             ? std::max<std::size_t>(1, cfg.steps / settings.density_snapshots)
                             : 0;
    run.series = evolve_and_record(state, V, params, cfg);
    if (!widened.empty()) run.series.warnings.push_back(widened);
    try {
        run.report = arrival_report(run.series, pair.tau, q0, pair.classification);
    } catch (const NoArrival& e) {
        run.failure = e.what();
    }
    return run;
}

PeakShape peak_shape(const std::vector<double>& rho, const SpatialGrid& grid) {
    const auto it = std::max_element(rho.begin(), rho.end());
    const std::size_t p = it - rho.begin();
    PeakShape s;
    s.peak = *it;
    s.position = grid.points[p];
    const double half = 0.5 * s.peak;
    const auto& q = grid.points;
    double left = q.front(), right = q.back();
    for (std::size_t i = p; i-- > 0;)
        if (rho[i] < half) {
            left = q[i] + (q[i + 1] - q[i]) * (half - rho[i]) / (rho[i + 1] - rho[i]);
            break;
        }
    for (std::size_t i = p + 1; i < rho.size(); ++i)
        if (rho[i] < half) {
            right = q[i - 1] + (q[i] - q[i - 1]) * (rho[i - 1] - half) / (rho[i - 1] - rho[i]);
            break;
        }
    s.fwhm = right - left;
    return s;
}

}  // namespace toa
