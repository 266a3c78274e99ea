#include "toa/spectral/grid.hpp"

#include <cmath>
#include <string>

#include "toa/errors.hpp"

namespace toa {

SpatialGrid build_grid(double l, std::size_t N) {
    if (!(l > 0.0) || !std::isfinite(l)) throw ConfigError("l must be positive");
    if (N < 4 || N % 2 != 0)
        throw ConfigError("N must be even and at least 4 (got " + std::to_string(N) + ")");
    SpatialGrid g;
    g.l = l;
    g.N = N;
    g.delta = 2.0 * l / double(N);
    g.points.resize(N);
    // (2i + 1 - N) is an odd integer, so q_{N-1-i} = -q_i holds bit for bit.
    for (std::size_t i = 0; i < N; ++i)
        g.points[i] = double(2 * long(i) + 1 - long(N)) * l / double(N);
    return g;
}

}  // namespace toa
