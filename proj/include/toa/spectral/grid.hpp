#pragma once

#include <cstddef>
#include <vector>

namespace toa {

// Midpoint-uniform grid on [-l, l]: q_i = -l + (i + 1/2) delta, delta = 2l / N.
struct SpatialGrid {
    double l = 1.0;
    std::size_t N = 0;
    double delta = 0.0;
    std::vector<double> points;

    std::size_t reflect(std::size_t i) const { return N - 1 - i; }
    std::size_t size() const { return N; }
};

// Requires l > 0 and even N >= 4. Points are exact mirror images of each other.
SpatialGrid build_grid(double l, std::size_t N);

}  // namespace toa
