#pragma once

#include <functional>

namespace chemsim {

/// Robin boundary data for the signal equation: grad c . nu = (gamma - c) g
/// on the boundary, gamma > 0, g > 0. g is sampled at boundary face
/// midpoints; the radial case uses g at the single outer face (R, 0).
struct BoundaryData {
    double gamma = 1.0;
    std::function<double(double x, double y)> g = [](double, double) { return 1.0; };
};

} // namespace chemsim
