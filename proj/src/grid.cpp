#include "chemsim/grid.hpp"

#include "chemsim/errors.hpp"

#include <cmath>

namespace chemsim {

double unit_sphere_area(int d) {
    // sigma_d = 2 pi^{d/2} / Gamma(d/2)
    return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

Grid2D Grid2D::make(double Lx, double Ly, int nx, int ny) {
    if (!(Lx > 0.0) || !(Ly > 0.0))
        throw ConfigError("rect2d: extents must be positive");
    if (nx < 4 || ny < 4)
        throw ConfigError("rect2d: need at least 4 cells per direction");
    Grid2D g;
    g.Lx = Lx;
    g.Ly = Ly;
    g.nx = nx;
    g.ny = ny;
    g.hx = Lx / nx;
    g.hy = Ly / ny;
    return g;
}

double Grid2D::diameter() const { return std::sqrt(Lx * Lx + Ly * Ly); }

RadialGrid RadialGrid::make(int d, double R, int nr) {
    if (d < 2)
        throw ConfigError("radial: dimension must be >= 2");
    if (!(R > 0.0))
        throw ConfigError("radial: radius must be positive");
    if (nr < 8)
        throw ConfigError("radial: need at least 8 cells");
    RadialGrid g;
    g.d = d;
    g.R = R;
    g.nr = nr;
    g.h = R / nr;
    g.sigma_d = unit_sphere_area(d);
    g.weight.resize(nr);
    for (int i = 0; i < nr; ++i)
        g.weight[i] = g.sigma_d * std::pow(g.rc(i), d - 1) * g.h;
    return g;
}

double RadialGrid::ball_volume() const { return sigma_d * std::pow(R, d) / d; }

Grid build_grid(const GeometrySpec& spec) {
    if (spec.kind == GeometrySpec::Kind::rect2d)
        return Grid2D::make(spec.Lx, spec.Ly, spec.nx, spec.ny);
    return RadialGrid::make(spec.d, spec.R, spec.nr);
}

} // namespace chemsim
