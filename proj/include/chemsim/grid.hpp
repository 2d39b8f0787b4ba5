#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace chemsim {

/// Cell-centered values on a structured grid; geometry lives in the grid
/// object that is passed alongside. Densities are expected >= 0, signal
/// fields in [0, gamma]; both are asserted where it matters, not on every
/// mutation.
using ScalarField = std::vector<double>;

/// Uniform cell-centered grid on the rectangle (0,Lx) x (0,Ly).
/// Cell (i,j) has center ((i+1/2)hx, (j+1/2)hy) and index j*nx + i
/// (row-major, x fastest).
struct Grid2D {
    double Lx = 0.0, Ly = 0.0;
    int nx = 0, ny = 0;
    double hx = 0.0, hy = 0.0;

    static Grid2D make(double Lx, double Ly, int nx, int ny);

    int cells() const { return nx * ny; }
    int idx(int i, int j) const { return j * nx + i; }
    double xc(int i) const { return (i + 0.5) * hx; }
    double yc(int j) const { return (j + 0.5) * hy; }
    double cell_area() const { return hx * hy; }
    double area() const { return Lx * Ly; }
    double boundary_measure() const { return 2.0 * (Lx + Ly); }
    double diameter() const;
    double h_min() const { return hx < hy ? hx : hy; }
};

/// Radial grid on the ball B_R(0) in d >= 2 dimensions. Cell i covers
/// [ih, (i+1)h] with center r_i = (i+1/2)h; no center sits at r = 0, so
/// metric factors r^{1-d} stay finite. weight[i] = sigma_d r_i^{d-1} h is
/// the quadrature weight of the radial measure.
struct RadialGrid {
    int d = 0;
    double R = 0.0;
    int nr = 0;
    double h = 0.0;
    double sigma_d = 0.0; // surface area of the unit sphere in R^d
    std::vector<double> weight;

    static RadialGrid make(int d, double R, int nr);

    int cells() const { return nr; }
    double rc(int i) const { return (i + 0.5) * h; }
    double rf(int i) const { return i * h; } // face radii, i = 0..nr
    double ball_volume() const;              // sigma_d R^d / d
};

/// Surface area of the unit sphere in R^d (sigma_2 = 2pi, sigma_3 = 4pi).
double unit_sphere_area(int d);

struct GeometrySpec {
    enum class Kind { rect2d, radial };
    Kind kind = Kind::rect2d;
    // rect2d
    double Lx = 1.0, Ly = 1.0;
    int nx = 0, ny = 0;
    // radial
    int d = 2;
    double R = 1.0;
    int nr = 0;
};

using Grid = std::variant<Grid2D, RadialGrid>;

/// Deterministic grid construction: one spec always yields the bitwise
/// identical grid. Rejects non-positive extents, too-few cells, d < 2.
Grid build_grid(const GeometrySpec& spec);

} // namespace chemsim
