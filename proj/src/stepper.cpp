#include "chemsim/stepper.hpp"

#include "chemsim/errors.hpp"
#include "chemsim/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace chemsim {

FaceVectors drift_velocity(const ScalarField& n, const ScalarField& c,
                           const SensitivityModel& S, const Grid2D& grid) {
    if (S.kind != SensitivityModel::Kind::tensor2d)
        throw ConfigError("drift_velocity: 2D grid needs a tensor sensitivity");
    FaceVectors v;
    v.xf_vx.assign((grid.nx + 1) * grid.ny, 0.0);
    v.xf_vy.assign((grid.nx + 1) * grid.ny, 0.0);
    v.yf_vx.assign(grid.nx * (grid.ny + 1), 0.0);
    v.yf_vy.assign(grid.nx * (grid.ny + 1), 0.0);
    kernels::drift_velocity_2d(grid, n.data(), c.data(), S,
                               v.xf_vx.data(), v.xf_vy.data(),
                               v.yf_vx.data(), v.yf_vy.data());
    for (double x : v.xf_vx)
        if (!std::isfinite(x)) throw ConfigError("drift_velocity: non-finite sensitivity value");
    for (double x : v.yf_vy)
        if (!std::isfinite(x)) throw ConfigError("drift_velocity: non-finite sensitivity value");
    return v;
}

FaceFluxes compute_fluxes(const ScalarField& n, const FaceVectors& vel, const Grid2D& grid) {
    FaceFluxes f;
    f.fx.assign((grid.nx + 1) * grid.ny, 0.0);
    f.fy.assign(grid.nx * (grid.ny + 1), 0.0);
    kernels::upwind_fluxes_2d(grid, n.data(), vel.xf_vx.data(), vel.yf_vy.data(),
                              f.fx.data(), f.fy.data());
    return f;
}

double max_face_speed(const FaceVectors& vel, const Grid2D& grid) {
    double m = 0.0;
    const int nxf = (grid.nx + 1) * grid.ny;
    for (int f = 0; f < nxf; ++f)
        m = std::max(m, std::hypot(vel.xf_vx[f], vel.xf_vy[f]));
    const int nyf = grid.nx * (grid.ny + 1);
    for (int f = 0; f < nyf; ++f)
        m = std::max(m, std::hypot(vel.yf_vx[f], vel.yf_vy[f]));
    return m;
}

namespace {

double cfl_formula(double h, int dim, double vmax, double safety) {
    if (!(safety > 0.0) || safety > 1.0)
        throw ConfigError("cfl_dt: safety factor must be in (0,1]");
    const double eps = std::numeric_limits<double>::epsilon();
    const double dt_diff = h * h / (2.0 * dim);
    const double dt_adv = h / (2.0 * vmax + eps);
    return safety * std::min(dt_diff, dt_adv);
}

} // namespace

double cfl_dt(const FaceVectors& vel, const Grid2D& grid, double safety) {
    return cfl_formula(grid.h_min(), 2, max_face_speed(vel, grid), safety);
}

double cfl_dt_radial(const std::vector<double>& face_speed, const RadialGrid& grid,
                     double safety) {
    double vmax = 0.0;
    for (double v : face_speed) vmax = std::max(vmax, std::abs(v));
    return cfl_formula(grid.h, grid.d, vmax, safety);
}

std::pair<ScalarField, StepReport> advance(const ScalarField& n, const FaceVectors& vel,
                                           double dt, const Grid2D& grid) {
    const double admissible = cfl_dt(vel, grid, 1.0);
    if (dt > admissible * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "step: dt " << dt << " exceeds admissible CFL step " << admissible;
        throw CflError(msg.str(), admissible);
    }

    FaceFluxes f = compute_fluxes(n, vel, grid);
    ScalarField next(n.size());
    kernels::divergence_update_2d(grid, n.data(), f.fx.data(), f.fy.data(), dt, next.data());

    StepReport rep;
    rep.dt = dt;
    rep.cfl_ratio = dt / admissible;
    const double m = grid.cell_area();
    double mb = 0.0, ma = 0.0;
    double mn = next[0], mx = next[0];
    for (std::size_t k = 0; k < n.size(); ++k) {
        mb += n[k];
        ma += next[k];
        mn = std::min(mn, next[k]);
        mx = std::max(mx, next[k]);
    }
    rep.mass_before = mb * m;
    rep.mass_after = ma * m;
    rep.min_n = mn;
    rep.max_n = mx;

    if (mn < -1e-12)
        throw InternalError("step: density went negative beyond round-off (scheme invariant broken)");
    const double scale = std::max(std::abs(rep.mass_before), 1e-300);
    if (std::abs(rep.mass_after - rep.mass_before) > 1e-12 * scale)
        throw InternalError("step: mass drifted beyond round-off (scheme invariant broken)");
    return {std::move(next), rep};
}

std::pair<ScalarField, StepReport> step_n(const ScalarField& n, const ScalarField& c,
                                          const SensitivityModel& S, double dt,
                                          const Grid2D& grid) {
    return advance(n, drift_velocity(n, c, S, grid), dt, grid);
}

bool detect_blowup(const ScalarField& n, double threshold) {
    for (double v : n)
        if (v > threshold) return true;
    return false;
}

} // namespace chemsim
