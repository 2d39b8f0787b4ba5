#pragma once

#include "chemsim/grid.hpp"
#include "chemsim/sensitivity.hpp"

#include <utility>
#include <vector>

namespace chemsim {

/// Drift velocity S grad c at faces, both components per face. Layout as
/// in kernels.hpp; boundary faces are zero.
struct FaceVectors {
    std::vector<double> xf_vx, xf_vy; // (nx+1)*ny
    std::vector<double> yf_vx, yf_vy; // nx*(ny+1)
};

/// Total transport flux (-grad n + n S grad c) . nu per face; boundary
/// faces identically zero (the no-flux condition).
struct FaceFluxes {
    std::vector<double> fx; // (nx+1)*ny
    std::vector<double> fy; // nx*(ny+1)
};

struct StepReport {
    double dt = 0.0;
    double mass_before = 0.0, mass_after = 0.0;
    double min_n = 0.0, max_n = 0.0;
    double cfl_ratio = 0.0; // dt / admissible dt
};

FaceVectors drift_velocity(const ScalarField& n, const ScalarField& c,
                           const SensitivityModel& S, const Grid2D& grid);

FaceFluxes compute_fluxes(const ScalarField& n, const FaceVectors& vel, const Grid2D& grid);

/// Largest speed |v| over faces (Euclidean norm of the face vector).
double max_face_speed(const FaceVectors& vel, const Grid2D& grid);

/// dt = safety * min(h^2/(2 dim), h/(2 max|v| + eps)), h = min spacing.
double cfl_dt(const FaceVectors& vel, const Grid2D& grid, double safety);
double cfl_dt_radial(const std::vector<double>& face_speed, const RadialGrid& grid, double safety);

/// Conservative explicit update from precomputed velocities. Throws
/// CflError when dt exceeds the safety-1 CFL step, InternalError when the
/// update loses positivity (beyond -1e-12) or mass (beyond 1e-12
/// relative) - both impossible for admissible inputs, so a trip means a
/// scheme bug.
std::pair<ScalarField, StepReport> advance(const ScalarField& n, const FaceVectors& vel,
                                           double dt, const Grid2D& grid);

/// One explicit Euler step of n_t = div(grad n - n S grad c): recomputes
/// the drift from (n, c, S) and advances.
std::pair<ScalarField, StepReport> step_n(const ScalarField& n, const ScalarField& c,
                                          const SensitivityModel& S, double dt,
                                          const Grid2D& grid);

/// True when ||n||_inf exceeds the threshold (empirical blow-up criterion).
bool detect_blowup(const ScalarField& n, double threshold);

} // namespace chemsim
