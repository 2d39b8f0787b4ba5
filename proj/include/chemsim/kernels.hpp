#pragma once

#include "chemsim/grid.hpp"
#include "chemsim/sensitivity.hpp"

namespace chemsim::kernels {

/// Cell counts below this run the loops serially; the grids in the test
/// and acceptance scenarios are small enough that fork/join overhead
/// would dominate.
inline constexpr int omp_grain = 16384;

/// y = A x for the symmetric 2D operator (see Operator2D).
void apply_operator_2d(int nx, int ny, double tx, double ty,
                       const double* diag, const double* x, double* y);

/// y = A x for the tridiagonal radial operator; tface has nr+1 entries
/// with tface[0] = tface[nr] = 0.
void apply_operator_radial(int nr, const double* tface,
                           const double* diag, const double* x, double* y);

// Face array layout (2D): x-faces sit between cells (i-1,j) and (i,j),
// i = 0..nx, index j*(nx+1)+i; y-faces between (i,j-1) and (i,j),
// j = 0..ny, index j*nx+i. Boundary faces (i=0, i=nx, j=0, j=ny) are
// fixed at zero: the no-flux condition zeroes the total face flux.

/// Drift velocity v = S(x_face, n_face, c_face) grad c at interior faces.
/// The normal component of grad c is the difference quotient across the
/// face; the tangential component averages the neighboring one-sided
/// differences (up to four, fewer next to walls). n_face and c_face are
/// arithmetic face averages; n_face feeds only the n-argument of S.
void drift_velocity_2d(const Grid2D& g, const double* n, const double* c,
                       const SensitivityModel& S,
                       double* xf_vx, double* xf_vy,
                       double* yf_vx, double* yf_vy);

/// Total face flux: diffusive part -(n_R - n_L)/h plus first-order upwind
/// advection n_up * v_normal. Boundary faces stay zero.
void upwind_fluxes_2d(const Grid2D& g, const double* n,
                      const double* xf_vx, const double* yf_vy,
                      double* Fx, double* Fy);

/// Conservative explicit update n_next = n + dt * div(F); the face sums
/// telescope, so total mass is conserved to round-off.
void divergence_update_2d(const Grid2D& g, const double* n,
                          const double* Fx, const double* Fy,
                          double dt, double* n_next);

} // namespace chemsim::kernels
