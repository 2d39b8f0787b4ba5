#pragma once

#include "chemsim/boundary.hpp"
#include "chemsim/grid.hpp"
#include "chemsim/sensitivity.hpp"
#include "chemsim/stepper.hpp"

#include <utility>
#include <vector>

namespace chemsim {

/// Constants of the radial bound chain: Q(r,t) <= M0 r^d, the interior
/// touch value m0, and the uniform lower bound c(r,t) >= c_star.
struct RadialBounds {
    double M0 = 0.0;
    double m0 = 0.0;
    double c_star = 0.0;
    int d = 2;
    double R = 0.0;
    double sigma_d = 0.0;
    double gamma = 0.0;
};

struct RadialState {
    RadialGrid grid;
    ScalarField n;
    ScalarField c;
    double t = 0.0;
};

/// Cumulative mass Q(r) = int_{B_r} n at face radii (size nr+1);
/// Q[0] = 0, Q[nr] = total mass, nondecreasing for n >= 0.
std::vector<double> cumulative_mass(const ScalarField& n, const RadialGrid& grid);

/// M0 = max{ ||n0||_1 / R^d, (sigma_d/d) ||n0||_inf }.
double compute_M0(double l1_norm, double linf_norm, int d, double R);

/// m0 = (gamma/2)(M0 R/sigma_d + 1)^{-1}, c_star = m0 exp(-M0 R^2/(2 sigma_d)).
RadialBounds compute_bounds(double M0, double gamma, double R, int d);

/// c_r at face radii from the cumulative integral
///   c_r(r) = r^{1-d} int_0^r rho^{d-1} n c drho,
/// evaluated with the grid quadrature (never by differencing c). The
/// telescoped rows of the discrete signal equation reproduce exactly this
/// sum, so differencing the solved c agrees up to solver residual.
std::vector<double> signal_gradient(const RadialState& state);

/// Drift speed chi(r, n, c) c_r at faces, c_r by face differencing of the
/// solved c. Throws BoundViolation when chi is singular at zero and the
/// signal dips below c_floor (pass 0 to disable the guard).
std::vector<double> radial_drift(const ScalarField& n, const ScalarField& c,
                                 const SensitivityModel& chi, const RadialGrid& grid,
                                 double c_floor);

/// Conservative update of n in the measure sigma_d r^{d-1} dr (c untouched).
std::pair<ScalarField, StepReport> radial_advance(const ScalarField& n,
                                                  const std::vector<double>& face_speed,
                                                  double dt, const RadialGrid& grid);

/// One full step: advance n, then re-solve the signal equation.
std::pair<RadialState, StepReport> step_radial(const RadialState& state,
                                               const SensitivityModel& chi, double dt,
                                               const BoundaryData& bd,
                                               double elliptic_tolerance, double c_floor);

struct QBoundReport {
    double min_margin = 0.0; // min over (r,t) of M0 r^d - Q(r,t)
    double worst_r = 0.0, worst_t = 0.0;
};

QBoundReport check_Q_bound(const std::vector<double>& times,
                           const std::vector<std::vector<double>>& Q_profiles,
                           double M0, const RadialGrid& grid);

struct QTrajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> Q; // profiles at face radii
};

/// Independent integrator for the mass-distribution equation
///   Q_t = r^{d-1}(r^{1-d} Q_r)_r - Q_r chi c_r,
/// with Q(0,t) = 0 and Q(R,t) = Q0(R) pinned; n is recovered from exact
/// shell volumes, so the comparison profile W = M0 r^d is discretely
/// stationary when chi = 0. Cross-check for step_radial.
QTrajectory evolve_Q_direct(const std::vector<double>& Q0, const SensitivityModel& chi,
                            double horizon, const RadialGrid& grid, const BoundaryData& bd,
                            double elliptic_tolerance, double safety,
                            const std::vector<double>& record_times, double c_floor);

} // namespace chemsim
