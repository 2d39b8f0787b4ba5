#pragma once

#include "chemsim/grid.hpp"

#include <string>
#include <utility>
#include <vector>

namespace chemsim {

// ---------------------------------------------------------------------------
// Functionals

double mass(const ScalarField& n, const Grid2D& grid);
double mass(const ScalarField& n, const RadialGrid& grid);

/// Entropy integral of n log n with 0 log 0 := 0. Entries below -1e-12
/// are rejected; round-off negatives count as zero.
double entropy(const ScalarField& n, const Grid2D& grid);
double entropy(const ScalarField& n, const RadialGrid& grid);

/// Per-cell share of the face-difference quadrature of |grad c|^2; summing
/// gives the full integral, restricting to a ball gives the localized one.
/// Each interior face quotient carries the staggered volume (area * h) split
/// between its two cells; the half-cell strips next to the walls reuse the
/// nearest interior quotient, which makes the quadrature exact for linear
/// fields. The total never exceeds 1.5x the plain face sum, so the discrete
/// energy identity keeps it under the gamma^2 |dOmega| / 2 bound.
std::vector<double> grad_energy_cells(const ScalarField& c, const Grid2D& grid);
std::vector<double> grad_energy_cells(const ScalarField& c, const RadialGrid& grid);

double grad_c_l2(const ScalarField& c, const Grid2D& grid);
double grad_c_l2(const ScalarField& c, const RadialGrid& grid);

/// Same quadrature restricted to cells whose center lies in B_delta(q).
double grad_c_l2_local(const ScalarField& c, const Grid2D& grid,
                       double qx, double qy, double delta);

// ---------------------------------------------------------------------------
// Cutoff functions

/// psi_eta(x) = ln(-ln|x|) - ln(-ln eta) on B_eta, 0 outside; eta < 1/e.
struct CutoffPsi {
    double eta = 0.0;
    double cx = 0.0, cy = 0.0;

    CutoffPsi(double eta_, double cx_, double cy_);
    double value(double x, double y) const;
    double value_radius(double r) const;
};

/// Smooth cutoff phi = zeta^2 with a C^2 quintic ramp in |x - q|:
/// phi = 1 on B_{delta/2}, 0 outside B_delta, and |grad phi| <= K phi^{1/2}
/// with K = 7.5/delta (since |grad phi| = 2 zeta |zeta'| and
/// sup|zeta'| = (15/8)(2/delta)).
struct CutoffPhi {
    double delta = 0.0;
    double cx = 0.0, cy = 0.0;
    double K = 0.0;

    CutoffPhi(double delta_, double cx_, double cy_);
    double value(double x, double y) const;
    double value_radius(double r) const;
    void gradient(double x, double y, double& gx, double& gy) const;
    double gradient_magnitude_radius(double r) const;
};

/// (||psi_eta||_{L^2}^2, |psi_eta|_{H^1}^2) in R^d from the one-dimensional
/// rho-integral forms (rho = -ln r), evaluated by adaptive quadrature; the
/// radial reduction removes the |x| = 0 singularity. quad_tol is the
/// absolute tolerance of the quadrature.
std::pair<double, double> psi_eta_h1(double eta, int d, double quad_tol = 1e-13);

/// Quadrature of n log n phi^3 over the grid.
double local_entropy(const ScalarField& n, const Grid2D& grid, const CutoffPhi& phi);
double local_entropy(const ScalarField& n, const RadialGrid& grid, const CutoffPhi& phi);

// ---------------------------------------------------------------------------
// Interpolation inequality check

/// Both sides of the L log L interpolation inequality
///   int f^{p+1} <= C (p+1)^2/log s * int(f log f + 1/e) * int f^{p-2}|grad f|^2
///                 + (4C)^{1+eps/2} (int f^{(eps/2)(p+1)/(1+eps)})^{2(1+eps)/eps}
///                 + 6 s^{p+1} |Omega|
/// evaluated by quadrature (gradients by face differences).
std::pair<double, double> lemma7_gap(const ScalarField& f, const Grid2D& grid,
                                     double p, double s, double eps, double C);

// ---------------------------------------------------------------------------
// Trajectory-level monitors

struct SupNormVerdict {
    bool pass = false;
    double ratio = 0.0; // max over final half / max over first half
};

/// Uniform-in-time boundedness monitor: needs >= 8 records; passes when
/// the final-half max of ||n||_inf stays within 5% of the first-half max.
SupNormVerdict sup_norm_monitor(const std::vector<double>& sup_series);

struct DeltaCertificate {
    bool found = false;
    double epsilon = 0.0;
    double delta = 0.0;        // largest grid-representable delta that works
    double worst_value = 0.0;  // sup of the localized energy at that delta
    double worst_qx = 0.0, worst_qy = 0.0, worst_t = 0.0;
};

/// Largest delta = k*h such that grad_c_l2_local(c_t, q, delta) <= eps^2
/// for every stored snapshot and every cell-center q. found = false when
/// even the one-cell delta fails; the worst offender is reported either way.
DeltaCertificate find_delta_for_epsilon(const std::vector<double>& times,
                                        const std::vector<ScalarField>& c_snapshots,
                                        const Grid2D& grid, double epsilon);

// ---------------------------------------------------------------------------
// Records

/// One time-stamped row of every monitored functional; the radial columns
/// hold zero on 2D runs and vice versa where a quantity has no analogue.
struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    double entropy = 0.0;
    double sup_n = 0.0;
    double grad_c_l2 = 0.0;
    double min_c = 0.0;
    double max_c = 0.0;
    double local_grad_max = 0.0;
    double local_entropy_max = 0.0;
    int elliptic_iterations = 0;
    double elliptic_residual = 0.0;
    double margin_grad = 0.0;      // gamma^2 |dOmega| / 2 - grad_c_l2
    double mass_drift_rel = 0.0;   // |mass - mass0| / mass0
    double q_margin = 0.0;         // min_r of M0 r^d - Q(r)   (radial)
    double min_c_minus_cstar = 0.0;
    double cr_excess = 0.0;        // max_r of cr - gamma M0 r / sigma_d (radial)
};

std::vector<std::string> record_field_names();
std::vector<double> record_field_values(const DiagnosticsRecord& r);

} // namespace chemsim
