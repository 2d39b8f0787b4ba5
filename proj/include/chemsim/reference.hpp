#pragma once

#include "chemsim/grid.hpp"
#include "chemsim/sensitivity.hpp"

namespace chemsim::ref {

/// Serial twin of kernels::apply_operator_2d; same arithmetic, no OpenMP.
/// Kept for kernel equivalence tests and as the benchmark baseline.
void apply_operator_2d(int nx, int ny, double tx, double ty,
                       const double* diag, const double* x, double* y);

/// Straight-line re-evaluation of one explicit step in gather form:
/// every cell recomputes its own update directly from neighbor values,
/// with no face-flux arrays. Independent of the production flux path;
/// used as the brute-force oracle for step_n.
void step_gather_2d(const Grid2D& g, const double* n, const double* c,
                    const SensitivityModel& S, double dt, double* n_next);

/// Naive row-by-row summation oracle for the mass functional.
double mass_2d(const Grid2D& g, const double* n);

} // namespace chemsim::ref
