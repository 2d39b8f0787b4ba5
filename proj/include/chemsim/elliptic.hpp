#pragma once

#include "chemsim/boundary.hpp"
#include "chemsim/grid.hpp"

#include <functional>
#include <utility>
#include <variant>
#include <vector>

namespace chemsim {

/// Screened Poisson problem with Robin boundary conditions,
///   -Lap v + u v = f  in Omega,   grad v . nu + g v = eta g  on the boundary,
/// discretized with cell-centered finite volumes and ghost-cell
/// elimination. u >= 0 and g > 0 make the assembled matrix an M-matrix,
/// so the discrete solution obeys the same maximum principle as the PDE.
struct RobinProblem {
    Grid grid;
    ScalarField u;  // screening coefficient, >= 0
    ScalarField f;  // source
    double eta = 0.0;
    BoundaryData boundary;
};

/// Assembled operator on a 2D grid, kept in integrated (symmetric) form:
///   (A v)_i = diag_i v_i - tx (v_W + v_E) - ty (v_S + v_N)
/// with missing neighbors dropped. diag folds in cell measure * u and the
/// Robin closure beta = g/(1 + h g/2) of each boundary face; rhs carries
/// measure * f plus the beta eta g terms. Residuals are reported in the
/// divided (pointwise) form, i.e. scaled by 1/cell measure.
struct Operator2D {
    Grid2D grid;
    double tx = 0.0, ty = 0.0; // hy/hx and hx/hy
    std::vector<double> diag;
    std::vector<double> rhs;

    int cells() const { return grid.cells(); }
    double measure(int) const { return grid.cell_area(); }
    void apply(const double* v, double* out) const;

    /// Row of the divided-form matrix as (column, coefficient) pairs,
    /// diagonal first. Test hook for M-matrix and stencil checks.
    std::vector<std::pair<int, double>> row(int cell) const;
};

/// Tridiagonal analogue on the radial grid, transmissibilities
/// tface[i] = sigma_d r_face(i)^{d-1} / h (tface[0] = tface[nr] = 0; the
/// inner face carries no flux by symmetry, the outer one is folded into
/// diag/rhs through the Robin closure).
struct OperatorRadial {
    RadialGrid grid;
    std::vector<double> tface; // size nr+1
    std::vector<double> diag;
    std::vector<double> rhs;

    int cells() const { return grid.nr; }
    double measure(int i) const { return grid.weight[i]; }
    void apply(const double* v, double* out) const;
    std::vector<std::pair<int, double>> row(int cell) const;
};

using RobinOperator = std::variant<Operator2D, OperatorRadial>;

/// Assemble with constant boundary datum eta (the spec'd public surface).
RobinOperator assemble(const RobinProblem& problem);

/// Assembly with position-dependent boundary datum, used by the
/// manufactured-solution tests; eta is evaluated at boundary face
/// midpoints ((x,y) in 2D, (R,0) in the radial case).
Operator2D assemble_2d(const Grid2D& grid, const ScalarField& u, const ScalarField& f,
                       const std::function<double(double, double)>& eta,
                       const std::function<double(double, double)>& g);
OperatorRadial assemble_radial(const RadialGrid& grid, const ScalarField& u,
                               const ScalarField& f, double eta, double g_outer);

struct EllipticSolution {
    ScalarField v;
    int iterations = 0;
    double residual = 0.0; // max norm of the divided-form residual
};

/// Preconditioned conjugate gradients on the symmetric integrated system;
/// the stopping test is the unpreconditioned divided residual in the max
/// norm. Throws EllipticError when max_iterations is hit. All reductions
/// run in a fixed sequential order, so results are bit-reproducible.
EllipticSolution solve(const Operator2D& op, double tolerance, int max_iterations,
                       const ScalarField* initial_guess = nullptr);
EllipticSolution solve(const OperatorRadial& op, double tolerance, int max_iterations,
                       const ScalarField* initial_guess = nullptr);
EllipticSolution solve(const RobinProblem& problem, double tolerance, int max_iterations,
                       const ScalarField* initial_guess = nullptr);

/// Signal equation 0 = Lap c - n c with Robin data: solve with u = n,
/// f = 0, eta = gamma. The discrete solution satisfies 0 <= c <= gamma up
/// to solver tolerance.
EllipticSolution solve_signal(const Grid& grid, const ScalarField& n,
                              const BoundaryData& bd, double tolerance,
                              int max_iterations = 50000,
                              const ScalarField* initial_guess = nullptr);

} // namespace chemsim
