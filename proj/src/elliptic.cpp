#include "chemsim/elliptic.hpp"

#include "chemsim/errors.hpp"
#include "chemsim/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chemsim {

namespace {

void check_screening(const ScalarField& u, std::size_t cells) {
    if (u.size() != cells)
        throw ConfigError("assemble: screening field size mismatch");
    for (double v : u) {
        if (!(v >= 0.0))
            throw ConfigError("assemble: screening coefficient has negative entries");
    }
}

double robin_beta(double g, double h_normal) {
    if (!(g > 0.0))
        throw ConfigError("assemble: boundary weight g must be positive");
    return g / (1.0 + 0.5 * h_normal * g);
}

} // namespace

Operator2D assemble_2d(const Grid2D& grid, const ScalarField& u, const ScalarField& f,
                       const std::function<double(double, double)>& eta,
                       const std::function<double(double, double)>& g) {
    check_screening(u, grid.cells());
    if (f.size() != static_cast<std::size_t>(grid.cells()))
        throw ConfigError("assemble: source field size mismatch");

    Operator2D op;
    op.grid = grid;
    op.tx = grid.hy / grid.hx;
    op.ty = grid.hx / grid.hy;
    const double m = grid.cell_area();
    op.diag.assign(grid.cells(), 0.0);
    op.rhs.assign(grid.cells(), 0.0);

    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const int k = grid.idx(i, j);
            double d = m * u[k];
            double b = m * f[k];
            // interior couplings
            d += (i > 0 ? op.tx : 0.0) + (i < grid.nx - 1 ? op.tx : 0.0);
            d += (j > 0 ? op.ty : 0.0) + (j < grid.ny - 1 ? op.ty : 0.0);
            // Robin closure on boundary faces
            if (i == 0) {
                const double bw = robin_beta(g(0.0, grid.yc(j)), grid.hx);
                d += bw * grid.hy;
                b += bw * eta(0.0, grid.yc(j)) * grid.hy;
            }
            if (i == grid.nx - 1) {
                const double bw = robin_beta(g(grid.Lx, grid.yc(j)), grid.hx);
                d += bw * grid.hy;
                b += bw * eta(grid.Lx, grid.yc(j)) * grid.hy;
            }
            if (j == 0) {
                const double bw = robin_beta(g(grid.xc(i), 0.0), grid.hy);
                d += bw * grid.hx;
                b += bw * eta(grid.xc(i), 0.0) * grid.hx;
            }
            if (j == grid.ny - 1) {
                const double bw = robin_beta(g(grid.xc(i), grid.Ly), grid.hy);
                d += bw * grid.hx;
                b += bw * eta(grid.xc(i), grid.Ly) * grid.hx;
            }
            op.diag[k] = d;
            op.rhs[k] = b;
        }
    }
    return op;
}

OperatorRadial assemble_radial(const RadialGrid& grid, const ScalarField& u,
                               const ScalarField& f, double eta, double g_outer) {
    check_screening(u, grid.nr);
    if (f.size() != static_cast<std::size_t>(grid.nr))
        throw ConfigError("assemble: source field size mismatch");

    OperatorRadial op;
    op.grid = grid;
    op.tface.assign(grid.nr + 1, 0.0);
    // tface[0] stays 0: the innermost face carries no flux by symmetry
    for (int i = 1; i < grid.nr; ++i)
        op.tface[i] = grid.sigma_d * std::pow(grid.rf(i), grid.d - 1) / grid.h;

    op.diag.assign(grid.nr, 0.0);
    op.rhs.assign(grid.nr, 0.0);
    for (int i = 0; i < grid.nr; ++i) {
        op.diag[i] = grid.weight[i] * u[i] + op.tface[i] + (i < grid.nr - 1 ? op.tface[i + 1] : 0.0);
        op.rhs[i] = grid.weight[i] * f[i];
    }
    const double area_outer = grid.sigma_d * std::pow(grid.R, grid.d - 1);
    const double bw = robin_beta(g_outer, grid.h);
    op.diag[grid.nr - 1] += bw * area_outer;
    op.rhs[grid.nr - 1] += bw * eta * area_outer;
    return op;
}

RobinOperator assemble(const RobinProblem& problem) {
    if (!(problem.eta >= 0.0))
        throw ConfigError("assemble: boundary constant eta must be >= 0");
    if (std::holds_alternative<Grid2D>(problem.grid)) {
        const auto& g2 = std::get<Grid2D>(problem.grid);
        auto eta_fn = [e = problem.eta](double, double) { return e; };
        return assemble_2d(g2, problem.u, problem.f, eta_fn, problem.boundary.g);
    }
    const auto& gr = std::get<RadialGrid>(problem.grid);
    return assemble_radial(gr, problem.u, problem.f, problem.eta,
                           problem.boundary.g(gr.R, 0.0));
}

void Operator2D::apply(const double* v, double* out) const {
    kernels::apply_operator_2d(grid.nx, grid.ny, tx, ty, diag.data(), v, out);
}

void OperatorRadial::apply(const double* v, double* out) const {
    kernels::apply_operator_radial(grid.nr, tface.data(), diag.data(), v, out);
}

std::vector<std::pair<int, double>> Operator2D::row(int cell) const {
    const double inv_m = 1.0 / grid.cell_area();
    const int i = cell % grid.nx, j = cell / grid.nx;
    std::vector<std::pair<int, double>> r;
    r.emplace_back(cell, diag[cell] * inv_m);
    if (i > 0) r.emplace_back(cell - 1, -tx * inv_m);
    if (i < grid.nx - 1) r.emplace_back(cell + 1, -tx * inv_m);
    if (j > 0) r.emplace_back(cell - grid.nx, -ty * inv_m);
    if (j < grid.ny - 1) r.emplace_back(cell + grid.nx, -ty * inv_m);
    return r;
}

std::vector<std::pair<int, double>> OperatorRadial::row(int cell) const {
    const double inv_m = 1.0 / grid.weight[cell];
    std::vector<std::pair<int, double>> r;
    r.emplace_back(cell, diag[cell] * inv_m);
    if (cell > 0) r.emplace_back(cell - 1, -tface[cell] * inv_m);
    if (cell < grid.nr - 1) r.emplace_back(cell + 1, -tface[cell + 1] * inv_m);
    return r;
}

namespace {

template <class Op>
EllipticSolution cg_solve(const Op& op, double tolerance, int max_iterations,
                          const ScalarField* initial_guess) {
    const int n = op.cells();
    if (!(tolerance > 0.0))
        throw ConfigError("solve: tolerance must be positive");

    ScalarField x;
    if (initial_guess && static_cast<int>(initial_guess->size()) == n)
        x = *initial_guess;
    else
        x.assign(n, 0.0);

    ScalarField r(n), z(n), p(n), q(n), inv_diag(n), inv_m(n);
    for (int i = 0; i < n; ++i) inv_diag[i] = 1.0 / op.diag[i];
    for (int i = 0; i < n; ++i) inv_m[i] = 1.0 / op.measure(i);

    // divided-form residual in the max norm; fused into the r updates
    auto refresh_residual = [&] {
        op.apply(x.data(), q.data());
        double m = 0.0;
        for (int i = 0; i < n; ++i) {
            r[i] = op.rhs[i] - q[i];
            m = std::max(m, std::abs(r[i]) * inv_m[i]);
        }
        return m;
    };

    double rinf = refresh_residual();
    int it = 0;
    double rz_old = 0.0;
    bool restart = true;

    while (rinf > tolerance) {
        if (it >= max_iterations) {
            std::ostringstream msg;
            msg << "elliptic solve did not converge: residual " << rinf << " after "
                << it << " iterations (tolerance " << tolerance << ")";
            throw EllipticError(msg.str(), it, rinf);
        }
        double rz = 0.0;
        for (int i = 0; i < n; ++i) {
            z[i] = r[i] * inv_diag[i];
            rz += r[i] * z[i];
        }
        if (restart) {
            p = z;
            restart = false;
        } else {
            const double beta = rz / rz_old;
            for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        }
        op.apply(p.data(), q.data());
        double pq = 0.0;
        for (int i = 0; i < n; ++i) pq += p[i] * q[i];
        if (!(pq > 0.0))
            throw EllipticError("elliptic solve: CG breakdown (operator not SPD?)", it, rinf);
        const double alpha = rz / pq;
        double m = 0.0;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
            m = std::max(m, std::abs(r[i]) * inv_m[i]);
        }
        rz_old = rz;
        ++it;
        rinf = m;

        if (rinf <= tolerance || it % 256 == 0) {
            // verify against the true residual; the recurrence drifts
            const double true_inf = refresh_residual();
            if (true_inf > tolerance && rinf <= tolerance) restart = true;
            rinf = true_inf;
        }
    }

    EllipticSolution sol;
    sol.v = std::move(x);
    sol.iterations = it;
    sol.residual = rinf;
    return sol;
}

} // namespace

EllipticSolution solve(const Operator2D& op, double tolerance, int max_iterations,
                       const ScalarField* initial_guess) {
    return cg_solve(op, tolerance, max_iterations, initial_guess);
}

EllipticSolution solve(const OperatorRadial& op, double tolerance, int max_iterations,
                       const ScalarField* initial_guess) {
    return cg_solve(op, tolerance, max_iterations, initial_guess);
}

EllipticSolution solve(const RobinProblem& problem, double tolerance, int max_iterations,
                       const ScalarField* initial_guess) {
    RobinOperator op = assemble(problem);
    return std::visit(
        [&](const auto& o) { return cg_solve(o, tolerance, max_iterations, initial_guess); }, op);
}

EllipticSolution solve_signal(const Grid& grid, const ScalarField& n,
                              const BoundaryData& bd, double tolerance,
                              int max_iterations, const ScalarField* initial_guess) {
    ScalarField u = n;
    for (double& v : u) {
        if (v < 0.0) {
            if (v < -1e-12)
                throw ConfigError("solve_signal: density has negative entries");
            v = 0.0; // round-off guard; anything below -1e-12 throws above
        }
    }
    RobinProblem pb;
    pb.grid = grid;
    pb.u = std::move(u);
    pb.f.assign(std::visit([](const auto& g) { return g.cells(); }, grid), 0.0);
    pb.eta = bd.gamma;
    pb.boundary = bd;

    ScalarField guess;
    const ScalarField* guess_ptr = initial_guess;
    if (!guess_ptr) {
        // c = gamma solves the n = 0 problem exactly and is close otherwise
        guess.assign(pb.f.size(), bd.gamma);
        guess_ptr = &guess;
    }
    return solve(pb, tolerance, max_iterations, guess_ptr);
}

} // namespace chemsim
