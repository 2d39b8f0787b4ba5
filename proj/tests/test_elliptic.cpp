#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chemsim/elliptic.hpp"
#include "chemsim/errors.hpp"

#include "support/oracles.hpp"

#include <cmath>
#include <random>

using namespace chemsim;

namespace {

RobinProblem make_2d_problem(const Grid2D& g, const ScalarField& u, double eta, double gval) {
    RobinProblem p;
    p.grid = g;
    p.u = u;
    p.f.assign(g.cells(), 0.0);
    p.eta = eta;
    p.boundary.gamma = eta;
    p.boundary.g = [gval](double, double) { return gval; };
    return p;
}

} // namespace

TEST_CASE("interior 5-point stencil") {
    Grid2D g = Grid2D::make(1.0, 1.0, 8, 8);
    const double h2 = g.hx * g.hx;

    ScalarField u(g.cells(), 0.0);
    auto op = std::get<Operator2D>(assemble(make_2d_problem(g, u, 1.0, 1.0)));
    auto row = op.row(g.idx(4, 4));
    REQUIRE(row.size() == 5);
    CHECK(row[0].second == doctest::Approx(4.0 / h2).epsilon(1e-14));
    for (std::size_t k = 1; k < 5; ++k)
        CHECK(row[k].second == doctest::Approx(-1.0 / h2).epsilon(1e-14));

    // u = 1 adds exactly 1 to the divided diagonal
    ScalarField u1(g.cells(), 1.0);
    auto op1 = std::get<Operator2D>(assemble(make_2d_problem(g, u1, 1.0, 1.0)));
    CHECK(op1.row(g.idx(4, 4))[0].second == doctest::Approx(4.0 / h2 + 1.0).epsilon(1e-14));
}

TEST_CASE("radial interior row: metric-weighted 3-point stencil") {
    RadialGrid g = RadialGrid::make(2, 1.0, 16);
    ScalarField u(g.nr, 0.0), f(g.nr, 0.0);
    auto op = assemble_radial(g, u, f, 1.0, 1.0);
    const int i = 7;
    auto row = op.row(i);
    REQUIRE(row.size() == 3);
    const double h2 = g.h * g.h;
    CHECK(row[1].second == doctest::Approx(-g.rf(i) / (g.rc(i) * h2)).epsilon(1e-13));
    CHECK(row[2].second == doctest::Approx(-g.rf(i + 1) / (g.rc(i) * h2)).epsilon(1e-13));
    // interior row sums to u_i (here 0) once u >= 0 is added
    double sum = 0.0;
    for (auto& [j, v] : row) sum += v;
    CHECK(sum == doctest::Approx(0.0).epsilon(1e-10));

    ScalarField u2(g.nr, 2.5);
    auto op2 = assemble_radial(g, u2, f, 1.0, 1.0);
    double sum2 = 0.0;
    for (auto& [j, v] : op2.row(i)) sum2 += v;
    CHECK(sum2 == doctest::Approx(2.5).epsilon(1e-10));
}

TEST_CASE("M-matrix structure on random instances") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Grid2D g = Grid2D::make(1.0, 1.3, 10, 12);
        auto u = oracles::random_field(rng, g.cells(), 0.0, 5.0);
        const double gval = std::uniform_real_distribution<double>(0.3, 3.0)(rng);
        auto op = std::get<Operator2D>(assemble(make_2d_problem(g, u, 1.0, gval)));
        for (int cell = 0; cell < g.cells(); ++cell) {
            auto row = op.row(cell);
            CHECK(row[0].second > 0.0);
            double sum = row[0].second;
            for (std::size_t k = 1; k < row.size(); ++k) {
                CHECK(row[k].second <= 0.0);
                sum += row[k].second;
            }
            CHECK(sum >= u[cell] - 1e-10);
        }
    }
}

TEST_CASE("assemble rejects negative screening and bad g") {
    Grid2D g = Grid2D::make(1.0, 1.0, 8, 8);
    ScalarField u(g.cells(), 0.0);
    u[5] = -0.1;
    CHECK_THROWS_AS(assemble(make_2d_problem(g, u, 1.0, 1.0)), ConfigError);
    ScalarField ok(g.cells(), 0.0);
    CHECK_THROWS_AS(assemble(make_2d_problem(g, ok, 1.0, -1.0)), ConfigError);
    CHECK_THROWS_AS(assemble(make_2d_problem(g, ok, -0.5, 1.0)), ConfigError);
}

TEST_CASE("constant solution is exact: u=0, f=0, eta=gamma") {
    Grid2D g = Grid2D::make(1.0, 1.0, 16, 16);
    ScalarField u(g.cells(), 0.0);
    auto p = make_2d_problem(g, u, 0.75, 1.0);
    auto sol = solve(p, 1e-12, 20000);
    for (double v : sol.v) CHECK(v == doctest::Approx(0.75).epsilon(1e-11));
    CHECK(sol.residual <= 1e-12);

    // with the constant initial guess the solve converges instantly
    ScalarField guess(g.cells(), 0.75);
    auto sol2 = solve(p, 1e-12, 20000, &guess);
    CHECK(sol2.iterations == 0);
    for (double v : sol2.v) CHECK(v == 0.75);
}

TEST_CASE("iterative solve matches the dense LU oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        Grid2D g = Grid2D::make(1.0, 1.0, 16, 16);
        auto u = oracles::random_field(rng, g.cells(), 0.0, 8.0);
        const double eta = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
        auto p = make_2d_problem(g, u, eta, 1.0);
        p.f = oracles::random_field(rng, g.cells(), -1.0, 1.0);
        auto op = std::get<Operator2D>(assemble(p));
        auto exact = oracles::dense_reference_solution(op);
        auto sol = solve(op, 1e-12, 50000);
        double err = 0.0;
        for (int i = 0; i < g.cells(); ++i) err = std::max(err, std::abs(sol.v[i] - exact[i]));
        CHECK(err <= 1e-8);
    }
}

TEST_CASE("discrete maximum principle: f = 0 gives 0 <= v <= eta") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        Grid2D g = Grid2D::make(1.0, 1.0, 12, 12);
        auto u = oracles::random_field(rng, g.cells(), 0.0, 10.0);
        const double eta = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
        auto sol = solve(make_2d_problem(g, u, eta, 1.0), 1e-12 * (1.0 + eta), 50000);
        for (double v : sol.v) {
            CHECK(v >= -1e-12);
            CHECK(v <= eta + 1e-12);
        }
    }
}

TEST_CASE("comparison principle: larger n gives pointwise smaller c") {
    std::mt19937_64 rng(17);
    Grid2D g = Grid2D::make(1.0, 1.0, 16, 16);
    BoundaryData bd;
    bd.gamma = 1.0;
    for (int trial = 0; trial < 10; ++trial) {
        auto n1 = oracles::random_field(rng, g.cells(), 0.0, 3.0);
        auto n2 = n1;
        auto extra = oracles::random_field(rng, g.cells(), 0.0, 2.0);
        for (int i = 0; i < g.cells(); ++i) n2[i] += extra[i];
        auto c1 = solve_signal(Grid{g}, n1, bd, 1e-12).v;
        auto c2 = solve_signal(Grid{g}, n2, bd, 1e-12).v;
        for (int i = 0; i < g.cells(); ++i) CHECK(c2[i] <= c1[i] + 1e-10);
    }
}

TEST_CASE("solve_signal: n = 0 gives c = gamma, bounds always hold") {
    BoundaryData bd;
    bd.gamma = 2.0;
    Grid2D g = Grid2D::make(1.0, 1.0, 16, 16);
    ScalarField zero(g.cells(), 0.0);
    auto c = solve_signal(Grid{g}, zero, bd, 1e-12).v;
    for (double v : c) CHECK(v == doctest::Approx(2.0).epsilon(1e-13));

    std::mt19937_64 rng(19);
    auto n = oracles::random_field(rng, g.cells(), 0.0, 5.0);
    auto c2 = solve_signal(Grid{g}, n, bd, 1e-12).v;
    for (double v : c2) {
        CHECK(v >= -1e-12);
        CHECK(v <= 2.0 + 1e-12);
    }
}

TEST_CASE("radial signal for constant density matches the Bessel solution") {
    BoundaryData bd;
    bd.gamma = 1.0;
    RadialGrid g = RadialGrid::make(2, 1.0, 64);
    ScalarField n(g.nr, 1.0);
    auto c = solve_signal(Grid{g}, n, bd, 1e-10).v;
    double err = 0.0;
    for (int i = 0; i < g.nr; ++i)
        err = std::max(err, std::abs(c[i] - oracles::bessel_signal(g.rc(i), 1.0, 1.0, 1.0)));
    CHECK(err <= 2e-4); // O(h^2) at nr = 64
    CHECK(c[0] > 0.0);
    for (int i = 1; i < g.nr; ++i) CHECK(c[i] >= c[i - 1] - 1e-11); // monotone in r
}

TEST_CASE("manufactured solution converges at second order") {
    // v* = cos(pi x) cos(pi y), u = 1, f = -Lap v* + v*, inhomogeneous
    // Robin data eta(x) = v* + (grad v* . nu)/g
    auto vstar = [](double x, double y) { return std::cos(M_PI * x) * std::cos(M_PI * y); };
    auto run_level = [&](int nx) {
        Grid2D g = Grid2D::make(1.0, 1.0, nx, nx);
        ScalarField u(g.cells(), 1.0), f(g.cells());
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                f[g.idx(i, j)] = (2.0 * M_PI * M_PI + 1.0) * vstar(g.xc(i), g.yc(j));
        auto gfun = [](double, double) { return 1.0; };
        auto eta = [&](double x, double y) {
            double nx_ = 0.0, ny_ = 0.0;
            if (x == 0.0) nx_ = -1.0;
            if (x == 1.0) nx_ = 1.0;
            if (y == 0.0) ny_ = -1.0;
            if (y == 1.0) ny_ = 1.0;
            const double dvx = -M_PI * std::sin(M_PI * x) * std::cos(M_PI * y);
            const double dvy = -M_PI * std::cos(M_PI * x) * std::sin(M_PI * y);
            return vstar(x, y) + (dvx * nx_ + dvy * ny_) / 1.0;
        };
        auto op = assemble_2d(g, u, f, eta, gfun);
        auto sol = solve(op, 2e-11, 100000);
        double err = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                err = std::max(err, std::abs(sol.v[g.idx(i, j)] - vstar(g.xc(i), g.yc(j))));
        return err;
    };
    const double e16 = run_level(16), e32 = run_level(32), e64 = run_level(64);
    CHECK(std::log2(e16 / e32) >= 1.9);
    CHECK(std::log2(e32 / e64) >= 1.9);
}

TEST_CASE("non-convergence is an explicit failure with diagnostics") {
    Grid2D g = Grid2D::make(1.0, 1.0, 16, 16);
    ScalarField u(g.cells(), 1.0);
    auto p = make_2d_problem(g, u, 1.5, 1.0);
    try {
        solve(p, 1e-13, 2);
        FAIL("expected EllipticError");
    } catch (const EllipticError& e) {
        CHECK(e.iterations >= 2);
        CHECK(e.residual > 1e-13);
    }
}
