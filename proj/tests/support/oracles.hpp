#pragma once

// Test-only oracles, kept independent of the library code paths they check.

#include "chemsim/elliptic.hpp"
#include "chemsim/grid.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracles {

/// Dense LU with partial pivoting; A row-major n x n, solves A x = b.
inline std::vector<double> dense_solve(std::vector<double> A, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    std::vector<int> piv(n);
    for (int i = 0; i < n; ++i) piv[i] = i;
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(A[i * n + k]) > std::abs(A[p * n + k])) p = i;
        if (A[p * n + k] == 0.0) throw std::runtime_error("dense_solve: singular matrix");
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(A[k * n + j], A[p * n + j]);
            std::swap(b[k], b[p]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double m = A[i * n + k] / A[k * n + k];
            A[i * n + k] = 0.0;
            for (int j = k + 1; j < n; ++j) A[i * n + j] -= m * A[k * n + j];
            b[i] -= m * b[k];
        }
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= A[i * n + j] * x[j];
        x[i] = s / A[i * n + i];
    }
    return x;
}

/// Densify an assembled operator through its row() hook (divided form) and
/// solve the divided-form system directly.
template <class Op>
std::vector<double> dense_reference_solution(const Op& op) {
    const int n = op.cells();
    std::vector<double> A(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i) {
        for (const auto& [j, v] : op.row(i)) A[static_cast<std::size_t>(i) * n + j] = v;
        b[i] = op.rhs[i] / op.measure(i);
    }
    return dense_solve(std::move(A), std::move(b));
}

/// Modified Bessel functions of the first kind by power series (arguments
/// here stay below ~20, where the series is rock solid).
inline double bessel_i0(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int m = 1; m < 200; ++m) {
        term *= q / (static_cast<double>(m) * m);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

inline double bessel_i1(double x) {
    const double q = 0.25 * x * x;
    double term = 0.5 * x, sum = term;
    for (int m = 1; m < 200; ++m) {
        term *= q / (static_cast<double>(m) * (m + 1.0));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

/// Exact solution of -v'' - v'/r + nbar v = 0 (d = 2) with Robin data
/// v'(R) + v(R) = gamma: v(r) = gamma I0(k r) / (k I1(k R) + I0(k R)).
inline double bessel_signal(double r, double R, double nbar, double gamma) {
    const double k = std::sqrt(nbar);
    return gamma * bessel_i0(k * r) / (k * bessel_i1(k * R) + bessel_i0(k * R));
}

inline double bessel_signal_deriv(double r, double R, double nbar, double gamma) {
    const double k = std::sqrt(nbar);
    return gamma * k * bessel_i1(k * r) / (k * bessel_i1(k * R) + bessel_i0(k * R));
}

inline std::vector<double> random_field(std::mt19937_64& rng, int cells, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> f(cells);
    for (auto& v : f) v = u(rng);
    return f;
}

/// Smooth nonnegative random field: a few Gaussian bumps on the unit square.
inline std::vector<double> random_bumps(std::mt19937_64& rng, const chemsim::Grid2D& g,
                                        int bumps, double amp_max) {
    std::uniform_real_distribution<double> upos(0.0, 1.0), uamp(0.1 * amp_max, amp_max),
        uw(0.08, 0.3);
    std::vector<double> f(g.cells(), 0.0);
    for (int b = 0; b < bumps; ++b) {
        const double cx = upos(rng) * g.Lx, cy = upos(rng) * g.Ly;
        const double a = uamp(rng), w = uw(rng) * std::min(g.Lx, g.Ly);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double dx = g.xc(i) - cx, dy = g.yc(j) - cy;
                f[g.idx(i, j)] += a * std::exp(-(dx * dx + dy * dy) / (w * w));
            }
    }
    return f;
}

} // namespace oracles
