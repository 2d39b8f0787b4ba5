#include "chemsim/reference.hpp"

namespace chemsim::ref {

void apply_operator_2d(int nx, int ny, double tx, double ty,
                       const double* diag, const double* x, double* y) {
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int k = j * nx + i;
            double v = diag[k] * x[k];
            if (i > 0) v -= tx * x[k - 1];
            if (i < nx - 1) v -= tx * x[k + 1];
            if (j > 0) v -= ty * x[k - nx];
            if (j < ny - 1) v -= ty * x[k + nx];
            y[k] = v;
        }
    }
}

namespace {

// Normal drift component at the x-face between (i-1,j) and (i,j).
double vx_at_xface(const Grid2D& g, const double* n, const double* c,
                   const SensitivityModel& S, int i, int j) {
    const int nx = g.nx, ny = g.ny;
    const int L = j * nx + i - 1, R = j * nx + i;
    const double dcdx = (c[R] - c[L]) / g.hx;
    double sum = 0.0;
    int cnt = 0;
    for (int col : {L, R}) {
        if (j + 1 < ny) { sum += (c[col + nx] - c[col]) / g.hy; ++cnt; }
        if (j > 0) { sum += (c[col] - c[col - nx]) / g.hy; ++cnt; }
    }
    const double dcdy = cnt ? sum / cnt : 0.0;
    const Mat2 s = S.tensor(i * g.hx, g.yc(j), 0.5 * (n[L] + n[R]), 0.5 * (c[L] + c[R]));
    return s.a00 * dcdx + s.a01 * dcdy;
}

// Normal drift component at the y-face between (i,j-1) and (i,j).
double vy_at_yface(const Grid2D& g, const double* n, const double* c,
                   const SensitivityModel& S, int i, int j) {
    const int nx = g.nx;
    const int D = (j - 1) * nx + i, U = j * nx + i;
    const double dcdy = (c[U] - c[D]) / g.hy;
    double sum = 0.0;
    int cnt = 0;
    for (int row : {D, U}) {
        if (i + 1 < nx) { sum += (c[row + 1] - c[row]) / g.hx; ++cnt; }
        if (i > 0) { sum += (c[row] - c[row - 1]) / g.hx; ++cnt; }
    }
    const double dcdx = cnt ? sum / cnt : 0.0;
    const Mat2 s = S.tensor(g.xc(i), j * g.hy, 0.5 * (n[D] + n[U]), 0.5 * (c[D] + c[U]));
    return s.a10 * dcdx + s.a11 * dcdy;
}

double upwind(double v, double nl, double nr) { return v > 0.0 ? nl : nr; }

} // namespace

void step_gather_2d(const Grid2D& g, const double* n, const double* c,
                    const SensitivityModel& S, double dt, double* n_next) {
    const int nx = g.nx, ny = g.ny;
    const double hx = g.hx, hy = g.hy;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int k = j * nx + i;
            double diff = 0.0, adv = 0.0;
            if (i > 0) {
                diff += (n[k - 1] - n[k]) / (hx * hx);
                const double v = vx_at_xface(g, n, c, S, i, j);
                adv -= v * upwind(v, n[k - 1], n[k]) / hx;
            }
            if (i < nx - 1) {
                diff += (n[k + 1] - n[k]) / (hx * hx);
                const double v = vx_at_xface(g, n, c, S, i + 1, j);
                adv += v * upwind(v, n[k], n[k + 1]) / hx;
            }
            if (j > 0) {
                diff += (n[k - nx] - n[k]) / (hy * hy);
                const double v = vy_at_yface(g, n, c, S, i, j);
                adv -= v * upwind(v, n[k - nx], n[k]) / hy;
            }
            if (j < ny - 1) {
                diff += (n[k + nx] - n[k]) / (hy * hy);
                const double v = vy_at_yface(g, n, c, S, i, j + 1);
                adv += v * upwind(v, n[k], n[k + nx]) / hy;
            }
            n_next[k] = n[k] + dt * (diff - adv);
        }
    }
}

double mass_2d(const Grid2D& g, const double* n) {
    double total = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        double row = 0.0;
        for (int i = 0; i < g.nx; ++i) row += n[j * g.nx + i];
        total += row;
    }
    return total * g.cell_area();
}

} // namespace chemsim::ref
