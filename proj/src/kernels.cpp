#include "chemsim/kernels.hpp"

namespace chemsim::kernels {

void apply_operator_2d(int nx, int ny, double tx, double ty,
                       const double* diag, const double* x, double* y) {
    const int n = nx * ny;
#pragma omp parallel for schedule(static) if (n >= omp_grain)
    for (int j = 0; j < ny; ++j) {
        const int row = j * nx;
        for (int i = 0; i < nx; ++i) {
            const int k = row + i;
            double v = diag[k] * x[k];
            if (i > 0) v -= tx * x[k - 1];
            if (i < nx - 1) v -= tx * x[k + 1];
            if (j > 0) v -= ty * x[k - nx];
            if (j < ny - 1) v -= ty * x[k + nx];
            y[k] = v;
        }
    }
}

void apply_operator_radial(int nr, const double* tface,
                           const double* diag, const double* x, double* y) {
    for (int i = 0; i < nr; ++i) {
        double v = diag[i] * x[i];
        if (i > 0) v -= tface[i] * x[i - 1];
        if (i < nr - 1) v -= tface[i + 1] * x[i + 1];
        y[i] = v;
    }
}

void drift_velocity_2d(const Grid2D& g, const double* n, const double* c,
                       const SensitivityModel& S,
                       double* xf_vx, double* xf_vy,
                       double* yf_vx, double* yf_vy) {
    const int nx = g.nx, ny = g.ny;
    const double hx = g.hx, hy = g.hy;

    // interior x-faces: i = 1..nx-1
#pragma omp parallel for schedule(static) if (nx * ny >= omp_grain)
    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) {
            const int L = g.idx(i - 1, j), R = g.idx(i, j);
            const double dcdx = (c[R] - c[L]) / hx;
            double sum = 0.0;
            int cnt = 0;
            for (int col : {L, R}) {
                if (j + 1 < ny) { sum += (c[col + nx] - c[col]) / hy; ++cnt; }
                if (j > 0) { sum += (c[col] - c[col - nx]) / hy; ++cnt; }
            }
            const double dcdy = cnt ? sum / cnt : 0.0;
            const double nf = 0.5 * (n[L] + n[R]);
            const double cf = 0.5 * (c[L] + c[R]);
            const Mat2 s = S.tensor(i * hx, g.yc(j), nf, cf);
            const int f = j * (nx + 1) + i;
            s.apply(dcdx, dcdy, xf_vx[f], xf_vy[f]);
        }
    }

    // interior y-faces: j = 1..ny-1
#pragma omp parallel for schedule(static) if (nx * ny >= omp_grain)
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int D = g.idx(i, j - 1), U = g.idx(i, j);
            const double dcdy = (c[U] - c[D]) / hy;
            double sum = 0.0;
            int cnt = 0;
            for (int rowc : {D, U}) {
                if (i + 1 < nx) { sum += (c[rowc + 1] - c[rowc]) / hx; ++cnt; }
                if (i > 0) { sum += (c[rowc] - c[rowc - 1]) / hx; ++cnt; }
            }
            const double dcdx = cnt ? sum / cnt : 0.0;
            const double nf = 0.5 * (n[D] + n[U]);
            const double cf = 0.5 * (c[D] + c[U]);
            const Mat2 s = S.tensor(g.xc(i), j * hy, nf, cf);
            const int f = j * nx + i;
            s.apply(dcdx, dcdy, yf_vx[f], yf_vy[f]);
        }
    }
}

void upwind_fluxes_2d(const Grid2D& g, const double* n,
                      const double* xf_vx, const double* yf_vy,
                      double* Fx, double* Fy) {
    const int nx = g.nx, ny = g.ny;
    const double hx = g.hx, hy = g.hy;

#pragma omp parallel for schedule(static) if (nx * ny >= omp_grain)
    for (int j = 0; j < ny; ++j) {
        Fx[j * (nx + 1) + 0] = 0.0;
        Fx[j * (nx + 1) + nx] = 0.0;
        for (int i = 1; i < nx; ++i) {
            const int L = g.idx(i - 1, j), R = g.idx(i, j);
            const int f = j * (nx + 1) + i;
            const double v = xf_vx[f];
            const double nup = v > 0.0 ? n[L] : n[R];
            Fx[f] = -(n[R] - n[L]) / hx + nup * v;
        }
    }
#pragma omp parallel for schedule(static) if (nx * ny >= omp_grain)
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int D = g.idx(i, j - 1), U = g.idx(i, j);
            const int f = j * nx + i;
            const double v = yf_vy[f];
            const double nup = v > 0.0 ? n[D] : n[U];
            Fy[f] = -(n[U] - n[D]) / hy + nup * v;
        }
    }
    for (int i = 0; i < nx; ++i) {
        Fy[i] = 0.0;
        Fy[ny * nx + i] = 0.0;
    }
}

void divergence_update_2d(const Grid2D& g, const double* n,
                          const double* Fx, const double* Fy,
                          double dt, double* n_next) {
    const int nx = g.nx, ny = g.ny;
    const double hx = g.hx, hy = g.hy;
#pragma omp parallel for schedule(static) if (nx * ny >= omp_grain)
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int k = g.idx(i, j);
            const double div = (Fx[j * (nx + 1) + i] - Fx[j * (nx + 1) + i + 1]) / hx +
                               (Fy[j * nx + i] - Fy[(j + 1) * nx + i]) / hy;
            n_next[k] = n[k] + dt * div;
        }
    }
}

} // namespace chemsim::kernels
