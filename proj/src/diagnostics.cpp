#include "chemsim/diagnostics.hpp"

#include "chemsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chemsim {

namespace {

double xlogx(double v) {
    if (v < 0.0) {
        if (v < -1e-12) throw ConfigError("entropy: density has negative entries");
        return 0.0;
    }
    return v > 0.0 ? v * std::log(v) : 0.0;
}

} // namespace

double mass(const ScalarField& n, const Grid2D& grid) {
    const double m = grid.cell_area();
    double s = 0.0;
    for (double v : n) s += v * m;
    return s;
}

double mass(const ScalarField& n, const RadialGrid& grid) {
    double s = 0.0;
    for (int i = 0; i < grid.nr; ++i) s += n[i] * grid.weight[i];
    return s;
}

double entropy(const ScalarField& n, const Grid2D& grid) {
    const double m = grid.cell_area();
    double s = 0.0;
    for (double v : n) s += xlogx(v) * m;
    return s;
}

double entropy(const ScalarField& n, const RadialGrid& grid) {
    double s = 0.0;
    for (int i = 0; i < grid.nr; ++i) s += xlogx(n[i]) * grid.weight[i];
    return s;
}

std::vector<double> grad_energy_cells(const ScalarField& c, const Grid2D& grid) {
    const int nx = grid.nx, ny = grid.ny;
    std::vector<double> E(grid.cells(), 0.0);

    // x-direction: interior faces i = 1..nx-1, quotient q, staggered volume hx*hy
    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) {
            const int L = grid.idx(i - 1, j), R = grid.idx(i, j);
            const double q = (c[R] - c[L]) / grid.hx;
            const double w = grid.hx * grid.hy * q * q;
            E[L] += 0.5 * w;
            E[R] += 0.5 * w;
            if (i == 1) E[L] += 0.5 * w;          // wall strip reuses nearest quotient
            if (i == nx - 1) E[R] += 0.5 * w;
        }
    }
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int D = grid.idx(i, j - 1), U = grid.idx(i, j);
            const double q = (c[U] - c[D]) / grid.hy;
            const double w = grid.hx * grid.hy * q * q;
            E[D] += 0.5 * w;
            E[U] += 0.5 * w;
            if (j == 1) E[D] += 0.5 * w;
            if (j == ny - 1) E[U] += 0.5 * w;
        }
    }
    return E;
}

std::vector<double> grad_energy_cells(const ScalarField& c, const RadialGrid& grid) {
    std::vector<double> E(grid.nr, 0.0);
    for (int k = 1; k < grid.nr; ++k) {
        const double q = (c[k] - c[k - 1]) / grid.h;
        const double area = grid.sigma_d * std::pow(grid.rf(k), grid.d - 1);
        const double w = area * grid.h * q * q;
        E[k - 1] += 0.5 * w;
        E[k] += 0.5 * w;
        // outer wall strip; the inner one vanishes since c_r(0) = 0
        if (k == grid.nr - 1) {
            const double area_R = grid.sigma_d * std::pow(grid.R, grid.d - 1);
            E[k] += 0.5 * area_R * grid.h * q * q;
        }
    }
    return E;
}

double grad_c_l2(const ScalarField& c, const Grid2D& grid) {
    auto E = grad_energy_cells(c, grid);
    double s = 0.0;
    for (double v : E) s += v;
    return s;
}

double grad_c_l2(const ScalarField& c, const RadialGrid& grid) {
    auto E = grad_energy_cells(c, grid);
    double s = 0.0;
    for (double v : E) s += v;
    return s;
}

double grad_c_l2_local(const ScalarField& c, const Grid2D& grid,
                       double qx, double qy, double delta) {
    if (!(delta > 0.0)) throw ConfigError("grad_c_l2_local: delta must be positive");
    auto E = grad_energy_cells(c, grid);
    const double d2 = delta * delta;
    double s = 0.0;
    for (int j = 0; j < grid.ny; ++j) {
        const double dy = grid.yc(j) - qy;
        for (int i = 0; i < grid.nx; ++i) {
            const double dx = grid.xc(i) - qx;
            if (dx * dx + dy * dy <= d2) s += E[grid.idx(i, j)];
        }
    }
    return s;
}

// ---------------------------------------------------------------------------

CutoffPsi::CutoffPsi(double eta_, double cx_, double cy_) : eta(eta_), cx(cx_), cy(cy_) {
    // eta = 1/e itself is still fine (-ln eta = 1 > 0)
    if (!(eta > 0.0) || eta > std::exp(-1.0) * (1.0 + 1e-15))
        throw ConfigError("CutoffPsi: eta must lie in (0, 1/e)");
}

double CutoffPsi::value_radius(double r) const {
    if (r >= eta || r <= 0.0) return r <= 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return std::log(-std::log(r)) - std::log(-std::log(eta));
}

double CutoffPsi::value(double x, double y) const {
    return value_radius(std::hypot(x - cx, y - cy));
}

CutoffPhi::CutoffPhi(double delta_, double cx_, double cy_) : delta(delta_), cx(cx_), cy(cy_) {
    if (!(delta > 0.0)) throw ConfigError("CutoffPhi: delta must be positive");
    K = 7.5 / delta;
}

namespace {

// quintic smoothstep: s(0)=1, s(1)=0, C^2 at both ends, sup|s'| = 15/8
double ramp(double t) { return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t); }
double ramp_deriv(double t) { return -30.0 * t * t * (1.0 - t) * (1.0 - t); }

} // namespace

double CutoffPhi::value_radius(double r) const {
    if (r <= 0.5 * delta) return 1.0;
    if (r >= delta) return 0.0;
    const double z = ramp((r - 0.5 * delta) / (0.5 * delta));
    return z * z;
}

double CutoffPhi::value(double x, double y) const {
    return value_radius(std::hypot(x - cx, y - cy));
}

double CutoffPhi::gradient_magnitude_radius(double r) const {
    if (r <= 0.5 * delta || r >= delta) return 0.0;
    const double t = (r - 0.5 * delta) / (0.5 * delta);
    const double z = ramp(t);
    const double dz = ramp_deriv(t) / (0.5 * delta);
    return std::abs(2.0 * z * dz);
}

void CutoffPhi::gradient(double x, double y, double& gx, double& gy) const {
    const double rx = x - cx, ry = y - cy;
    const double r = std::hypot(rx, ry);
    if (r <= 0.5 * delta || r >= delta || r == 0.0) {
        gx = gy = 0.0;
        return;
    }
    const double t = (r - 0.5 * delta) / (0.5 * delta);
    const double dphi = 2.0 * ramp(t) * ramp_deriv(t) / (0.5 * delta);
    gx = dphi * rx / r;
    gy = dphi * ry / r;
}

// ---------------------------------------------------------------------------

namespace {

template <class F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    const double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

} // namespace

std::pair<double, double> psi_eta_h1(double eta, int d, double quad_tol) {
    if (!(eta > 0.0) || !(eta < std::exp(-1.0)))
        throw ConfigError("psi_eta_h1: eta must lie in (0, 1/e)");
    if (d < 2) throw ConfigError("psi_eta_h1: d must be >= 2");
    const double sigma = unit_sphere_area(d);
    const double L = std::log(1.0 / eta);

    // ||psi||_2^2 = sigma_d int_L^inf (ln rho)^2 e^{-d rho} drho; the tail
    // past L + 500/d is below the quadrature tolerance by a wide margin.
    auto f_l2 = [d](double rho) {
        const double lr = std::log(rho);
        return lr * lr * std::exp(-d * rho);
    };
    const double l2 = sigma * adaptive_simpson(f_l2, L, L + 500.0 / d, quad_tol);

    double semi;
    if (d == 2) {
        // integrand rho^-2: quadrature to X, exact tail 1/X
        const double X = 1000.0 * L;
        auto f = [](double rho) { return 1.0 / (rho * rho); };
        semi = sigma * (adaptive_simpson(f, L, X, quad_tol) + 1.0 / X);
    } else {
        auto f = [d](double rho) { return std::exp(-(d - 2) * rho) / (rho * rho); };
        semi = sigma * adaptive_simpson(f, L, L + 500.0 / (d - 2), quad_tol);
    }
    return {l2, semi};
}

double local_entropy(const ScalarField& n, const Grid2D& grid, const CutoffPhi& phi) {
    const double m = grid.cell_area();
    double s = 0.0;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const double p = phi.value(grid.xc(i), grid.yc(j));
            if (p > 0.0) s += xlogx(n[grid.idx(i, j)]) * p * p * p * m;
        }
    return s;
}

double local_entropy(const ScalarField& n, const RadialGrid& grid, const CutoffPhi& phi) {
    double s = 0.0;
    for (int i = 0; i < grid.nr; ++i) {
        const double p = phi.value_radius(std::abs(grid.rc(i) - phi.cx));
        if (p > 0.0) s += xlogx(n[i]) * p * p * p * grid.weight[i];
    }
    return s;
}

std::pair<double, double> lemma7_gap(const ScalarField& f, const Grid2D& grid,
                                     double p, double s, double eps, double C) {
    if (!(s > 1.0)) throw ConfigError("lemma7_gap: s must exceed 1");
    if (!(p >= 1.0) || !(eps > 0.0) || !(C > 0.0))
        throw ConfigError("lemma7_gap: need p >= 1, eps > 0, C > 0");
    const double m = grid.cell_area();

    double lhs = 0.0, ent = 0.0, frac = 0.0;
    const double q_exp = 0.5 * eps * (p + 1.0) / (1.0 + eps);
    for (double v : f) {
        if (v < 0.0) throw ConfigError("lemma7_gap: f must be nonnegative");
        lhs += std::pow(v, p + 1.0) * m;
        ent += (xlogx(v) + std::exp(-1.0)) * m;
        frac += std::pow(v, q_exp) * m;
    }

    // int f^{p-2} |grad f|^2 with face differences and face-average weights
    double fgrad = 0.0;
    auto face_term = [&](double fl, double fr, double h) {
        const double favg = 0.5 * (fl + fr);
        if (favg <= 0.0) return 0.0;
        const double q = (fr - fl) / h;
        return std::pow(favg, p - 2.0) * q * q * m;
    };
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 1; i < grid.nx; ++i)
            fgrad += face_term(f[grid.idx(i - 1, j)], f[grid.idx(i, j)], grid.hx);
    for (int j = 1; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            fgrad += face_term(f[grid.idx(i, j - 1)], f[grid.idx(i, j)], grid.hy);

    const double rhs = C * (p + 1.0) * (p + 1.0) / std::log(s) * ent * fgrad +
                       std::pow(4.0 * C, 1.0 + 0.5 * eps) *
                           std::pow(frac, 2.0 * (1.0 + eps) / eps) +
                       6.0 * std::pow(s, p + 1.0) * grid.area();
    return {lhs, rhs};
}

SupNormVerdict sup_norm_monitor(const std::vector<double>& sup_series) {
    if (sup_series.size() < 8)
        throw ConfigError("sup_norm_monitor: need at least 8 records");
    const std::size_t half = sup_series.size() / 2;
    double first = 0.0, last = 0.0;
    for (std::size_t i = 0; i < half; ++i) first = std::max(first, sup_series[i]);
    for (std::size_t i = half; i < sup_series.size(); ++i) last = std::max(last, sup_series[i]);
    SupNormVerdict v;
    v.ratio = first > 0.0 ? last / first : (last > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    v.pass = last <= 1.05 * first;
    return v;
}

DeltaCertificate find_delta_for_epsilon(const std::vector<double>& times,
                                        const std::vector<ScalarField>& c_snapshots,
                                        const Grid2D& grid, double epsilon) {
    if (c_snapshots.empty()) throw ConfigError("find_delta_for_epsilon: empty trajectory");
    if (times.size() != c_snapshots.size())
        throw ConfigError("find_delta_for_epsilon: times/snapshots size mismatch");

    const double target = epsilon * epsilon;
    const double h = grid.h_min();
    const int kmax = static_cast<int>(std::ceil(grid.diameter() / h)) + 1;

    // per-snapshot energy fields with row prefix sums for fast disk sums
    const int nx = grid.nx, ny = grid.ny;
    std::vector<std::vector<double>> prefix(c_snapshots.size());
    for (std::size_t s = 0; s < c_snapshots.size(); ++s) {
        auto E = grad_energy_cells(c_snapshots[s], grid);
        auto& P = prefix[s];
        P.assign(ny * (nx + 1), 0.0);
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                P[j * (nx + 1) + i + 1] = P[j * (nx + 1) + i] + E[grid.idx(i, j)];
    }

    // worst localized energy over all snapshots and all cell centers
    auto sup_local = [&](double delta, DeltaCertificate& worst) {
        const double d2 = delta * delta;
        double sup = -1.0;
        for (std::size_t s = 0; s < c_snapshots.size(); ++s) {
            const auto& P = prefix[s];
            for (int cj = 0; cj < ny; ++cj) {
                for (int ci = 0; ci < nx; ++ci) {
                    const double qx = grid.xc(ci), qy = grid.yc(cj);
                    double total = 0.0;
                    const int jr = static_cast<int>(delta / grid.hy) + 1;
                    for (int j = std::max(0, cj - jr); j <= std::min(ny - 1, cj + jr); ++j) {
                        const double dy = grid.yc(j) - qy;
                        if (dy * dy > d2) continue;
                        const double half_w = std::sqrt(d2 - dy * dy);
                        // cells with |xc(i) - qx| <= half_w
                        int ilo = static_cast<int>(std::ceil((qx - half_w) / grid.hx - 0.5));
                        int ihi = static_cast<int>(std::floor((qx + half_w) / grid.hx - 0.5));
                        ilo = std::max(ilo, 0);
                        ihi = std::min(ihi, nx - 1);
                        if (ilo > ihi) continue;
                        total += P[j * (nx + 1) + ihi + 1] - P[j * (nx + 1) + ilo];
                    }
                    if (total > sup) {
                        sup = total;
                        worst.worst_value = total;
                        worst.worst_qx = qx;
                        worst.worst_qy = qy;
                        worst.worst_t = times[s];
                    }
                }
            }
        }
        return sup;
    };

    DeltaCertificate cert;
    cert.epsilon = epsilon;

    DeltaCertificate w1;
    if (sup_local(1 * h, w1) > target) {
        cert.found = false;
        cert.delta = h;
        cert.worst_value = w1.worst_value;
        cert.worst_qx = w1.worst_qx;
        cert.worst_qy = w1.worst_qy;
        cert.worst_t = w1.worst_t;
        return cert;
    }

    // bisection over k in [1, kmax]: predicate is monotone in delta
    int lo = 1, hi = kmax; // lo always feasible, hi #feasible unknown
    DeltaCertificate whi;
    if (sup_local(kmax * h, whi) <= target) {
        lo = kmax;
    } else {
        while (hi - lo > 1) {
            const int mid = lo + (hi - lo) / 2;
            DeltaCertificate wm;
            if (sup_local(mid * h, wm) <= target)
                lo = mid;
            else
                hi = mid;
        }
    }
    DeltaCertificate wfin;
    const double sup = sup_local(lo * h, wfin);
    cert.found = true;
    cert.delta = lo * h;
    cert.worst_value = sup;
    cert.worst_qx = wfin.worst_qx;
    cert.worst_qy = wfin.worst_qy;
    cert.worst_t = wfin.worst_t;
    return cert;
}

std::vector<std::string> record_field_names() {
    return {"t", "mass", "entropy", "sup_n", "grad_c_l2", "min_c", "max_c",
            "local_grad_max", "local_entropy_max", "elliptic_iterations",
            "elliptic_residual", "margin_grad", "mass_drift_rel",
            "q_margin", "min_c_minus_cstar", "cr_excess"};
}

std::vector<double> record_field_values(const DiagnosticsRecord& r) {
    return {r.t, r.mass, r.entropy, r.sup_n, r.grad_c_l2, r.min_c, r.max_c,
            r.local_grad_max, r.local_entropy_max,
            static_cast<double>(r.elliptic_iterations), r.elliptic_residual,
            r.margin_grad, r.mass_drift_rel, r.q_margin, r.min_c_minus_cstar,
            r.cr_excess};
}

} // namespace chemsim
