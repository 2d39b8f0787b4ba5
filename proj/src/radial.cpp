#include "chemsim/radial.hpp"

#include "chemsim/elliptic.hpp"
#include "chemsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace chemsim {

std::vector<double> cumulative_mass(const ScalarField& n, const RadialGrid& grid) {
    std::vector<double> Q(grid.nr + 1, 0.0);
    for (int i = 0; i < grid.nr; ++i)
        Q[i + 1] = Q[i] + grid.weight[i] * n[i];
    return Q;
}

double compute_M0(double l1_norm, double linf_norm, int d, double R) {
    if (!(l1_norm > 0.0) || !(linf_norm > 0.0) || !(R > 0.0))
        throw ConfigError("compute_M0: norms and radius must be positive");
    const double sigma = unit_sphere_area(d);
    return std::max(l1_norm / std::pow(R, d), sigma / d * linf_norm);
}

RadialBounds compute_bounds(double M0, double gamma, double R, int d) {
    if (!(M0 > 0.0) || !(gamma > 0.0) || !(R > 0.0))
        throw ConfigError("compute_bounds: arguments must be positive");
    RadialBounds b;
    b.M0 = M0;
    b.gamma = gamma;
    b.R = R;
    b.d = d;
    b.sigma_d = unit_sphere_area(d);
    b.m0 = 0.5 * gamma / (M0 * R / b.sigma_d + 1.0);
    b.c_star = b.m0 * std::exp(-0.5 * M0 * R * R / b.sigma_d);
    return b;
}

std::vector<double> signal_gradient(const RadialState& state) {
    const RadialGrid& g = state.grid;
    std::vector<double> cr(g.nr + 1, 0.0);
    double acc = 0.0; // sigma_d * int_0^r rho^{d-1} n c drho
    for (int k = 1; k <= g.nr; ++k) {
        acc += g.weight[k - 1] * state.n[k - 1] * state.c[k - 1];
        cr[k] = std::pow(g.rf(k), 1 - g.d) * acc / g.sigma_d;
    }
    return cr;
}

std::vector<double> radial_drift(const ScalarField& n, const ScalarField& c,
                                 const SensitivityModel& chi, const RadialGrid& grid,
                                 double c_floor) {
    if (chi.kind != SensitivityModel::Kind::scalar_radial)
        throw ConfigError("radial_drift: radial grid needs a scalar sensitivity");
    if (chi.singular_at_zero && c_floor > 0.0) {
        double cmin = *std::min_element(c.begin(), c.end());
        if (cmin < c_floor) {
            std::ostringstream msg;
            msg << "radial_drift: min c " << cmin << " fell below the singular-sensitivity floor "
                << c_floor << " (theoretical lower bound violated)";
            throw BoundViolation(msg.str());
        }
    }
    std::vector<double> v(grid.nr + 1, 0.0);
    for (int k = 1; k < grid.nr; ++k) {
        const double cr = (c[k] - c[k - 1]) / grid.h;
        const double nf = 0.5 * (n[k - 1] + n[k]);
        const double cf = 0.5 * (c[k - 1] + c[k]);
        v[k] = chi.chi(grid.rf(k), nf, cf) * cr;
        if (!std::isfinite(v[k]))
            throw ConfigError("radial_drift: non-finite sensitivity value");
    }
    return v;
}

std::pair<ScalarField, StepReport> radial_advance(const ScalarField& n,
                                                  const std::vector<double>& face_speed,
                                                  double dt, const RadialGrid& grid) {
    const double admissible = cfl_dt_radial(face_speed, grid, 1.0);
    if (dt > admissible * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "step_radial: dt " << dt << " exceeds admissible CFL step " << admissible;
        throw CflError(msg.str(), admissible);
    }

    const int nr = grid.nr;
    std::vector<double> flux(nr + 1, 0.0); // transport flux per unit area, outward
    for (int k = 1; k < nr; ++k) {
        const double v = face_speed[k];
        const double nup = v > 0.0 ? n[k - 1] : n[k];
        flux[k] = -(n[k] - n[k - 1]) / grid.h + nup * v;
    }

    ScalarField next(nr);
    for (int i = 0; i < nr; ++i) {
        const double a_in = grid.sigma_d * std::pow(grid.rf(i), grid.d - 1);
        const double a_out = grid.sigma_d * std::pow(grid.rf(i + 1), grid.d - 1);
        next[i] = n[i] + dt * (flux[i] * a_in - flux[i + 1] * a_out) / grid.weight[i];
    }

    StepReport rep;
    rep.dt = dt;
    rep.cfl_ratio = dt / admissible;
    double mb = 0.0, ma = 0.0, mn = next[0], mx = next[0];
    for (int i = 0; i < nr; ++i) {
        mb += n[i] * grid.weight[i];
        ma += next[i] * grid.weight[i];
        mn = std::min(mn, next[i]);
        mx = std::max(mx, next[i]);
    }
    rep.mass_before = mb;
    rep.mass_after = ma;
    rep.min_n = mn;
    rep.max_n = mx;
    if (mn < -1e-12)
        throw InternalError("step_radial: density went negative beyond round-off");
    if (std::abs(ma - mb) > 1e-12 * std::max(std::abs(mb), 1e-300))
        throw InternalError("step_radial: mass drifted beyond round-off");
    return {std::move(next), rep};
}

std::pair<RadialState, StepReport> step_radial(const RadialState& state,
                                               const SensitivityModel& chi, double dt,
                                               const BoundaryData& bd,
                                               double elliptic_tolerance, double c_floor) {
    auto vel = radial_drift(state.n, state.c, chi, state.grid, c_floor);
    auto [n_next, rep] = radial_advance(state.n, vel, dt, state.grid);

    RadialState out;
    out.grid = state.grid;
    out.n = std::move(n_next);
    out.t = state.t + dt;
    EllipticSolution sol =
        solve_signal(Grid{state.grid}, out.n, bd, elliptic_tolerance, 50000, &state.c);
    out.c = std::move(sol.v);
    return {std::move(out), rep};
}

QBoundReport check_Q_bound(const std::vector<double>& times,
                           const std::vector<std::vector<double>>& Q_profiles,
                           double M0, const RadialGrid& grid) {
    QBoundReport rep;
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < Q_profiles.size(); ++s) {
        for (int k = 0; k <= grid.nr; ++k) {
            const double margin = M0 * std::pow(grid.rf(k), grid.d) - Q_profiles[s][k];
            if (margin < rep.min_margin) {
                rep.min_margin = margin;
                rep.worst_r = grid.rf(k);
                rep.worst_t = times[s];
            }
        }
    }
    return rep;
}

QTrajectory evolve_Q_direct(const std::vector<double>& Q0, const SensitivityModel& chi,
                            double horizon, const RadialGrid& grid, const BoundaryData& bd,
                            double elliptic_tolerance, double safety,
                            const std::vector<double>& record_times, double c_floor) {
    const int nr = grid.nr;
    if (static_cast<int>(Q0.size()) != nr + 1)
        throw ConfigError("evolve_Q_direct: Q0 must live on the nr+1 face radii");
    if (!(Q0.front() == 0.0))
        throw ConfigError("evolve_Q_direct: Q0(0) must vanish");
    for (int k = 0; k < nr; ++k)
        if (Q0[k + 1] < Q0[k] - 1e-12)
            throw ConfigError("evolve_Q_direct: Q0 must be nondecreasing");

    // exact shell volumes: W = M0 r^d has constant density against these
    std::vector<double> shell(nr);
    for (int i = 0; i < nr; ++i)
        shell[i] = grid.sigma_d *
                   (std::pow(grid.rf(i + 1), grid.d) - std::pow(grid.rf(i), grid.d)) / grid.d;

    std::vector<double> Q = Q0;
    double t = 0.0;
    QTrajectory traj;
    std::size_t next_rec = 0;
    ScalarField c_prev; // warm start between solves

    auto record_now = [&] {
        traj.times.push_back(t);
        traj.Q.push_back(Q);
    };
    auto record_if_due = [&] {
        while (next_rec < record_times.size() && t >= record_times[next_rec] - 1e-14) {
            record_now();
            ++next_rec;
        }
    };
    record_if_due();

    std::vector<double> ncell(nr), npos(nr), cr(nr + 1), V(nr + 1, 0.0), Qnew(nr + 1);
    while (t < horizon - 1e-14) {
        for (int i = 0; i < nr; ++i) {
            ncell[i] = (Q[i + 1] - Q[i]) / shell[i];
            npos[i] = std::max(ncell[i], 0.0); // round-off guard for the solve
        }
        ScalarField nfield(npos.begin(), npos.end());
        EllipticSolution sol = solve_signal(Grid{grid}, nfield, bd, elliptic_tolerance, 50000,
                                            c_prev.empty() ? nullptr : &c_prev);
        c_prev = sol.v;
        const ScalarField& c = sol.v;

        if (chi.singular_at_zero && c_floor > 0.0) {
            double cmin = *std::min_element(c.begin(), c.end());
            if (cmin < c_floor)
                throw BoundViolation("evolve_Q_direct: signal fell below the singular floor");
        }

        double acc = 0.0;
        cr[0] = 0.0;
        for (int k = 1; k <= nr; ++k) {
            acc += grid.weight[k - 1] * npos[k - 1] * c[k - 1];
            cr[k] = std::pow(grid.rf(k), 1 - grid.d) * acc / grid.sigma_d;
        }
        for (int k = 1; k < nr; ++k) {
            const double nbar = 0.5 * (npos[k - 1] + npos[k]);
            const double cbar = 0.5 * (c[k - 1] + c[k]);
            V[k] = chi.chi(grid.rf(k), nbar, cbar) * cr[k];
        }

        double dt = cfl_dt_radial(V, grid, safety);
        if (next_rec < record_times.size())
            dt = std::min(dt, record_times[next_rec] - t);
        dt = std::min(dt, horizon - t);

        Qnew[0] = 0.0;
        Qnew[nr] = Q[nr];
        for (int k = 1; k < nr; ++k) {
            const double diff =
                std::pow(grid.rf(k), grid.d - 1) * grid.sigma_d * (ncell[k] - ncell[k - 1]) / grid.h;
            const double qr = V[k] >= 0.0 ? (Q[k] - Q[k - 1]) / grid.h : (Q[k + 1] - Q[k]) / grid.h;
            Qnew[k] = Q[k] + dt * (diff - V[k] * qr);
        }
        Q.swap(Qnew);
        t += dt;

        for (int k = 0; k < nr; ++k)
            if (Q[k + 1] < Q[k] - 1e-8)
                throw InternalError("evolve_Q_direct: Q lost monotonicity beyond 1e-8");

        record_if_due();
    }
    if (traj.times.empty() || traj.times.back() < t - 1e-14) record_now();
    return traj;
}

} // namespace chemsim
