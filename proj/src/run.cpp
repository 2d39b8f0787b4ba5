#include "chemsim/run.hpp"

#include "chemsim/diagnostics.hpp"
#include "chemsim/elliptic.hpp"
#include "chemsim/errors.hpp"
#include "chemsim/io.hpp"
#include "chemsim/radial.hpp"
#include "chemsim/sensitivity.hpp"
#include "chemsim/stepper.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

namespace chemsim {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::completed: return "completed";
        case RunStatus::blowup: return "blow-up";
        case RunStatus::elliptic_failure: return "elliptic-failure";
        case RunStatus::bound_violation: return "bound-violation";
    }
    return "unknown";
}

int exit_code_for(const RunSummary& summary) {
    if (summary.status == RunStatus::elliptic_failure) return 3;
    if (summary.status != RunStatus::completed) return 1;
    for (const auto& c : summary.checks)
        if (c.enabled && !c.pass) return 1;
    return 0;
}

std::string summary_json_line(const RunSummary& s) {
    json j;
    j["schema"] = s.schema;
    j["id"] = s.scenario_id;
    j["status"] = to_string(s.status);
    j["final_t"] = s.final_t;
    j["wall_seconds"] = s.wall_seconds;
    j["message"] = s.message;
    j["gamma"] = s.gamma;
    j["geometry"] = s.geometry_spec;
    j["sensitivity"] = s.sensitivity;
    j["initial_density"] = s.initial_density;
    j["blowup_threshold"] = s.blowup_threshold;
    j["M0"] = s.M0;
    j["c_star"] = s.c_star;
    j["output_dir"] = s.output_dir;
    json checks = json::array();
    for (const auto& c : s.checks)
        checks.push_back({{"name", c.name}, {"enabled", c.enabled}, {"pass", c.pass},
                          {"margin", c.margin}});
    j["checks"] = checks;
    j["outputs"] = s.outputs;
    return j.dump();
}

void print_human_summary(std::ostream& os, const RunSummary& s) {
    os << "scenario " << s.scenario_id << ": " << to_string(s.status)
       << " (t = " << s.final_t << ", wall " << s.wall_seconds << " s)\n";
    if (!s.message.empty()) os << "  note: " << s.message << "\n";
    for (const auto& c : s.checks) {
        os << "  [" << (c.enabled ? (c.pass ? "PASS" : "FAIL") : "off ") << "] " << c.name
           << "  margin = " << format_g17(c.margin) << "\n";
    }
}

namespace {

constexpr double kMaxPrincipleTol = 1e-12;
constexpr double kMassDriftTol = 1e-10;
constexpr double kGradAllowance = 1e-6;
constexpr double kCLowerTol = 1e-3;
constexpr double kCrExcessTol = 1e-8;

struct CheckTracker {
    double gamma = 1.0;
    bool radial = false;
    double M0 = 0.0, c_star = 0.0, R = 0.0;
    int d = 2;

    double worst_min_c = std::numeric_limits<double>::infinity();
    double worst_max_c = -std::numeric_limits<double>::infinity();
    double worst_mass_drift = 0.0;
    double min_margin_grad = std::numeric_limits<double>::infinity();
    double min_q_margin = std::numeric_limits<double>::infinity();
    double max_cr_excess = -std::numeric_limits<double>::infinity();
    std::vector<double> sup_series, entropy_series;

    void observe_c(const ScalarField& c) {
        for (double v : c) {
            worst_min_c = std::min(worst_min_c, v);
            worst_max_c = std::max(worst_max_c, v);
        }
    }

    void observe_record(const DiagnosticsRecord& r) {
        worst_mass_drift = std::max(worst_mass_drift, r.mass_drift_rel);
        min_margin_grad = std::min(min_margin_grad, r.margin_grad);
        sup_series.push_back(r.sup_n);
        entropy_series.push_back(r.entropy);
        if (radial) {
            min_q_margin = std::min(min_q_margin, r.q_margin);
            max_cr_excess = std::max(max_cr_excess, r.cr_excess);
        }
    }

    std::vector<CheckOutcome> build(const std::vector<std::string>& disabled) const {
        auto is_disabled = [&](const std::string& name) {
            return std::find(disabled.begin(), disabled.end(), name) != disabled.end();
        };
        std::vector<CheckOutcome> out;
        auto add = [&](const std::string& name, bool evaluable, double margin, bool pass) {
            CheckOutcome c;
            c.name = name;
            c.enabled = evaluable && !is_disabled(name);
            c.margin = margin;
            c.pass = pass;
            out.push_back(c);
        };

        const double mp_margin = std::min(worst_min_c, gamma - worst_max_c);
        add("max_principle", true, mp_margin, mp_margin >= -kMaxPrincipleTol);
        add("mass", true, kMassDriftTol - worst_mass_drift, worst_mass_drift <= kMassDriftTol);
        add("grad_bound", true, min_margin_grad, min_margin_grad >= -kGradAllowance);

        if (sup_series.size() >= 8) {
            const auto v = sup_norm_monitor(sup_series);
            add("sup_norm", true, 1.05 - v.ratio, v.pass);
        } else {
            add("sup_norm", false, 0.0, true);
        }

        if (entropy_series.size() >= 4) {
            double full = -std::numeric_limits<double>::infinity();
            for (double e : entropy_series) full = std::max(full, e);
            double tail = -std::numeric_limits<double>::infinity();
            for (std::size_t i = entropy_series.size() - entropy_series.size() / 4;
                 i < entropy_series.size(); ++i)
                tail = std::max(tail, entropy_series[i]);
            add("entropy_growth", true, full - tail, tail <= full);
        } else {
            add("entropy_growth", false, 0.0, true);
        }

        if (radial) {
            const double q_tol = kCrExcessTol * M0 * std::pow(R, d);
            add("q_bound", true, min_q_margin, min_q_margin >= -q_tol);
            add("c_lower", true, worst_min_c - (c_star - kCLowerTol),
                worst_min_c >= c_star - kCLowerTol);
            add("cr_bound", true, kCrExcessTol - max_cr_excess, max_cr_excess <= kCrExcessTol);
        }
        return out;
    }
};

// shared record assembly ----------------------------------------------------

double auto_record_delta(double requested, double extent) {
    return requested > 0.0 ? requested : 0.15 * extent;
}

DiagnosticsRecord make_record_2d(double t, const ScalarField& n, const ScalarField& c,
                                 const Grid2D& grid, double gamma, int iters, double resid,
                                 double mass0, double delta) {
    DiagnosticsRecord r;
    r.t = t;
    r.mass = mass(n, grid);
    r.entropy = entropy(n, grid);
    r.sup_n = *std::max_element(n.begin(), n.end());
    r.grad_c_l2 = 0.0;
    auto E = grad_energy_cells(c, grid);
    for (double v : E) r.grad_c_l2 += v;
    r.min_c = *std::min_element(c.begin(), c.end());
    r.max_c = *std::max_element(c.begin(), c.end());
    r.elliptic_iterations = iters;
    r.elliptic_residual = resid;
    r.margin_grad = 0.5 * gamma * gamma * grid.boundary_measure() - r.grad_c_l2;
    r.mass_drift_rel = mass0 > 0.0 ? std::abs(r.mass - mass0) / mass0 : 0.0;

    // localized diagnostics over a coarse 8x8 center grid
    const double d2 = delta * delta;
    for (int b = 0; b < 8; ++b) {
        for (int a = 0; a < 8; ++a) {
            const double qx = grid.Lx * (a + 0.5) / 8.0;
            const double qy = grid.Ly * (b + 0.5) / 8.0;
            double local = 0.0;
            CutoffPhi phi(delta, qx, qy);
            double lent = 0.0;
            for (int j = 0; j < grid.ny; ++j) {
                const double dy = grid.yc(j) - qy;
                for (int i = 0; i < grid.nx; ++i) {
                    const double dx = grid.xc(i) - qx;
                    const int k = grid.idx(i, j);
                    if (dx * dx + dy * dy <= d2) local += E[k];
                    const double p = phi.value(grid.xc(i), grid.yc(j));
                    if (p > 0.0 && n[k] > 0.0)
                        lent += n[k] * std::log(n[k]) * p * p * p * grid.cell_area();
                }
            }
            r.local_grad_max = std::max(r.local_grad_max, local);
            r.local_entropy_max = std::max(r.local_entropy_max, lent);
        }
    }
    return r;
}

DiagnosticsRecord make_record_radial(double t, const ScalarField& n, const ScalarField& c,
                                     const RadialGrid& grid, double gamma, int iters,
                                     double resid, double mass0, double delta,
                                     const RadialBounds& bounds) {
    DiagnosticsRecord r;
    r.t = t;
    r.mass = mass(n, grid);
    r.entropy = entropy(n, grid);
    r.sup_n = *std::max_element(n.begin(), n.end());
    r.grad_c_l2 = grad_c_l2(c, grid);
    r.min_c = *std::min_element(c.begin(), c.end());
    r.max_c = *std::max_element(c.begin(), c.end());
    r.elliptic_iterations = iters;
    r.elliptic_residual = resid;
    r.margin_grad =
        0.5 * gamma * gamma * grid.sigma_d * std::pow(grid.R, grid.d - 1) - r.grad_c_l2;
    r.mass_drift_rel = mass0 > 0.0 ? std::abs(r.mass - mass0) / mass0 : 0.0;

    auto Q = cumulative_mass(n, grid);
    r.q_margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= grid.nr; ++k)
        r.q_margin =
            std::min(r.q_margin, bounds.M0 * std::pow(grid.rf(k), grid.d) - Q[k]);

    RadialState st{grid, n, c, t};
    auto cr = signal_gradient(st);
    r.cr_excess = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= grid.nr; ++k) {
        const double envelope = gamma * bounds.M0 * grid.rf(k) / grid.sigma_d;
        r.cr_excess = std::max(r.cr_excess, cr[k] - envelope);
    }
    r.min_c_minus_cstar = r.min_c - bounds.c_star;

    // localized diagnostics along 8 interval centers
    auto E = grad_energy_cells(c, grid);
    for (int a = 0; a < 8; ++a) {
        const double q = grid.R * (a + 0.5) / 8.0;
        double local = 0.0, lent = 0.0;
        CutoffPhi phi(delta, q, 0.0);
        for (int i = 0; i < grid.nr; ++i) {
            const double dist = std::abs(grid.rc(i) - q);
            if (dist <= delta) local += E[i];
            const double p = phi.value_radius(dist);
            if (p > 0.0 && n[i] > 0.0)
                lent += n[i] * std::log(n[i]) * p * p * p * grid.weight[i];
        }
        r.local_grad_max = std::max(r.local_grad_max, local);
        r.local_entropy_max = std::max(r.local_entropy_max, lent);
    }
    return r;
}

void write_record_csv_header(std::ostream& os) {
    write_csv_row(os, record_field_names());
}

void write_record_csv_row(std::ostream& os, const DiagnosticsRecord& r) {
    std::vector<std::string> cells;
    auto vals = record_field_values(r);
    cells.reserve(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (record_field_names()[i] == "elliptic_iterations")
            cells.push_back(std::to_string(r.elliptic_iterations));
        else
            cells.push_back(format_g17(vals[i]));
    }
    write_csv_row(os, cells);
}

std::string snap_name(const char* prefix, int k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%06d.dat", prefix, k);
    return buf;
}

SampleBox sensitivity_box(const ScenarioConfig& cfg, double n_linf, double s_min) {
    SampleBox box;
    if (cfg.geometry.kind == GeometrySpec::Kind::rect2d) {
        box.x1 = cfg.geometry.Lx;
        box.y1 = cfg.geometry.Ly;
    } else {
        box.R = cfg.geometry.R;
    }
    box.gamma = cfg.gamma;
    box.n_max = std::max(1.0, 2.0 * n_linf);
    box.s_min = s_min;
    return box;
}

} // namespace

RunSummary run_scenario(const ScenarioConfig& cfg, const RunOptions& opts,
                        const RunCallbacks* callbacks) {
    const auto t_start = std::chrono::steady_clock::now();

    ScenarioConfig c = cfg;
    if (opts.output_dir) c.output_dir = *opts.output_dir;
    if (opts.cadence_steps) c.cadence_steps = *opts.cadence_steps;
    for (const auto& name : opts.disabled_checks) c.disabled_checks.push_back(name);

    RunSummary sum;
    sum.scenario_id = c.id;
    sum.gamma = c.gamma;
    sum.sensitivity = c.sensitivity;
    sum.initial_density = c.initial_density;
    sum.blowup_threshold = c.blowup_threshold;
    sum.output_dir = c.output_dir;
    {
        char buf[128];
        if (c.geometry.kind == GeometrySpec::Kind::rect2d)
            std::snprintf(buf, sizeof buf, "rect2d(%.17g,%.17g,%d,%d)", c.geometry.Lx,
                          c.geometry.Ly, c.geometry.nx, c.geometry.ny);
        else
            std::snprintf(buf, sizeof buf, "radial(%d,%.17g,%d)", c.geometry.d, c.geometry.R,
                          c.geometry.nr);
        sum.geometry_spec = buf;
    }

    fs::create_directories(c.output_dir);
    std::ofstream csv(c.output_dir + "/diagnostics.csv");
    if (!csv) throw ConfigError("run: cannot write to output directory '" + c.output_dir + "'");
    write_record_csv_header(csv);
    sum.outputs.push_back("diagnostics.csv");

    const bool is_radial = c.geometry.kind == GeometrySpec::Kind::radial;
    BoundaryData bd = c.make_boundary();
    SensitivityModel S = make_sensitivity(c.sensitivity);

    CheckTracker tracker;
    tracker.gamma = c.gamma;

    double mass0 = 0.0;
    int rec_index = 0;
    double last_rec_t = -std::numeric_limits<double>::infinity();
    int steps_since_rec = 0;

    auto wall = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    };

    try {
        if (!is_radial) {
            Grid2D grid = std::get<Grid2D>(build_grid(c.geometry));
            InitialDensity init = make_initial_density(c.initial_density, grid);
            if (!(c.blowup_threshold > init.linf))
                throw ConfigError("scenario: blowup_threshold must exceed ||n0||_inf");
            {
                auto rep = validate_sensitivity(S, sensitivity_box(c, init.linf, 1e-3 * c.gamma),
                                                2000, 20240901u);
                if (rep.violation)
                    throw ConfigError("scenario: sensitivity preset violates its bound function");
            }
            const double delta_rec = auto_record_delta(c.record_delta, std::min(grid.Lx, grid.Ly));

            ScalarField n = init.values;
            mass0 = mass(n, grid);
            Grid gv{grid};
            EllipticSolution sol = solve_signal(gv, n, bd, c.elliptic_tolerance);
            ScalarField c_field = sol.v;
            ScalarField c_hist1 = c_field, c_hist2;
            tracker.observe_c(c_field);

            double t = 0.0;
            auto emit_record = [&](int iters, double resid) {
                DiagnosticsRecord r = make_record_2d(t, n, c_field, grid, c.gamma, iters, resid,
                                                     mass0, delta_rec);
                tracker.observe_record(r);
                write_record_csv_row(csv, r);
                if (opts.write_snapshots) {
                    write_snapshot(c.output_dir + "/" + snap_name("n", rec_index), t, grid, n);
                    write_snapshot(c.output_dir + "/" + snap_name("c", rec_index), t, grid,
                                   c_field);
                    sum.outputs.push_back(snap_name("n", rec_index));
                    sum.outputs.push_back(snap_name("c", rec_index));
                }
                if (callbacks && callbacks->on_record) callbacks->on_record(r, n, c_field);
                ++rec_index;
                last_rec_t = t;
                steps_since_rec = 0;
            };
            emit_record(sol.iterations, sol.residual);

            while (t < c.t_end - 1e-14) {
                FaceVectors vel = drift_velocity(n, c_field, S, grid);
                double dt = c.dt_control.kind == DtControl::Kind::cfl
                                ? cfl_dt(vel, grid, c.dt_control.value)
                                : c.dt_control.value;
                dt = std::min(dt, c.t_end - t);
                auto [n_next, rep] = advance(n, vel, dt, grid);
                n = std::move(n_next);
                t += dt;

                // quadratic-in-time extrapolation as the warm start; CG
                // verifies the true residual either way
                ScalarField guess(c_field.size());
                if (c_hist2.size() == guess.size()) {
                    for (std::size_t k = 0; k < guess.size(); ++k)
                        guess[k] = 3.0 * (c_field[k] - c_hist1[k]) + c_hist2[k];
                } else {
                    for (std::size_t k = 0; k < guess.size(); ++k)
                        guess[k] = 2.0 * c_field[k] - c_hist1[k];
                }
                c_hist2 = std::move(c_hist1);
                c_hist1 = c_field;
                sol = solve_signal(gv, n, bd, c.elliptic_tolerance, 50000, &guess);
                c_field = sol.v;

                tracker.observe_c(c_field);
                tracker.worst_mass_drift = std::max(
                    tracker.worst_mass_drift, std::abs(rep.mass_after - mass0) /
                                                  std::max(mass0, 1e-300));
                if (callbacks && callbacks->on_step) callbacks->on_step(t, n, c_field);

                ++steps_since_rec;
                const bool due = steps_since_rec >= c.cadence_steps ||
                                 t - last_rec_t >= c.cadence_time - 1e-14 ||
                                 t >= c.t_end - 1e-14;
                if (detect_blowup(n, c.blowup_threshold)) {
                    sum.status = RunStatus::blowup;
                    sum.message = "||n||_inf crossed " + format_g17(c.blowup_threshold) +
                                  " at t = " + format_g17(t) +
                                  " (empirical lower bound for T_max)";
                    emit_record(sol.iterations, sol.residual);
                    break;
                }
                if (due) emit_record(sol.iterations, sol.residual);
            }
            sum.final_t = t;
        } else {
            RadialGrid grid = std::get<RadialGrid>(build_grid(c.geometry));
            InitialDensity init = make_initial_density(c.initial_density, grid);
            if (!(c.blowup_threshold > init.linf))
                throw ConfigError("scenario: blowup_threshold must exceed ||n0||_inf");

            const double M0 = compute_M0(init.l1, init.linf, grid.d, grid.R);
            RadialBounds bounds = compute_bounds(M0, c.gamma, grid.R, grid.d);
            sum.M0 = bounds.M0;
            sum.c_star = bounds.c_star;
            tracker.radial = true;
            tracker.M0 = bounds.M0;
            tracker.c_star = bounds.c_star;
            tracker.R = grid.R;
            tracker.d = grid.d;
            const double c_floor = S.singular_at_zero ? bounds.c_star / 10.0 : 0.0;
            {
                auto rep = validate_sensitivity(
                    S, sensitivity_box(c, init.linf, std::max(c_floor, 1e-3 * c.gamma)), 2000,
                    20240901u);
                if (rep.violation)
                    throw ConfigError("scenario: sensitivity preset violates its bound function");
            }
            const double delta_rec = auto_record_delta(c.record_delta, grid.R);

            std::ofstream bcsv(c.output_dir + "/bound_checks.csv");
            write_csv_row(bcsv, {"t", "min_margin_Q", "min_c", "c_star", "max_cr_excess"});
            sum.outputs.push_back("bound_checks.csv");

            ScalarField n = init.values;
            mass0 = mass(n, grid);
            Grid gv{grid};
            EllipticSolution sol = solve_signal(gv, n, bd, c.elliptic_tolerance);
            ScalarField c_field = sol.v;
            ScalarField c_hist1 = c_field, c_hist2;
            tracker.observe_c(c_field);

            double t = 0.0;
            auto emit_record = [&](int iters, double resid) {
                DiagnosticsRecord r = make_record_radial(t, n, c_field, grid, c.gamma, iters,
                                                         resid, mass0, delta_rec, bounds);
                tracker.observe_record(r);
                write_record_csv_row(csv, r);
                write_csv_row(bcsv, {format_g17(r.t), format_g17(r.q_margin),
                                     format_g17(r.min_c), format_g17(bounds.c_star),
                                     format_g17(r.cr_excess)});
                if (opts.write_snapshots) {
                    write_snapshot(c.output_dir + "/" + snap_name("n", rec_index), t, grid, n);
                    write_snapshot(c.output_dir + "/" + snap_name("c", rec_index), t, grid,
                                   c_field);
                    sum.outputs.push_back(snap_name("n", rec_index));
                    sum.outputs.push_back(snap_name("c", rec_index));
                }
                if (callbacks && callbacks->on_record) callbacks->on_record(r, n, c_field);
                ++rec_index;
                last_rec_t = t;
                steps_since_rec = 0;
            };
            emit_record(sol.iterations, sol.residual);

            while (t < c.t_end - 1e-14) {
                auto vel = radial_drift(n, c_field, S, grid, c_floor);
                double dt = c.dt_control.kind == DtControl::Kind::cfl
                                ? cfl_dt_radial(vel, grid, c.dt_control.value)
                                : c.dt_control.value;
                dt = std::min(dt, c.t_end - t);
                auto [n_next, rep] = radial_advance(n, vel, dt, grid);
                n = std::move(n_next);
                t += dt;

                // quadratic-in-time extrapolation as the warm start; CG
                // verifies the true residual either way
                ScalarField guess(c_field.size());
                if (c_hist2.size() == guess.size()) {
                    for (std::size_t k = 0; k < guess.size(); ++k)
                        guess[k] = 3.0 * (c_field[k] - c_hist1[k]) + c_hist2[k];
                } else {
                    for (std::size_t k = 0; k < guess.size(); ++k)
                        guess[k] = 2.0 * c_field[k] - c_hist1[k];
                }
                c_hist2 = std::move(c_hist1);
                c_hist1 = c_field;
                sol = solve_signal(gv, n, bd, c.elliptic_tolerance, 50000, &guess);
                c_field = sol.v;

                tracker.observe_c(c_field);
                tracker.worst_mass_drift = std::max(
                    tracker.worst_mass_drift,
                    std::abs(rep.mass_after - mass0) / std::max(mass0, 1e-300));
                if (callbacks && callbacks->on_step) callbacks->on_step(t, n, c_field);

                ++steps_since_rec;
                const bool due = steps_since_rec >= c.cadence_steps ||
                                 t - last_rec_t >= c.cadence_time - 1e-14 ||
                                 t >= c.t_end - 1e-14;
                if (detect_blowup(n, c.blowup_threshold)) {
                    sum.status = RunStatus::blowup;
                    sum.message = "||n||_inf crossed " + format_g17(c.blowup_threshold) +
                                  " at t = " + format_g17(t) +
                                  " (empirical lower bound for T_max)";
                    emit_record(sol.iterations, sol.residual);
                    break;
                }
                if (due) emit_record(sol.iterations, sol.residual);
            }
            sum.final_t = t;
        }
    } catch (const EllipticError& e) {
        sum.status = RunStatus::elliptic_failure;
        sum.message = e.what();
    } catch (const BoundViolation& e) {
        sum.status = RunStatus::bound_violation;
        sum.message = e.what();
    } catch (const CflError& e) {
        throw ConfigError(std::string("run: ") + e.what());
    }

    sum.checks = tracker.build(c.disabled_checks);
    sum.wall_seconds = wall();

    if (opts.write_summary) {
        std::ofstream js(c.output_dir + "/summary.json");
        json extra = json::parse(summary_json_line(sum));
        extra["disabled_checks"] = c.disabled_checks;
        js << extra.dump() << "\n";
        sum.outputs.push_back("summary.json");
    }
    return sum;
}

RunSummary verify_directory(const std::string& dir) {
    if (!fs::is_directory(dir)) throw ConfigError("verify: '" + dir + "' is not a directory");
    const std::string summary_path = dir + "/summary.json";
    if (!fs::exists(summary_path))
        throw ConfigError("verify: missing " + summary_path);

    json meta;
    {
        std::ifstream js(summary_path);
        try {
            js >> meta;
        } catch (const std::exception& e) {
            throw ConfigError("verify: cannot parse " + summary_path + ": " + e.what());
        }
    }
    if (!meta.contains("schema") || meta["schema"] != 1)
        throw ConfigError("verify: unsupported summary schema in " + summary_path);

    const double gamma = meta.at("gamma").get<double>();
    GeometrySpec geom = parse_geometry(meta.at("geometry").get<std::string>());
    std::vector<std::string> disabled;
    if (meta.contains("disabled_checks"))
        disabled = meta["disabled_checks"].get<std::vector<std::string>>();

    // collect snapshot pairs
    std::vector<std::string> n_files, c_files;
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (name.rfind("n_", 0) == 0 && name.size() > 4 &&
            name.substr(name.size() - 4) == ".dat")
            n_files.push_back(e.path().string());
        if (name.rfind("c_", 0) == 0 && name.size() > 4 &&
            name.substr(name.size() - 4) == ".dat")
            c_files.push_back(e.path().string());
    }
    std::sort(n_files.begin(), n_files.end());
    std::sort(c_files.begin(), c_files.end());
    if (n_files.empty() || n_files.size() != c_files.size())
        throw ConfigError("verify: '" + dir + "' holds no usable snapshot pairs");

    RunSummary sum;
    sum.schema = 1;
    sum.scenario_id = meta.value("id", std::string("unknown"));
    sum.gamma = gamma;
    sum.geometry_spec = meta.at("geometry").get<std::string>();
    sum.output_dir = dir;

    CheckTracker tracker;
    tracker.gamma = gamma;

    std::ofstream vcsv(dir + "/verify_records.csv");
    write_record_csv_header(vcsv);
    sum.outputs.push_back("verify_records.csv");

    const bool is_radial = geom.kind == GeometrySpec::Kind::radial;
    double mass0 = 0.0;

    if (!is_radial) {
        Grid2D grid = std::get<Grid2D>(build_grid(geom));
        std::vector<double> times;
        std::vector<ScalarField> c_snaps;
        for (std::size_t k = 0; k < n_files.size(); ++k) {
            Snapshot ns = read_snapshot(n_files[k]);
            Snapshot cs = read_snapshot(c_files[k]);
            if (ns.radial || cs.radial || ns.nx != grid.nx || ns.ny != grid.ny)
                throw ConfigError("verify: snapshot '" + n_files[k] +
                                  "' does not match the stored geometry");
            if (k == 0) mass0 = mass(ns.values, grid);
            DiagnosticsRecord r =
                make_record_2d(ns.t, ns.values, cs.values, grid, gamma, 0, 0.0, mass0,
                               auto_record_delta(0.0, std::min(grid.Lx, grid.Ly)));
            tracker.observe_c(cs.values);
            tracker.observe_record(r);
            write_record_csv_row(vcsv, r);
            times.push_back(ns.t);
            c_snaps.push_back(std::move(cs.values));
            sum.final_t = ns.t;
        }
        // localized-smallness certificate at eps = 0.1 gamma
        DeltaCertificate cert = find_delta_for_epsilon(times, c_snaps, grid, 0.1 * gamma);
        std::ofstream cert_csv(dir + "/certificate.csv");
        write_csv_row(cert_csv, {"epsilon", "delta", "worst_qx", "worst_qy", "worst_t",
                                 "worst_value"});
        write_csv_row(cert_csv,
                      {format_g17(cert.epsilon), format_g17(cert.found ? cert.delta : 0.0),
                       format_g17(cert.worst_qx), format_g17(cert.worst_qy),
                       format_g17(cert.worst_t), format_g17(cert.worst_value)});
        sum.outputs.push_back("certificate.csv");
        if (!cert.found) {
            sum.status = RunStatus::bound_violation;
            sum.message = "no positive delta certifies localized smallness at eps = 0.1 gamma";
        }
    } else {
        RadialGrid grid = std::get<RadialGrid>(build_grid(geom));
        tracker.radial = true;
        tracker.R = grid.R;
        tracker.d = grid.d;

        std::ofstream bcsv(dir + "/verify_bounds.csv");
        write_csv_row(bcsv, {"t", "min_margin_Q", "min_c", "c_star", "max_cr_excess"});
        sum.outputs.push_back("verify_bounds.csv");

        RadialBounds bounds;
        for (std::size_t k = 0; k < n_files.size(); ++k) {
            Snapshot ns = read_snapshot(n_files[k]);
            Snapshot cs = read_snapshot(c_files[k]);
            if (!ns.radial || !cs.radial || ns.nr != grid.nr)
                throw ConfigError("verify: snapshot '" + n_files[k] +
                                  "' does not match the stored geometry");
            if (k == 0) {
                mass0 = mass(ns.values, grid);
                double linf = *std::max_element(ns.values.begin(), ns.values.end());
                bounds = compute_bounds(compute_M0(mass0, linf, grid.d, grid.R), gamma, grid.R,
                                        grid.d);
                tracker.M0 = bounds.M0;
                tracker.c_star = bounds.c_star;
                sum.M0 = bounds.M0;
                sum.c_star = bounds.c_star;
            }
            DiagnosticsRecord r =
                make_record_radial(ns.t, ns.values, cs.values, grid, gamma, 0, 0.0, mass0,
                                   auto_record_delta(0.0, grid.R), bounds);
            tracker.observe_c(cs.values);
            tracker.observe_record(r);
            write_record_csv_row(vcsv, r);
            write_csv_row(bcsv, {format_g17(r.t), format_g17(r.q_margin), format_g17(r.min_c),
                                 format_g17(bounds.c_star), format_g17(r.cr_excess)});
            sum.final_t = ns.t;
        }
    }

    sum.checks = tracker.build(disabled);
    if (sum.status == RunStatus::completed) {
        for (const auto& ch : sum.checks)
            if (ch.enabled && !ch.pass) {
                sum.status = RunStatus::bound_violation;
                sum.message = "recomputed check '" + ch.name + "' fails on the stored snapshots";
                break;
            }
    }
    return sum;
}

} // namespace chemsim
