#include "chemsim/scenario.hpp"

#include "chemsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace chemsim {

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

void split_call(const std::string& spec, std::string& name, std::vector<double>& params,
                const char* what) {
    params.clear();
    auto open = spec.find('(');
    if (open == std::string::npos) {
        name = trim(spec);
        return;
    }
    if (spec.back() != ')')
        throw ConfigError(std::string(what) + ": unbalanced parentheses in '" + spec + "'");
    name = trim(spec.substr(0, open));
    std::string body = spec.substr(open + 1, spec.size() - open - 2);
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        try {
            std::size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            params.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError(std::string(what) + ": bad parameter '" + tok + "' in '" + spec + "'");
        }
        if (!std::isfinite(params.back()))
            throw ConfigError(std::string(what) + ": non-finite parameter in '" + spec + "'");
    }
}

double parse_double(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (trim(v.substr(used)).size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("scenario: bad numeric value '" + v + "' for key '" + key + "'");
    }
}

} // namespace

GeometrySpec parse_geometry(const std::string& spec) {
    std::string name;
    std::vector<double> p;
    split_call(spec, name, p, "geometry");
    GeometrySpec g;
    if (name == "rect2d") {
        if (p.size() != 4) throw ConfigError("geometry: rect2d needs (Lx,Ly,nx,ny)");
        g.kind = GeometrySpec::Kind::rect2d;
        g.Lx = p[0];
        g.Ly = p[1];
        g.nx = static_cast<int>(p[2]);
        g.ny = static_cast<int>(p[3]);
    } else if (name == "radial") {
        if (p.size() != 3) throw ConfigError("geometry: radial needs (d,R,nr)");
        g.kind = GeometrySpec::Kind::radial;
        g.d = static_cast<int>(p[0]);
        g.R = p[1];
        g.nr = static_cast<int>(p[2]);
    } else {
        throw ConfigError("geometry: unknown kind '" + name + "'");
    }
    return g;
}

BoundaryData ScenarioConfig::make_boundary() const {
    std::string name;
    std::vector<double> p;
    split_call(boundary_g, name, p, "boundary_g");
    BoundaryData bd;
    bd.gamma = gamma;
    if (name == "constant") {
        const double v = p.empty() ? 1.0 : p[0];
        if (!(v > 0.0)) throw ConfigError("boundary_g: g must be strictly positive");
        bd.g = [v](double, double) { return v; };
    } else if (name == "cosine") {
        // g = 1 + a cos(2 pi x / Lx)-style modulation along the boundary
        const double a = p.empty() ? 0.5 : p[0];
        if (!(std::abs(a) < 1.0)) throw ConfigError("boundary_g: cosine amplitude must be < 1");
        bd.g = [a](double x, double y) { return 1.0 + a * std::cos(2.0 * M_PI * (x + y)); };
    } else {
        throw ConfigError("boundary_g: unknown preset '" + name + "'");
    }
    return bd;
}

std::vector<std::pair<std::string, std::string>> read_scenario_entries(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("scenario: cannot open '" + path + "'");
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("scenario: line " + std::to_string(lineno) +
                              " is not 'key = value': '" + line + "'");
        entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return entries;
}

ScenarioConfig parse_scenario(const std::vector<std::pair<std::string, std::string>>& entries,
                              const std::string& id_hint) {
    ScenarioConfig cfg;
    cfg.id = id_hint;
    for (const auto& [key, value] : entries) {
        if (key == "id") {
            cfg.id = value;
        } else if (key == "geometry") {
            cfg.geometry = parse_geometry(value);
        } else if (key == "gamma") {
            cfg.gamma = parse_double(value, key);
        } else if (key == "boundary_g") {
            cfg.boundary_g = value;
        } else if (key == "sensitivity") {
            cfg.sensitivity = value;
        } else if (key == "initial_density") {
            cfg.initial_density = value;
        } else if (key == "t_end") {
            cfg.t_end = parse_double(value, key);
        } else if (key == "dt_control") {
            std::string name;
            std::vector<double> p;
            split_call(value, name, p, "dt_control");
            if (name == "cfl") {
                cfg.dt_control.kind = DtControl::Kind::cfl;
                cfg.dt_control.value = p.empty() ? 0.95 : p[0];
            } else if (name == "fixed") {
                if (p.size() != 1) throw ConfigError("dt_control: fixed needs (dt)");
                cfg.dt_control.kind = DtControl::Kind::fixed;
                cfg.dt_control.value = p[0];
            } else {
                throw ConfigError("dt_control: unknown kind '" + name + "'");
            }
        } else if (key == "elliptic_tolerance") {
            cfg.elliptic_tolerance = parse_double(value, key);
        } else if (key == "output_cadence") {
            std::stringstream ss(value);
            if (!(ss >> cfg.cadence_steps))
                throw ConfigError("output_cadence: expected '<steps> [<time>]'");
            if (!(ss >> cfg.cadence_time)) cfg.cadence_time = 0.01;
        } else if (key == "blowup_threshold") {
            cfg.blowup_threshold = parse_double(value, key);
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else if (key == "record_delta") {
            cfg.record_delta = parse_double(value, key);
        } else if (key == "no_check") {
            cfg.disabled_checks.push_back(value);
        } else {
            throw ConfigError("scenario: unknown key '" + key + "'");
        }
    }

    if (!(cfg.gamma > 0.0)) throw ConfigError("scenario: gamma must be positive");
    if (!(cfg.t_end > 0.0)) throw ConfigError("scenario: t_end must be positive");
    if (cfg.dt_control.kind == DtControl::Kind::cfl &&
        (!(cfg.dt_control.value > 0.0) || cfg.dt_control.value > 1.0))
        throw ConfigError("scenario: CFL safety factor must lie in (0,1]");
    if (cfg.dt_control.kind == DtControl::Kind::fixed && !(cfg.dt_control.value > 0.0))
        throw ConfigError("scenario: fixed dt must be positive");
    if (!(cfg.elliptic_tolerance > 0.0) || cfg.elliptic_tolerance > 1e-4)
        throw ConfigError("scenario: elliptic_tolerance must lie in (0, 1e-4]");
    if (cfg.cadence_steps < 1) throw ConfigError("scenario: output_cadence steps must be >= 1");
    if (!(cfg.cadence_time > 0.0)) throw ConfigError("scenario: output_cadence time must be > 0");
    if (!(cfg.blowup_threshold > 0.0))
        throw ConfigError("scenario: blowup_threshold must be positive");
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    auto slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = base.find_last_of('.');
    if (dot != std::string::npos) base = base.substr(0, dot);
    return parse_scenario(read_scenario_entries(path), base);
}

namespace {

struct DensityFn {
    std::string name;
    std::vector<double> p;

    double eval2d(double x, double y) const {
        if (name == "constant") return p.at(0);
        if (name == "gaussian-bump") {
            const double a = p.at(0), w = p.at(1);
            const double cx = p.size() > 2 ? p[2] : 0.5, cy = p.size() > 3 ? p[3] : 0.5;
            const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
            return a * std::exp(-r2 / (w * w));
        }
        if (name == "annulus") {
            const double a = p.at(0), r0 = p.at(1), w = p.at(2);
            const double cx = p.size() > 3 ? p[3] : 0.5, cy = p.size() > 4 ? p[4] : 0.5;
            const double r = std::hypot(x - cx, y - cy);
            return a * std::exp(-(r - r0) * (r - r0) / (w * w));
        }
        if (name == "two-bumps") {
            const double a1 = p.at(0), w1 = p.at(1), x1 = p.at(2), y1 = p.at(3);
            const double a2 = p.at(4), w2 = p.at(5), x2 = p.at(6), y2 = p.at(7);
            const double r1 = (x - x1) * (x - x1) + (y - y1) * (y - y1);
            const double r2 = (x - x2) * (x - x2) + (y - y2) * (y - y2);
            return a1 * std::exp(-r1 / (w1 * w1)) + a2 * std::exp(-r2 / (w2 * w2));
        }
        throw ConfigError("initial_density: unknown preset '" + name + "'");
    }

    double eval_radial(double r) const {
        if (name == "constant") return p.at(0);
        if (name == "gaussian-bump") {
            const double a = p.at(0), w = p.at(1), r0 = p.size() > 2 ? p[2] : 0.0;
            return a * std::exp(-(r - r0) * (r - r0) / (w * w));
        }
        if (name == "annulus") {
            const double a = p.at(0), r0 = p.at(1), w = p.at(2);
            return a * std::exp(-(r - r0) * (r - r0) / (w * w));
        }
        if (name == "two-bumps") {
            const double a1 = p.at(0), w1 = p.at(1), r1 = p.at(2);
            const double a2 = p.at(3), w2 = p.at(4), r2 = p.at(5);
            return a1 * std::exp(-(r - r1) * (r - r1) / (w1 * w1)) +
                   a2 * std::exp(-(r - r2) * (r - r2) / (w2 * w2));
        }
        throw ConfigError("initial_density: unknown preset '" + name + "'");
    }
};

DensityFn parse_density(const std::string& spec) {
    DensityFn f;
    split_call(spec, f.name, f.p, "initial_density");
    for (double v : f.p)
        if (!std::isfinite(v)) throw ConfigError("initial_density: non-finite parameter");
    if (!f.p.empty() && f.name != "two-bumps" && f.p[0] < 0.0)
        throw ConfigError("initial_density: amplitude must be >= 0");
    return f;
}

} // namespace

InitialDensity make_initial_density(const std::string& spec, const Grid2D& grid) {
    DensityFn f = parse_density(spec);
    InitialDensity out;
    out.values.resize(grid.cells());
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            out.values[grid.idx(i, j)] = f.eval2d(grid.xc(i), grid.yc(j));
    for (double v : out.values) {
        if (!(v >= 0.0)) throw ConfigError("initial_density: preset evaluates negative");
        out.linf = std::max(out.linf, v);
    }
    out.l1 = 0.0;
    for (double v : out.values) out.l1 += v * grid.cell_area();
    return out;
}

InitialDensity make_initial_density(const std::string& spec, const RadialGrid& grid) {
    DensityFn f = parse_density(spec);
    InitialDensity out;
    out.values.resize(grid.nr);
    for (int i = 0; i < grid.nr; ++i) out.values[i] = f.eval_radial(grid.rc(i));
    for (double v : out.values) {
        if (!(v >= 0.0)) throw ConfigError("initial_density: preset evaluates negative");
        out.linf = std::max(out.linf, v);
    }
    out.l1 = 0.0;
    for (int i = 0; i < grid.nr; ++i) out.l1 += out.values[i] * grid.weight[i];
    return out;
}

} // namespace chemsim
