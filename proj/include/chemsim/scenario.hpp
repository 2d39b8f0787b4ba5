#pragma once

#include "chemsim/boundary.hpp"
#include "chemsim/grid.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace chemsim {

struct DtControl {
    enum class Kind { cfl, fixed };
    Kind kind = Kind::cfl;
    double value = 0.95; // safety factor in (0,1] or the fixed dt
};

/// Complete declarative description of one simulation. Loaded from a flat
/// key = value scenario file (UTF-8, '#' comments); unknown keys are a
/// hard error so typos cannot silently change a run.
struct ScenarioConfig {
    std::string id;
    GeometrySpec geometry;
    double gamma = 1.0;
    std::string boundary_g = "constant(1)";
    std::string sensitivity = "identity";
    std::string initial_density = "constant(1)";
    double t_end = 1.0;
    DtControl dt_control;
    double elliptic_tolerance = 1e-8;
    int cadence_steps = 50;      // record every N steps ...
    double cadence_time = 0.01;  // ... or this much simulated time, whichever first
    double blowup_threshold = 1e4;
    std::string output_dir = "out";
    double record_delta = 0.0;   // delta of the localized record entries; 0 = auto
    std::vector<std::string> disabled_checks;

    BoundaryData make_boundary() const;
};

/// Parse from an ordered key/value list (the sweep machinery re-enters
/// here with overridden entries).
ScenarioConfig parse_scenario(const std::vector<std::pair<std::string, std::string>>& entries,
                              const std::string& id_hint);

ScenarioConfig load_scenario(const std::string& path);

/// Read the raw key = value entries of a scenario file.
std::vector<std::pair<std::string, std::string>> read_scenario_entries(const std::string& path);

GeometrySpec parse_geometry(const std::string& spec);

struct InitialDensity {
    ScalarField values;
    double l1 = 0.0;   // quadrature mass, kept for the bound constants
    double linf = 0.0;
};

/// Shipped presets: constant(v), gaussian-bump(amp,width[,cx,cy]),
/// annulus(amp,r0,width), two-bumps(a1,w1,x1,y1,a2,w2,x2,y2). The radial
/// variants read positions as radii. Rejects non-finite parameters and
/// presets that evaluate negative.
InitialDensity make_initial_density(const std::string& spec, const Grid2D& grid);
InitialDensity make_initial_density(const std::string& spec, const RadialGrid& grid);

} // namespace chemsim
