#pragma once

#include "chemsim/diagnostics.hpp"
#include "chemsim/grid.hpp"
#include "chemsim/scenario.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace chemsim {

enum class RunStatus { completed, blowup, elliptic_failure, bound_violation };

std::string to_string(RunStatus s);

struct CheckOutcome {
    std::string name;
    bool enabled = true;
    bool pass = true;
    double margin = 0.0;
};

struct RunSummary {
    int schema = 1;
    std::string scenario_id;
    RunStatus status = RunStatus::completed;
    double wall_seconds = 0.0;
    double final_t = 0.0;
    std::string message; // failure detail, empty when completed
    std::vector<CheckOutcome> checks;
    std::vector<std::string> outputs;
    // metadata verify needs to recompute every check
    std::string geometry_spec, sensitivity, initial_density;
    double gamma = 0.0;
    double blowup_threshold = 0.0;
    double M0 = 0.0, c_star = 0.0; // radial bound constants (0 on 2D runs)
    std::string output_dir;
};

/// completed + all enabled checks pass -> 0; any failed check, blow-up or
/// bound violation -> 1; solver failure -> 3. (Configuration errors throw
/// before a summary exists and map to 2 at the CLI.)
int exit_code_for(const RunSummary& summary);

std::string summary_json_line(const RunSummary& summary);
void print_human_summary(std::ostream& os, const RunSummary& summary);

struct RunOptions {
    std::optional<std::string> output_dir;
    std::optional<int> cadence_steps;
    std::vector<std::string> disabled_checks;
    bool write_snapshots = true;
    bool write_summary = true;
};

/// In-process observation hooks; the acceptance suite uses them to check
/// invariants at full step resolution without file round-trips.
struct RunCallbacks {
    std::function<void(double t, const ScalarField& n, const ScalarField& c)> on_step;
    std::function<void(const DiagnosticsRecord&, const ScalarField& n, const ScalarField& c)>
        on_record;
};

RunSummary run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {},
                        const RunCallbacks* callbacks = nullptr);

/// Recompute every bound check from the snapshots stored in a run output
/// directory (independent of the simulation path), emit certificate CSVs,
/// and return a summary with the same exit-code semantics as a run.
RunSummary verify_directory(const std::string& dir);

} // namespace chemsim
