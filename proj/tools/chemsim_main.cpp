#include "chemsim/errors.hpp"
#include "chemsim/io.hpp"
#include "chemsim/radial.hpp"
#include "chemsim/run.hpp"
#include "chemsim/scenario.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

namespace {

using namespace chemsim;

int do_run(const std::string& scenario_path, const std::string& out_override,
           int cadence_override, const std::vector<std::string>& no_checks,
           const std::string& sweep_spec) {
    auto entries = read_scenario_entries(scenario_path);
    RunOptions opts;
    if (!out_override.empty()) opts.output_dir = out_override;
    if (cadence_override > 0) opts.cadence_steps = cadence_override;
    opts.disabled_checks = no_checks;

    auto id_hint = [&] {
        auto slash = scenario_path.find_last_of("/\\");
        std::string base =
            slash == std::string::npos ? scenario_path : scenario_path.substr(slash + 1);
        auto dot = base.find_last_of('.');
        return dot == std::string::npos ? base : base.substr(0, dot);
    }();

    if (sweep_spec.empty()) {
        RunSummary sum = run_scenario(parse_scenario(entries, id_hint), opts);
        print_human_summary(std::cout, sum);
        std::cout << summary_json_line(sum) << "\n";
        return exit_code_for(sum);
    }

    // --sweep key=v1,v2,...: one run per value on a small worker pool
    auto eq = sweep_spec.find('=');
    if (eq == std::string::npos)
        throw ConfigError("--sweep expects key=v1,v2,...");
    const std::string key = sweep_spec.substr(0, eq);
    std::vector<std::string> values;
    {
        std::stringstream ss(sweep_spec.substr(eq + 1));
        std::string tok;
        while (std::getline(ss, tok, ',')) values.push_back(tok);
    }
    if (values.empty()) throw ConfigError("--sweep has no values");

    std::vector<ScenarioConfig> members;
    for (const auto& v : values) {
        auto e = entries;
        bool replaced = false;
        for (auto& kv : e)
            if (kv.first == key) {
                kv.second = v;
                replaced = true;
            }
        if (!replaced) e.emplace_back(key, v);
        ScenarioConfig cfg = parse_scenario(e, id_hint + "_" + key + "_" + v);
        std::string base = out_override.empty() ? cfg.output_dir : out_override;
        cfg.output_dir = base + "/" + key + "_" + v;
        members.push_back(std::move(cfg));
    }

    std::vector<RunSummary> results(members.size());
    std::vector<std::string> errors(members.size());
    std::mutex next_mtx;
    std::size_t next = 0;
    auto worker = [&] {
        for (;;) {
            std::size_t k;
            {
                std::lock_guard<std::mutex> lock(next_mtx);
                if (next >= members.size()) return;
                k = next++;
            }
            RunOptions mopts;
            mopts.disabled_checks = no_checks;
            if (cadence_override > 0) mopts.cadence_steps = cadence_override;
            try {
                results[k] = run_scenario(members[k], mopts);
            } catch (const std::exception& e) {
                errors[k] = e.what();
            }
        }
    };
    const unsigned pool =
        std::min<std::size_t>(members.size(), std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> threads;
    for (unsigned i = 0; i < pool; ++i) threads.emplace_back(worker);
    for (auto& th : threads) th.join();

    int rc = 0;
    for (std::size_t k = 0; k < members.size(); ++k) {
        if (!errors[k].empty()) {
            std::cerr << "sweep member " << members[k].id << ": " << errors[k] << "\n";
            rc = std::max(rc, 2);
            continue;
        }
        print_human_summary(std::cout, results[k]);
        std::cout << summary_json_line(results[k]) << "\n";
        rc = std::max(rc, exit_code_for(results[k]));
    }
    return rc;
}

int do_verify(const std::string& dir) {
    RunSummary sum = verify_directory(dir);
    print_human_summary(std::cout, sum);
    std::cout << summary_json_line(sum) << "\n";
    return exit_code_for(sum);
}

int do_bounds(int d, double R, double gamma, double l1, double linf) {
    const double M0 = compute_M0(l1, linf, d, R);
    RadialBounds b = compute_bounds(M0, gamma, R, d);
    std::cout << "M0      = " << format_g17(b.M0) << "\n";
    std::cout << "m0      = " << format_g17(b.m0) << "\n";
    std::cout << "c_star  = " << format_g17(b.c_star) << "\n";
    std::cout << "gamma M0 R / sigma_d = " << format_g17(gamma * b.M0 * R / b.sigma_d)
              << "  (c_r envelope at r = R)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chemsim: mass-conservative chemotaxis-consumption simulator and bound checker"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir, sweep;
    int cadence = 0;
    std::vector<std::string> no_checks;
    auto* run_cmd = app.add_subcommand("run", "run a scenario file");
    run_cmd->add_option("scenario", scenario_path, "scenario file")->required();
    run_cmd->add_option("--out", out_dir, "output directory override");
    run_cmd->add_option("--cadence", cadence, "record every N steps");
    run_cmd->add_option("--sweep", sweep, "key=v1,v2,... parameter sweep");
    run_cmd->add_option("--no-check", no_checks, "disable a named check");

    std::string verify_dir;
    auto* verify_cmd = app.add_subcommand("verify", "recompute bound checks from stored snapshots");
    verify_cmd->add_option("dir", verify_dir, "run output directory")->required();

    int d = 2;
    double R = 1.0, gamma = 1.0, l1 = 0.0, linf = 0.0;
    auto* bounds_cmd = app.add_subcommand("bounds", "evaluate the radial bound constants");
    bounds_cmd->add_option("--d", d, "dimension")->required();
    bounds_cmd->add_option("--R", R, "ball radius")->required();
    bounds_cmd->add_option("--gamma", gamma, "boundary datum")->required();
    bounds_cmd->add_option("--l1", l1, "||n0||_L1")->required();
    bounds_cmd->add_option("--linf", linf, "||n0||_Linf")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed()) return do_run(scenario_path, out_dir, cadence, no_checks, sweep);
        if (verify_cmd->parsed()) return do_verify(verify_dir);
        if (bounds_cmd->parsed()) return do_bounds(d, R, gamma, l1, linf);
    } catch (const chemsim::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const chemsim::EllipticError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
