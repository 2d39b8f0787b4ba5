#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chemsim/errors.hpp"
#include "chemsim/io.hpp"
#include "chemsim/run.hpp"
#include "chemsim/scenario.hpp"

#include "support/oracles.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace chemsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::pair<std::string, std::string>> tiny_2d_entries() {
    return {{"geometry", "rect2d(1,1,8,8)"},
            {"gamma", "1.0"},
            {"sensitivity", "chi_c"},
            {"initial_density", "gaussian-bump(2,0.2,0.5,0.5)"},
            {"t_end", "0.02"},
            {"dt_control", "cfl(0.9)"},
            {"elliptic_tolerance", "1e-9"},
            {"output_cadence", "10 0.005"},
            {"blowup_threshold", "50"}};
}

} // namespace

TEST_CASE("snapshot round trip is exact and byte-deterministic") {
    std::mt19937_64 rng(201);
    Grid2D g = Grid2D::make(1.0, 2.0, 8, 12);
    auto v = oracles::random_field(rng, g.cells(), -3.0, 7.0);
    const std::string p1 = "/tmp/chemsim_snap_a.dat", p2 = "/tmp/chemsim_snap_b.dat";
    write_snapshot(p1, 0.3125, g, v);
    write_snapshot(p2, 0.3125, g, v);
    CHECK(slurp(p1) == slurp(p2));

    Snapshot s = read_snapshot(p1);
    CHECK(!s.radial);
    CHECK(s.nx == 8);
    CHECK(s.ny == 12);
    CHECK(s.t == 0.3125);
    REQUIRE(s.values.size() == v.size());
    for (std::size_t k = 0; k < v.size(); ++k) CHECK(s.values[k] == v[k]);

    RadialGrid gr = RadialGrid::make(3, 1.0, 16);
    auto vr = oracles::random_field(rng, gr.nr, 0.0, 1.0);
    write_snapshot(p1, 1e-7, gr, vr);
    Snapshot sr = read_snapshot(p1);
    CHECK(sr.radial);
    CHECK(sr.nr == 16);
    for (int k = 0; k < gr.nr; ++k) CHECK(sr.values[k] == vr[k]);
}

TEST_CASE("snapshot reader rejects damaged files") {
    const std::string p = "/tmp/chemsim_snap_bad.dat";
    {
        std::ofstream os(p);
        os << "nonsense\n";
    }
    CHECK_THROWS_AS(read_snapshot(p), ConfigError);
    {
        std::ofstream os(p);
        os << "t=0\nnx=4 ny=4\n1 2 3\n"; // short payload
    }
    CHECK_THROWS_AS(read_snapshot(p), ConfigError);
    CHECK_THROWS_AS(read_snapshot("/tmp/does_not_exist_xyz.dat"), ConfigError);
}

TEST_CASE("csv quoting") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("q\"q") == "\"q\"\"q\"");
    std::ostringstream os;
    write_csv_row(os, {"a", "b,c", "1.5"});
    CHECK(os.str() == "a,\"b,c\",1.5\r\n");
}

TEST_CASE("scenario parsing: happy path") {
    auto cfg = parse_scenario(tiny_2d_entries(), "tiny");
    CHECK(cfg.id == "tiny");
    CHECK(cfg.geometry.kind == GeometrySpec::Kind::rect2d);
    CHECK(cfg.geometry.nx == 8);
    CHECK(cfg.gamma == 1.0);
    CHECK(cfg.cadence_steps == 10);
    CHECK(cfg.cadence_time == 0.005);
    CHECK(cfg.dt_control.kind == DtControl::Kind::cfl);
    CHECK(cfg.dt_control.value == 0.9);
}

TEST_CASE("scenario parsing: every malformed input is named") {
    auto with = [&](const std::string& k, const std::string& v) {
        auto e = tiny_2d_entries();
        bool found = false;
        for (auto& kv : e)
            if (kv.first == k) {
                kv.second = v;
                found = true;
            }
        if (!found) e.emplace_back(k, v);
        return e;
    };
    CHECK_THROWS_WITH_AS(parse_scenario(with("t_endd", "1"), "x"),
                         doctest::Contains("t_endd"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(with("gamma", "-2"), "x"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(with("t_end", "0"), "x"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(with("elliptic_tolerance", "1e-3"), "x"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(with("dt_control", "cfl(1.5)"), "x"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(with("dt_control", "leapfrog(1)"), "x"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(with("gamma", "abc"), "x"), ConfigError);
    CHECK_THROWS_AS(parse_scenario(with("geometry", "hexmesh(1)"), "x"), ConfigError);
}

TEST_CASE("scenario file loading with comments") {
    const std::string path = "/tmp/chemsim_scn_test.scn";
    {
        std::ofstream os(path);
        os << "# a comment line\n";
        os << "geometry = rect2d(1,1,8,8)   # trailing comment\n";
        os << "\n";
        os << "gamma = 2.0\n";
        os << "t_end = 0.5\n";
        os << "blowup_threshold = 9\n";
    }
    auto cfg = load_scenario(path);
    CHECK(cfg.id == "chemsim_scn_test");
    CHECK(cfg.gamma == 2.0);
    CHECK_THROWS_AS(load_scenario("/tmp/missing_scenario.scn"), ConfigError);
}

TEST_CASE("initial density presets") {
    Grid2D g = Grid2D::make(1.0, 1.0, 64, 64);
    auto c1 = make_initial_density("constant(1)", g);
    CHECK(c1.l1 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(c1.linf == 1.0);

    RadialGrid gr = RadialGrid::make(2, 1.0, 64);
    auto cr = make_initial_density("constant(1)", gr);
    CHECK(cr.l1 == doctest::Approx(M_PI).epsilon(1e-3));

    auto gb = make_initial_density("gaussian-bump(5,0.1,0.5,0.5)", g);
    CHECK(gb.linf <= 5.0);
    for (double v : gb.values) CHECK(v >= 0.0);
    // quadrature mass of the gaussian: amp pi w^2 (tails negligible)
    CHECK(gb.l1 == doctest::Approx(5.0 * M_PI * 0.01).epsilon(1e-3));

    CHECK_THROWS_AS(make_initial_density("constant(-1)", g), ConfigError);
    CHECK_THROWS_AS(make_initial_density("gaussian-bump(nan,0.1)", g), ConfigError);
    CHECK_THROWS_AS(make_initial_density("mystery(1)", g), ConfigError);
    CHECK_NOTHROW(make_initial_density("two-bumps(1,0.1,0.3,0.3,2,0.1,0.7,0.7)", g));
    CHECK_NOTHROW(make_initial_density("annulus(4,0.6,0.1)", gr));
}

TEST_CASE("exit codes are a total function of status and check results") {
    for (int status = 0; status < 4; ++status) {
        for (int mask = 0; mask < 8; ++mask) {
            RunSummary s;
            s.status = static_cast<RunStatus>(status);
            for (int b = 0; b < 3; ++b) {
                CheckOutcome c;
                c.name = "check" + std::to_string(b);
                c.enabled = (mask >> b) & 1 ? true : (b != 1);
                c.pass = !((mask >> b) & 1);
                s.checks.push_back(c);
            }
            const int code = exit_code_for(s);
            if (s.status == RunStatus::elliptic_failure) {
                CHECK(code == 3);
            } else if (s.status != RunStatus::completed) {
                CHECK(code == 1);
            } else {
                bool any_enabled_fail = false;
                for (const auto& c : s.checks)
                    if (c.enabled && !c.pass) any_enabled_fail = true;
                CHECK(code == (any_enabled_fail ? 1 : 0));
            }
        }
    }
}

TEST_CASE("mini run end-to-end, then verify reproduces the margins") {
    auto cfg = parse_scenario(tiny_2d_entries(), "mini");
    cfg.output_dir = "/tmp/chemsim_mini_run";
    fs::remove_all(cfg.output_dir);
    RunSummary sum = run_scenario(cfg);
    CHECK(sum.status == RunStatus::completed);
    CHECK(sum.final_t == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(exit_code_for(sum) == 0);
    CHECK(fs::exists(cfg.output_dir + "/diagnostics.csv"));
    CHECK(fs::exists(cfg.output_dir + "/summary.json"));
    CHECK(fs::exists(cfg.output_dir + "/n_000000.dat"));

    RunSummary ver = verify_directory(cfg.output_dir);
    CHECK(exit_code_for(ver) == 0);

    // margins recomputed from snapshots match the in-run records bitwise:
    // compare the margin_grad column of both CSVs
    auto margins = [](const std::string& path) {
        std::ifstream in(path);
        std::string line;
        std::getline(in, line); // header
        std::vector<std::string> vals;
        while (std::getline(in, line)) {
            std::stringstream ss(line);
            std::string cell;
            int col = 0;
            while (std::getline(ss, cell, ',')) {
                if (col == 11) vals.push_back(cell); // margin_grad
                ++col;
            }
        }
        return vals;
    };
    auto run_margins = margins(cfg.output_dir + "/diagnostics.csv");
    auto ver_margins = margins(cfg.output_dir + "/verify_records.csv");
    REQUIRE(!run_margins.empty());
    REQUIRE(run_margins.size() == ver_margins.size());
    for (std::size_t k = 0; k < run_margins.size(); ++k)
        CHECK(run_margins[k] == ver_margins[k]);

    // certificate exists for 2D runs
    CHECK(fs::exists(cfg.output_dir + "/certificate.csv"));
}

TEST_CASE("verify flags tampered snapshots and rejects empty directories") {
    auto cfg = parse_scenario(tiny_2d_entries(), "tampered");
    cfg.output_dir = "/tmp/chemsim_tamper_run";
    fs::remove_all(cfg.output_dir);
    RunSummary sum = run_scenario(cfg);
    REQUIRE(sum.status == RunStatus::completed);

    // scale one n snapshot: mass constancy must break
    {
        Snapshot s = read_snapshot(cfg.output_dir + "/n_000001.dat");
        Grid2D g = Grid2D::make(1.0, 1.0, 8, 8);
        for (auto& v : s.values) v *= 1.5;
        write_snapshot(cfg.output_dir + "/n_000001.dat", s.t, g, s.values);
    }
    RunSummary ver = verify_directory(cfg.output_dir);
    CHECK(exit_code_for(ver) == 1);

    fs::remove_all("/tmp/chemsim_empty_dir");
    fs::create_directories("/tmp/chemsim_empty_dir");
    CHECK_THROWS_AS(verify_directory("/tmp/chemsim_empty_dir"), ConfigError);
    CHECK_THROWS_AS(verify_directory("/tmp/chemsim_no_such_dir"), ConfigError);
}

TEST_CASE("radial mini run emits bound-check rows") {
    std::vector<std::pair<std::string, std::string>> entries = {
        {"geometry", "radial(2,1,16)"},
        {"gamma", "1.0"},
        {"sensitivity", "radial:chi_c"},
        {"initial_density", "gaussian-bump(2,0.3)"},
        {"t_end", "0.01"},
        {"dt_control", "cfl(0.9)"},
        {"elliptic_tolerance", "1e-9"},
        {"output_cadence", "20 0.005"},
        {"blowup_threshold", "50"}};
    auto cfg = parse_scenario(entries, "mini_radial");
    cfg.output_dir = "/tmp/chemsim_mini_radial";
    fs::remove_all(cfg.output_dir);
    RunSummary sum = run_scenario(cfg);
    CHECK(sum.status == RunStatus::completed);
    CHECK(sum.M0 > 0.0);
    CHECK(sum.c_star > 0.0);
    CHECK(fs::exists(cfg.output_dir + "/bound_checks.csv"));
    CHECK(exit_code_for(sum) == 0);

    RunSummary ver = verify_directory(cfg.output_dir);
    CHECK(exit_code_for(ver) == 0);
    CHECK(ver.M0 == doctest::Approx(sum.M0).epsilon(1e-12));
}

TEST_CASE("summary json line is machine readable") {
    RunSummary s;
    s.scenario_id = "abc";
    s.status = RunStatus::completed;
    s.final_t = 1.25;
    s.gamma = 2.0;
    CheckOutcome c;
    c.name = "mass";
    c.margin = 3.5e-11;
    s.checks.push_back(c);
    const std::string line = summary_json_line(s);
    CHECK(line.find('\n') == std::string::npos);
    CHECK(line.find("\"schema\":1") != std::string::npos);
    CHECK(line.find("\"id\":\"abc\"") != std::string::npos);
    CHECK(line.find("\"mass\"") != std::string::npos);
}
