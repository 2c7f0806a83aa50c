#include "sideband/config.hpp"

#include "sideband/cli.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

using namespace sideband;

namespace {

std::string reference_path(const char* name) {
    return std::string(SIDEBAND_CONFIG_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// minimal resonantly driven config on the integer grid
std::string config_text(int cond, std::array<int, 2> p, std::array<int, 2> q, int w, int m,
                        std::array<double, 2> g = {0.02, 0.02}, double eta = 0.05,
                        double omega_c = 6.0, const std::string& extra = "") {
    std::ostringstream out;
    out << "condition = rc" << cond << "\n";
    out << "eta_ghz = " << eta << "\nomega_c_ghz = " << omega_c << "\n";
    for (int j = 0; j < 2; ++j) {
        const double omega_d = omega_c - p[j] * eta;
        out << "omega" << j + 1 << "_ghz = " << omega_d << "\n";
        out << "omega_d" << j + 1 << "_ghz = " << omega_d << "\n";
        out << "g" << j + 1 << "_ghz = " << g[j] << "\n";
        out << "Omega" << j + 1 << "_ghz = " << 0.5 * q[j] * eta << "\n";
    }
    out << "p1 = " << p[0] << "\np2 = " << p[1] << "\n";
    out << "q1 = " << q[0] << "\nq2 = " << q[1] << "\n";
    out << "w = " << w << "\nm = " << m << "\n";
    out << extra;
    return out.str();
}

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = "tmp_" + name;
    std::ofstream out(path);
    out << content;
    out.close();
    return path;
}

}  // namespace

TEST_CASE("reference configs parse and echo the reference operating points") {
    SECTION("iSWAP point") {
        const RunConfig cfg = parse_config(slurp(reference_path("rc7.cfg")));
        CHECK(cfg.condition == 7);
        CHECK(cfg.m == 40);
        CHECK(cfg.initial_state == "eg0");
        const DerivedQuantities d = derived_quantities(cfg);
        CHECK(d.Delta_ghz[0] == Catch::Approx(1.0).margin(1e-9));
        CHECK(d.Delta_minus_ghz[0] == Catch::Approx(0.65).margin(1e-9));
        CHECK(d.coupling_mhz == Catch::Approx(0.31).margin(0.005));
        CHECK(d.coupling_exact_mhz == Catch::Approx(0.3125).margin(1e-9));
        CHECK(d.tau_m_ns == Catch::Approx(800.0));
    }
    SECTION("double-excitation point") {
        const RunConfig cfg = parse_config(slurp(reference_path("rc9.cfg")));
        CHECK(cfg.condition == 9);
        CHECK(cfg.w == -2);
        CHECK(cfg.initial_state == "ee0");
        const DerivedQuantities d = derived_quantities(cfg);
        CHECK(d.Delta_ghz[1] == Catch::Approx(-0.65).margin(1e-9));
        CHECK(d.tau_m_ns == Catch::Approx(200.0));
        CHECK(d.coupling_exact_mhz == Catch::Approx(-1.25).margin(1e-9));
        CHECK(d.chi1_exact_mhz == Catch::Approx(1.25).margin(1e-9));
        CHECK(d.chi2_exact_mhz == Catch::Approx(-1.25).margin(1e-9));
    }
}

TEST_CASE("config validation errors") {
    SECTION("unknown key") {
        const std::string text = config_text(7, {20, 17}, {7, 4}, 13, 40) + "bogus = 1\n";
        CHECK_THROWS_WITH(parse_config(text), Catch::Matchers::ContainsSubstring("unknown key"));
    }
    SECTION("frequency key without its unit suffix") {
        const std::string text = config_text(7, {20, 17}, {7, 4}, 13, 40) + "omega1 = 6\n";
        CHECK_THROWS_WITH(parse_config(text),
                          Catch::Matchers::ContainsSubstring("omega1_ghz"));
    }
    SECTION("missing required key") {
        CHECK_THROWS_WITH(parse_config("condition = rc7\n"),
                          Catch::Matchers::ContainsSubstring("missing required key"));
    }
    SECTION("duplicate key") {
        const std::string text = config_text(7, {20, 17}, {7, 4}, 13, 40) + "m = 40\n";
        CHECK_THROWS_WITH(parse_config(text), Catch::Matchers::ContainsSubstring("duplicate"));
    }
    SECTION("averaging pole W = |Delta| is named in the rejection") {
        // q1 = p1 = 4 puts the first qubit's dressed splitting on its detuning
        const std::string text = config_text(7, {4, 1}, {4, 1}, 0, 40);
        CHECK_THROWS_WITH(parse_config(text),
                          Catch::Matchers::ContainsSubstring("W != |Delta|"));
    }
    SECTION("resonance condition must hold on the grid") {
        const std::string text = config_text(7, {20, 17}, {7, 5}, 13, 40);
        CHECK_THROWS_WITH(parse_config(text),
                          Catch::Matchers::ContainsSubstring("resonance condition"));
    }
    SECTION("w must match the grid") {
        const std::string text = config_text(7, {20, 17}, {7, 4}, 12, 40);
        CHECK_THROWS_WITH(parse_config(text), Catch::Matchers::ContainsSubstring("w = 12"));
    }
    SECTION("initial state photon number respects the truncation") {
        const std::string text =
            config_text(7, {20, 17}, {7, 4}, 13, 40) + "initial_state = eg5\nn_max = 2\n";
        CHECK_THROWS_WITH(parse_config(text), Catch::Matchers::ContainsSubstring("n_max"));
    }
    SECTION("exactify outside conditions 7/9 is rejected") {
        const std::string text =
            config_text(1, {6, 6}, {2, 3}, 6, 4) + "exactify = true\n";
        CHECK_THROWS_WITH(parse_config(text), Catch::Matchers::ContainsSubstring("exactify"));
    }
}

TEST_CASE("config round trip") {
    const RunConfig cfg = parse_config(slurp(reference_path("rc7.cfg")));
    const std::string rendered = render_config(cfg);
    const RunConfig again = parse_config(rendered);
    CHECK(again == cfg);
    CHECK(render_config(again) == rendered);
}

TEST_CASE("default initial states follow the condition") {
    const std::string text = config_text(9, {10, -13}, {12, 11}, -2, 10);
    CHECK(parse_config(text).initial_state == "ee0");
    const std::string text7 = config_text(7, {20, 17}, {7, 4}, 13, 40);
    CHECK(parse_config(text7).initial_state == "eg0");
}

TEST_CASE("sweep grid syntax") {
    SECTION("four points per decade over three decades") {
        const auto grid = parse_grid("0.1:100:log4");
        REQUIRE(grid.size() == 13);
        CHECK(grid.front() == Catch::Approx(0.1));
        CHECK(grid[4] == Catch::Approx(1.0));
        CHECK(grid.back() == 100.0);
    }
    SECTION("single value") {
        const auto grid = parse_grid("2.5");
        REQUIRE(grid.size() == 1);
        CHECK(grid[0] == 2.5);
    }
    SECTION("non-decade-aligned endpoint is appended") {
        const auto grid = parse_grid("0.1:50:log4");
        CHECK(grid.back() == 50.0);
        CHECK(grid.size() == 12);
    }
    SECTION("bad specs") {
        CHECK_THROWS_AS(parse_grid("1:10"), ConfigError);
        CHECK_THROWS_AS(parse_grid("1:10:lin5"), ConfigError);
        CHECK_THROWS_AS(parse_grid("0:10:log4"), ConfigError);
    }
}

TEST_CASE("resonance table rendering") {
    std::ostringstream out;
    CHECK(run_table(out) == exit_ok);
    const std::string table = out.str();
    int rows = 0;
    for (char c : table)
        if (c == '\n') ++rows;
    CHECK(rows == 10);  // header + nine conditions
    CHECK(table.find("iSWAP") != std::string::npos);
    CHECK(table.find("controlled-phase") != std::string::npos);
    CHECK(table.find("double-excitation") != std::string::npos);
    CHECK(table.find("Delta1- = Delta2-") != std::string::npos);
    CHECK(table.find("-J (sp1 sm2 + sm1 sp2)") != std::string::npos);
    CHECK(table.find("-2J sz1 sz2") != std::string::npos);
}

TEST_CASE("check command") {
    std::ostringstream out, err;
    SECTION("valid reference config") {
        CHECK(run_check(reference_path("rc7.cfg"), false, out, err) == exit_ok);
        CHECK(out.str().find("rc7: holds") != std::string::npos);
        CHECK(out.str().find("J = 0.31") != std::string::npos);
    }
    SECTION("json form carries the metadata block") {
        CHECK(run_check(reference_path("rc9.cfg"), true, out, err) == exit_ok);
        CHECK(out.str().find("\"decay_rates\"") != std::string::npos);
        CHECK(out.str().find("\"constraint_exact\"") != std::string::npos);
    }
    SECTION("invalid config exits with the validation code") {
        const std::string path =
            write_temp("badcheck.cfg", config_text(7, {20, 17}, {7, 5}, 13, 40));
        CHECK(run_check(path, false, out, err) == exit_validation);
        CHECK_FALSE(err.str().empty());
        std::remove(path.c_str());
    }
}

TEST_CASE("simulate command") {
    // small m keeps the propagation short; the grid is the reference iSWAP one
    const std::string base = config_text(7, {20, 17}, {7, 4}, 13, 2, {0.02, 0.02});
    SECTION("writes a JSON outcome with the unit metadata") {
        const std::string cfg = write_temp("sim.cfg", base);
        const std::string out_path = "tmp_sim_out.json";
        std::ostringstream out, err;
        SimulateOptions opt;
        opt.out_path = out_path;
        CHECK(run_simulate(cfg, opt, out, err) == exit_ok);
        const std::string json = slurp(out_path);
        CHECK(json.find("\"f0\"") != std::string::npos);
        CHECK(json.find("no 2*pi factor") != std::string::npos);
        CHECK(json.find("\"final_state\"") != std::string::npos);
        std::remove(cfg.c_str());
        std::remove(out_path.c_str());
    }
    SECTION("coarse steps fail the convergence gate with exit code 3") {
        const std::string cfg = write_temp("sim_coarse.cfg", base + "dt_ns = 2.0\n");
        std::ostringstream out, err;
        SimulateOptions opt;
        opt.check_convergence = true;
        CHECK(run_simulate(cfg, opt, out, err) == exit_convergence);
        std::remove(cfg.c_str());
    }
    SECTION("conditions without a nominal gate are a validation error") {
        const std::string cfg =
            write_temp("sim_rc1.cfg", config_text(1, {6, 6}, {2, 3}, 6, 2));
        std::ostringstream out, err;
        CHECK(run_simulate(cfg, SimulateOptions{}, out, err) == exit_validation);
        std::remove(cfg.c_str());
    }
}

TEST_CASE("sweep command emits deterministic CSV") {
    const std::string cfg =
        write_temp("sweep.cfg", config_text(9, {10, -13}, {12, 11}, -2, 1, {0.021, 0.023}));
    std::ostringstream out1, out2, err;
    REQUIRE(run_sweep(cfg, "5:50:log1", "10", "", out1, err) == exit_ok);
    REQUIRE(run_sweep(cfg, "5:50:log1", "10", "", out2, err) == exit_ok);
    CHECK(out1.str() == out2.str());
    const std::string csv = out1.str();
    CHECK(csv.find("gamma_khz,kappa_khz,error\n") != std::string::npos);
    CHECK(csv.find("# sideband") != std::string::npos);
    // header comment + column header + one row per grid point
    CHECK(std::count(csv.begin(), csv.end(), '\n') >= 5);
    std::remove(cfg.c_str());
}

TEST_CASE("search command round-trips through CSV") {
    SearchBounds b;
    b.condition = 7;
    b.q_max = 8;
    b.p_max = 20;
    b.m_max = 40;
    std::ostringstream out, err;
    CHECK(run_search(b, "", out, err) == exit_ok);
    const std::string csv = out.str();
    CHECK(csv.find("condition,q1,q2,p1,p2,w,m,") != std::string::npos);
    CHECK(csv.find("7,7,4,20,17,13,40,") != std::string::npos);  // the reference tuple
}

TEST_CASE("map commands") {
    std::ostringstream out, err;
    SECTION("double dot") {
        DqdParams p;
        p.tunnel_2t = 9.0;
        p.bz = 7.0;
        p.bx = 1.2;
        p.g_charge = 0.05;
        p.drive_amp_F = 0.8;
        p.drive_freq = 1.0;
        CHECK(run_map_dqd(p, false, out, err) == exit_ok);
        CHECK(out.str().find("spin qubit mapping") != std::string::npos);
        CHECK(run_map_dqd(DqdParams{}, false, out, err) == exit_validation);
    }
    SECTION("resonant exchange") {
        RxParams p;
        p.tunnel_t = 1.0;
        p.delta_hubbard = 10.0;
        p.g_charge = 0.05;
        CHECK(run_map_rx(p, true, out, err) == exit_ok);
        CHECK(out.str().find("\"xi\"") != std::string::npos);
    }
}

TEST_CASE("installed binary answers end to end") {
    const std::string cli = SIDEBAND_CLI_PATH;
    REQUIRE(std::system((cli + " --version > tmp_version.txt").c_str()) == 0);
    CHECK(slurp("tmp_version.txt").find("sideband") != std::string::npos);
    REQUIRE(std::system((cli + " table > tmp_table.txt").c_str()) == 0);
    CHECK(slurp("tmp_table.txt").find("iSWAP") != std::string::npos);
    const std::string check_cmd =
        cli + " check --config " + reference_path("rc7.cfg") + " > tmp_check.txt";
    REQUIRE(std::system(check_cmd.c_str()) == 0);
    CHECK(slurp("tmp_check.txt").find("rc7: holds") != std::string::npos);
    std::remove("tmp_version.txt");
    std::remove("tmp_table.txt");
    std::remove("tmp_check.txt");
}
