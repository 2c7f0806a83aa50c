// Command-line front end: resonance table, physical-qubit mapping, operating
// point checks, integer parameter search, gate simulation and decay sweeps.

#include "sideband/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"sideband-resonance entangling gates for cavity-coupled driven qubits"};
    app.set_version_flag("--version", sideband::version_string);
    app.require_subcommand(1);

    // table
    auto* table = app.add_subcommand("table", "print the nine sideband resonance conditions");

    // map
    auto* map = app.add_subcommand("map", "map physical qubit parameters to the driven-qubit form");
    map->require_subcommand(1);
    sideband::DqdParams dqd;
    bool map_json = false;
    auto* map_dqd_cmd = map->add_subcommand("dqd", "one-electron double-dot spin qubit");
    map_dqd_cmd->add_option("--tunnel2t-ghz", dqd.tunnel_2t, "tunnel splitting 2t (GHz)")
        ->required();
    map_dqd_cmd->add_option("--bz-ghz", dqd.bz, "Zeeman splitting Bz (GHz)")->required();
    map_dqd_cmd->add_option("--bx-ghz", dqd.bx, "transverse gradient Bx (GHz)")->required();
    map_dqd_cmd->add_option("--gc-ghz", dqd.g_charge, "charge-cavity coupling g_c (GHz)")
        ->required();
    map_dqd_cmd->add_option("--drive-amp-ghz", dqd.drive_amp_F,
                            "detuning drive amplitude F (GHz)")->required();
    map_dqd_cmd->add_option("--drive-freq-ghz", dqd.drive_freq, "drive frequency (GHz)")
        ->required();
    map_dqd_cmd->add_option("--phase-rad", dqd.drive_phase, "drive phase (rad)");
    map_dqd_cmd->add_flag("--json", map_json, "emit JSON");

    sideband::RxParams rx;
    double rx_jl = 0, rx_jr = 0;
    bool rx_has_jl = false, rx_has_jr = false;
    auto* map_rx_cmd = map->add_subcommand("rx", "three-electron resonant-exchange qubit");
    map_rx_cmd->add_option("--tunnel-ghz", rx.tunnel_t, "tunneling t (GHz)")->required();
    map_rx_cmd->add_option("--delta-ghz", rx.delta_hubbard, "Hubbard gap Delta (GHz)")
        ->required();
    map_rx_cmd->add_option("--gc-ghz", rx.g_charge, "charge-cavity coupling g_c (GHz)")
        ->required();
    auto* jl_opt = map_rx_cmd->add_option("--jl-ghz", rx_jl, "left exchange Jl (GHz)");
    auto* jr_opt = map_rx_cmd->add_option("--jr-ghz", rx_jr, "right exchange Jr (GHz)");
    map_rx_cmd->add_flag("--json", map_json, "emit JSON");

    // check
    std::string check_config;
    bool check_json = false;
    auto* check = app.add_subcommand("check", "validate a config and report derived quantities");
    check->add_option("--config", check_config, "config file")->required();
    check->add_flag("--json", check_json, "emit JSON");

    // search
    sideband::SearchBounds bounds;
    std::string search_cond = "rc7";
    std::string search_out;
    double search_eta_ghz = 0.05, search_gmin_ghz = 0.002, search_gmax_ghz = 0.05;
    auto* search = app.add_subcommand("search", "enumerate integer operating points");
    search->add_option("--condition", search_cond, "rc7 or rc9")->required();
    search->add_option("--qmax", bounds.q_max, "max q");
    search->add_option("--pmax", bounds.p_max, "max |p|");
    search->add_option("--mmax", bounds.m_max, "max m");
    search->add_option("--eta-ghz", search_eta_ghz, "base frequency eta (GHz)");
    search->add_option("--gmin-ghz", search_gmin_ghz, "coupling window lower edge (GHz)");
    search->add_option("--gmax-ghz", search_gmax_ghz, "coupling window upper edge (GHz)");
    search->add_option("--max-gw", bounds.max_g_over_w, "validity cap on g/W");
    search->add_option("--out", search_out, "output CSV path (stdout when omitted)");

    // simulate
    std::string sim_config;
    sideband::SimulateOptions sim_opt;
    auto* simulate = app.add_subcommand("simulate", "propagate a gate and report fidelities");
    simulate->add_option("--config", sim_config, "config file")->required();
    simulate->add_flag("--exactify", sim_opt.exactify,
                       "rescale g2 to satisfy the coupling product constraint exactly");
    simulate->add_flag("--check-convergence", sim_opt.check_convergence,
                       "re-run at dt/2 and require |dF0| <= 1e-4");
    simulate->add_option("--sample-stride", sim_opt.sample_stride,
                         "record populations every N steps into the JSON output");
    simulate->add_option("--out", sim_opt.out_path, "output JSON path");

    // sweep
    std::string sweep_config, sweep_gamma, sweep_kappa, sweep_out;
    int sweep_threads = 0;
    auto* sweep = app.add_subcommand("sweep", "error 1-F over a (gamma, kappa) grid");
    sweep->add_option("--config", sweep_config, "config file")->required();
    sweep->add_option("--gamma", sweep_gamma, "gamma grid, kHz (min:max:logN or a value)")
        ->required();
    sweep->add_option("--kappa", sweep_kappa, "kappa grid, kHz (min:max:logN or a value)")
        ->required();
    sweep->add_option("--out", sweep_out, "output CSV path (stdout when omitted)");
    sweep->add_option("--threads", sweep_threads,
                      "worker threads (default: SIDEBAND_THREADS or hardware)");

    CLI11_PARSE(app, argc, argv);

    if (*table) return sideband::run_table(std::cout);
    if (*map_dqd_cmd) return sideband::run_map_dqd(dqd, map_json, std::cout, std::cerr);
    if (*map_rx_cmd) {
        rx_has_jl = jl_opt->count() > 0;
        rx_has_jr = jr_opt->count() > 0;
        if (rx_has_jl) rx.exchange_jl = rx_jl;
        if (rx_has_jr) rx.exchange_jr = rx_jr;
        return sideband::run_map_rx(rx, map_json, std::cout, std::cerr);
    }
    if (*check) return sideband::run_check(check_config, check_json, std::cout, std::cerr);
    if (*search) {
        try {
            bounds.condition = sideband::parse_condition_name(search_cond);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return sideband::exit_validation;
        }
        bounds.eta = sideband::ghz_to_rad_ns(search_eta_ghz);
        bounds.g_min = sideband::ghz_to_rad_ns(search_gmin_ghz);
        bounds.g_max = sideband::ghz_to_rad_ns(search_gmax_ghz);
        return sideband::run_search(bounds, search_out, std::cout, std::cerr);
    }
    if (*simulate) return sideband::run_simulate(sim_config, sim_opt, std::cout, std::cerr);
    if (*sweep)
        return sideband::run_sweep(sweep_config, sweep_gamma, sweep_kappa, sweep_out, std::cout,
                                   std::cerr, sweep_threads);
    return 0;
}
