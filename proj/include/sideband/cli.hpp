#pragma once

// Command drivers behind the `sideband` CLI. Each returns a process exit
// code: 0 success, 2 validation failure, 3 numerical-convergence failure.

#include "sideband/config.hpp"
#include "sideband/dynamics.hpp"
#include "sideband/effective.hpp"
#include "sideband/qubit_map.hpp"
#include "sideband/search.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace sideband {

inline constexpr const char* version_string = "sideband 1.0.0";

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_convergence = 3;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

// ---------------------------------------------------------------------------
// Unit-convention metadata, embedded in every emitted file

inline nlohmann::json metadata_json() {
    return {
        {"version", version_string},
        {"units",
         {{"frequencies", "GHz, quoted as omega/2pi"},
          {"internal", "angular, rad/ns"},
          {"decay_rates",
           "kHz, applied directly as rates in 1/time (1 kHz = 1e-6/ns); no 2*pi factor"},
          {"time", "ns"}}},
    };
}

inline std::string metadata_csv_comment() {
    std::string s;
    s += std::string("# ") + version_string + "\n";
    s += "# units: frequencies GHz (omega/2pi); decay rates kHz applied directly as 1/time "
         "rates (no 2*pi factor); times ns\n";
    return s;
}

// ---------------------------------------------------------------------------
// table

inline int run_table(std::ostream& out) {
    out << "R  condition            constraints                interaction"
           "                  gate\n";
    for (const auto& rc : resonance_table()) {
        std::ostringstream row;
        row << rc.id << "  " << std::left << std::setw(19) << rc.condition << "  "
            << std::setw(25) << rc.constraints << "  " << std::setw(27) << rc.interaction << "  "
            << rc.gate_name;
        out << row.str() << "\n";
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// map

inline int run_map_dqd(const DqdParams& p, bool as_json, std::ostream& out, std::ostream& err) {
    try {
        const DqdMapping m = map_dqd(p);
        const double omega_ghz = rad_ns_to_ghz(m.params.omega);
        const double g_ghz = rad_ns_to_ghz(m.params.g);
        const double Omega_ghz = rad_ns_to_ghz(m.params.Omega);
        if (as_json) {
            nlohmann::json j = metadata_json();
            j["mapping"] = {{"kind", m.charge_qubit ? "dqd-charge" : "dqd-spin"},
                            {"omega_ghz", omega_ghz},
                            {"omega_d_ghz", rad_ns_to_ghz(m.params.omega_d)},
                            {"g_ghz", g_ghz},
                            {"Omega_ghz", Omega_ghz},
                            {"phase_rad", m.params.phase}};
            j["spectrum"] = {{"W_ghz", m.spectrum.W_cal},   {"V_ghz", m.spectrum.V_cal},
                             {"phi_b_rad", m.spectrum.phi_b}, {"d01", m.spectrum.d01},
                             {"d02", m.spectrum.d02},        {"reduction_ratio",
                                                              m.spectrum.reduction_ratio}};
            j["warnings"] = m.warnings;
            out << j.dump(2) << "\n";
        } else {
            out << (m.charge_qubit ? "charge qubit mapping\n" : "spin qubit mapping\n");
            out << "  omega_ghz   = " << format_number(omega_ghz) << "\n";
            out << "  omega_d_ghz = " << format_number(rad_ns_to_ghz(m.params.omega_d)) << "\n";
            out << "  g_ghz       = " << format_number(g_ghz) << "\n";
            out << "  Omega_ghz   = " << format_number(Omega_ghz) << "\n";
            out << "  phase_rad   = " << format_number(m.params.phase) << "\n";
            if (!m.charge_qubit) {
                out << "  spectrum: W = " << format_number(m.spectrum.W_cal)
                    << " GHz, V = " << format_number(m.spectrum.V_cal)
                    << " GHz, phi_b = " << format_number(m.spectrum.phi_b) << " rad\n";
                out << "  levels (analytic): " << format_number(m.spectrum.omega0) << " "
                    << format_number(m.spectrum.omega1) << " " << format_number(m.spectrum.omega2)
                    << " " << format_number(m.spectrum.omega3) << " GHz\n";
                out << "  levels (numeric):  " << format_number(m.spectrum.numeric_levels[0])
                    << " " << format_number(m.spectrum.numeric_levels[1]) << " "
                    << format_number(m.spectrum.numeric_levels[2]) << " "
                    << format_number(m.spectrum.numeric_levels[3]) << " GHz\n";
                out << "  two-level reduction ratio (W - V)/(2V) = "
                    << format_number(m.spectrum.reduction_ratio) << "\n";
            }
            for (const auto& w : m.warnings) out << "  warning: " << w << "\n";
        }
        return exit_ok;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    }
}

inline int run_map_rx(const RxParams& p, bool as_json, std::ostream& out, std::ostream& err) {
    try {
        const RxMapping m = map_rx(p);
        const double g_ghz = rad_ns_to_ghz(m.params.g);
        const double omega_ghz = rad_ns_to_ghz(m.params.omega);
        if (as_json) {
            nlohmann::json j = metadata_json();
            j["mapping"] = {{"kind", "rx"},
                            {"xi", m.xi},
                            {"g_ghz", g_ghz},
                            {"omega_ghz", omega_ghz}};
            j["warnings"] = m.warnings;
            out << j.dump(2) << "\n";
        } else {
            out << "resonant-exchange qubit mapping\n";
            out << "  xi        = " << format_number(m.xi) << "\n";
            out << "  g_ghz     = " << format_number(g_ghz) << "\n";
            if (omega_ghz != 0) out << "  omega_ghz = " << format_number(omega_ghz) << "\n";
            for (const auto& w : m.warnings) out << "  warning: " << w << "\n";
        }
        return exit_ok;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    }
}

// ---------------------------------------------------------------------------
// check

inline nlohmann::json derived_json(const RunConfig& cfg) {
    const DerivedQuantities d = derived_quantities(cfg);
    nlohmann::json j;
    for (int q = 0; q < 2; ++q) {
        nlohmann::json qj = {{"delta_ghz", d.delta_ghz[q]},
                             {"W_ghz", d.W_ghz[q]},
                             {"Delta_ghz", d.Delta_ghz[q]},
                             {"Delta_plus_ghz", d.Delta_plus_ghz[q]},
                             {"Delta_minus_ghz", d.Delta_minus_ghz[q]},
                             {"theta_rad", d.theta_rad[q]},
                             {"g_over_W", d.g_over_W[q]}};
        j["qubit" + std::to_string(q + 1)] = qj;
    }
    j["eta_ghz"] = d.eta_ghz;
    j["tau_ns"] = d.tau_ns;
    j["tau_m_ns"] = d.tau_m_ns;
    j["delta_res_ghz"] = d.delta_res_ghz;
    j["J_mhz"] = d.coupling_mhz;
    j["chi1_mhz"] = d.chi1_mhz;
    j["chi2_mhz"] = d.chi2_mhz;
    if (d.has_exact) {
        j["constraint_exact"] = {{"g1_ghz", d.g1_exact_ghz},
                                 {"g2_ghz", d.g2_exact_ghz},
                                 {"J_mhz", d.coupling_exact_mhz},
                                 {"chi1_mhz", d.chi1_exact_mhz},
                                 {"chi2_mhz", d.chi2_exact_mhz}};
    }
    return j;
}

inline std::string report_text(const RunConfig& cfg) {
    const DerivedQuantities d = derived_quantities(cfg);
    const SystemParams sys = cfg.system();
    std::ostringstream out;
    out << "condition rc" << cfg.condition << " ("
        << resonance_condition(cfg.condition).condition << ")\n";
    out << "derived quantities (GHz unless noted):\n";
    auto pair_row = [&](const char* name, const std::array<double, 2>& v) {
        out << "  " << std::left << std::setw(16) << name << format_number(v[0]) << "  "
            << format_number(v[1]) << "\n";
    };
    pair_row("delta", d.delta_ghz);
    pair_row("W", d.W_ghz);
    pair_row("Delta", d.Delta_ghz);
    pair_row("Delta+", d.Delta_plus_ghz);
    pair_row("Delta-", d.Delta_minus_ghz);
    pair_row("g/W", d.g_over_W);
    out << "  eta = " << format_number(d.eta_ghz) << ", tau = " << format_number(d.tau_ns)
        << " ns, tau_m = " << format_number(d.tau_m_ns) << " ns\n";
    out << "  resonant detuning = " << format_number(d.delta_res_ghz) << " GHz\n";
    out << "  J = " << format_number(d.coupling_mhz) << " MHz, chi1 = "
        << format_number(d.chi1_mhz) << " MHz, chi2 = " << format_number(d.chi2_mhz) << " MHz\n";
    if (d.has_exact) {
        out << "constraint-exact couplings:\n";
        out << "  g1 = " << format_number(d.g1_exact_ghz) << " GHz, g2 = "
            << format_number(d.g2_exact_ghz) << " GHz\n";
        out << "  J = " << format_number(d.coupling_exact_mhz) << " MHz, chi1 = "
            << format_number(d.chi1_exact_mhz) << " MHz, chi2 = "
            << format_number(d.chi2_exact_mhz) << " MHz\n";
    }

    out << "resonance classification:\n";
    for (const auto& c : classify_resonance(sys)) {
        out << "  rc" << c.id << ": " << (c.holds ? "holds" : "off") << ", constraints "
            << (c.constraints_ok ? "ok" : "violated") << "\n";
    }
    const ConstraintReport cr = check_constraints(sys, cfg.condition);
    if (!cr.checks.empty()) {
        out << "operating-point constraints (1% relative tolerance):\n";
        for (const auto& c : cr.checks) {
            out << "  " << std::left << std::setw(40) << c.name << " lhs = "
                << format_number(c.lhs) << ", rhs = " << format_number(c.rhs)
                << ", residual = " << format_number(c.residual);
            if (c.enforced)
                out << (c.pass ? "  [pass]" : "  [FAIL]");
            else
                out << "  [info]";
            out << "\n";
        }
    }
    for (const auto& w : validity_warnings(sys)) out << "warning: " << w << "\n";
    return out.str();
}

inline int run_check(const std::string& config_path, bool as_json, std::ostream& out,
                     std::ostream& err) {
    try {
        const RunConfig cfg = parse_config(read_file(config_path));
        if (as_json) {
            nlohmann::json j = metadata_json();
            j["derived"] = derived_json(cfg);
            const SystemParams sys = cfg.system();
            j["classification"] = nlohmann::json::array();
            for (const auto& c : classify_resonance(sys))
                j["classification"].push_back(
                    {{"id", c.id}, {"holds", c.holds}, {"constraints_ok", c.constraints_ok}});
            j["constraints"] = nlohmann::json::array();
            for (const auto& c : check_constraints(sys, cfg.condition).checks)
                j["constraints"].push_back({{"name", c.name},
                                            {"lhs", c.lhs},
                                            {"rhs", c.rhs},
                                            {"residual", c.residual},
                                            {"rel_residual", c.rel_residual},
                                            {"enforced", c.enforced},
                                            {"pass", c.pass}});
            j["warnings"] = validity_warnings(sys);
            out << j.dump(2) << "\n";
        } else {
            out << report_text(cfg);
        }
        return exit_ok;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    }
}

// ---------------------------------------------------------------------------
// search

inline std::string search_csv(const std::vector<SearchCandidate>& candidates, int condition) {
    std::string csv = metadata_csv_comment();
    csv += "# condition = rc" + std::to_string(condition) + "\n";
    csv += "condition,q1,q2,p1,p2,w,m,eta_ghz,tau_m_ns,g1_ghz,g2_ghz,J_mhz,chi1_mhz,chi2_mhz,"
           "g1_over_W1,g2_over_W2\n";
    for (const auto& c : candidates) {
        csv += std::to_string(condition) + "," + std::to_string(c.q1) + "," +
               std::to_string(c.q2) + "," + std::to_string(c.p1) + "," + std::to_string(c.p2) +
               "," + std::to_string(c.w) + "," + std::to_string(c.m) + "," +
               format_number(rad_ns_to_ghz(c.eta)) + "," + format_number(c.tau_m) + "," +
               format_number(rad_ns_to_ghz(c.g1)) + "," + format_number(rad_ns_to_ghz(c.g2)) +
               "," + format_number(rad_ns_to_mhz(c.coupling)) + "," +
               format_number(rad_ns_to_mhz(c.chi1)) + "," + format_number(rad_ns_to_mhz(c.chi2)) +
               "," + format_number(c.g1 / (c.q1 * c.eta)) + "," +
               format_number(c.g2 / (c.q2 * c.eta)) + "\n";
    }
    return csv;
}

inline int run_search(const SearchBounds& bounds, const std::string& out_path, std::ostream& out,
                      std::ostream& err) {
    try {
        const auto candidates = search_parameters(bounds);
        const std::string csv = search_csv(candidates, bounds.condition);
        if (out_path.empty()) {
            out << csv;
        } else {
            write_file(out_path, csv);
            out << "wrote " << candidates.size() << " candidates to " << out_path << "\n";
        }
        return exit_ok;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    }
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
    bool exactify = false;
    bool check_convergence = false;
    long sample_stride = 0;  // record populations every N steps (0 = off)
    std::string out_path;    // overrides the config's output_path
};

inline nlohmann::json density_matrix_json(const CMatrix& rho) {
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
        nlohmann::json row_re = nlohmann::json::array();
        nlohmann::json row_im = nlohmann::json::array();
        for (Eigen::Index j = 0; j < rho.cols(); ++j) {
            row_re.push_back(rho(i, j).real());
            row_im.push_back(rho(i, j).imag());
        }
        re.push_back(row_re);
        im.push_back(row_im);
    }
    return {{"dim", rho.rows()}, {"re", re}, {"im", im}};
}

inline int run_simulate(const std::string& config_path, const SimulateOptions& opt,
                        std::ostream& out, std::ostream& err) {
    try {
        RunConfig cfg = parse_config(read_file(config_path));
        if (opt.exactify) cfg.exactify = true;
        const SystemParams sys = cfg.system();
        if (cfg.condition < 6 || cfg.condition > 9)
            throw ConfigError("simulate: no nominal entangling gate for condition rc" +
                              std::to_string(cfg.condition) +
                              "; only the iSWAP (6, 7) and double-excitation (8, 9) families "
                              "are simulated");
        const StateLabel label = cfg.initial();
        const double dt = cfg.dt_ns;

        const DecayRates rates = cfg.rates();
        std::vector<std::pair<double, std::vector<double>>> samples;
        const bool sample_unitary = opt.sample_stride > 0 && !rates.any();

        const CVector psi0 = basis_ket(label.l1, label.l2, label.n, sys.n_max);
        SchrodingerObserver unitary_observer;
        if (sample_unitary)
            unitary_observer = [&samples](double t, const CVector& psi) {
                std::vector<double> p(psi.size());
                for (Eigen::Index i = 0; i < psi.size(); ++i) p[i] = std::norm(psi(i));
                samples.push_back({t, std::move(p)});
            };
        const CVector psi_ref = propagate_schrodinger(psi0, sys, sys.tau_m(), dt,
                                                      unitary_observer, opt.sample_stride);
        const CVector target = ideal_target_state(sys, cfg.condition, label);
        const double f0 = std::norm(target.dot(psi_ref));

        if (opt.check_convergence) {
            const CVector psi_half = propagate_schrodinger(psi0, sys, sys.tau_m(), 0.5 * dt);
            const double f0_half = std::norm(target.dot(psi_half));
            if (std::abs(f0 - f0_half) > 1e-4)
                throw ConvergenceError("step-halving check failed: |F0(dt) - F0(dt/2)| = " +
                                       std::to_string(std::abs(f0 - f0_half)) + " > 1e-4");
        }

        DensityMatrix final_state = pure_state(psi_ref, sys.tau_m());
        double fidelity = 1.0;
        if (rates.any()) {
            LindbladObserver decay_observer;
            if (opt.sample_stride > 0)
                decay_observer = [&samples](double t, const CMatrix& rho) {
                    samples.push_back({t, populations(rho)});
                };
            final_state = propagate_lindblad(pure_state(psi0), sys, rates, sys.tau_m(), dt,
                                             decay_observer, opt.sample_stride);
            fidelity = fidelity_trace(pure_state(psi_ref, sys.tau_m()), final_state);
        }

        nlohmann::json j = metadata_json();
        j["condition"] = "rc" + std::to_string(cfg.condition);
        j["initial_state"] = cfg.initial_state;
        j["tau_m_ns"] = sys.tau_m();
        j["dt_ns"] = dt;
        j["n_max"] = sys.n_max;
        j["exactify"] = cfg.exactify;
        j["gamma1_khz"] = cfg.gamma_khz[0];
        j["gamma2_khz"] = cfg.gamma_khz[1];
        j["kappa_khz"] = cfg.kappa_khz;
        j["f0"] = f0;
        j["fidelity"] = fidelity;
        j["derived"] = derived_json(cfg);
        j["warnings"] = validity_warnings(sys);
        j["final_state"] = density_matrix_json(final_state.rho);
        j["final_populations"] = populations(final_state.rho);
        j["final_photon_number"] = photon_number(final_state.rho, sys.n_max);
        if (opt.sample_stride > 0) {
            nlohmann::json series = nlohmann::json::array();
            for (const auto& [t, p] : samples)
                series.push_back({{"t_ns", t}, {"populations", p}});
            j["samples"] = series;
        }

        const std::string path = !opt.out_path.empty() ? opt.out_path : cfg.output_path;
        if (!path.empty()) write_file(path, j.dump(2) + "\n");
        out << "f0 = " << format_number(f0) << "\n";
        out << "fidelity = " << format_number(fidelity) << "\n";
        if (!path.empty()) out << "wrote " << path << "\n";
        return exit_ok;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << "\n";
        return exit_convergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    }
}

// ---------------------------------------------------------------------------
// sweep

inline std::string sweep_csv(const RunConfig& cfg, const std::vector<SweepRow>& rows) {
    std::string csv = metadata_csv_comment();
    csv += "# condition = rc" + std::to_string(cfg.condition) +
           ", initial_state = " + cfg.initial_state + ", tau_m_ns = " +
           format_number(cfg.system().tau_m()) + ", dt_ns = " + format_number(cfg.dt_ns) +
           ", n_max = " + std::to_string(cfg.n_max) + "\n";
    csv += "gamma_khz,kappa_khz,error\n";
    for (const auto& r : rows)
        csv += format_number(r.gamma_khz) + "," + format_number(r.kappa_khz) + "," +
               format_number(r.error) + "\n";
    return csv;
}

inline int run_sweep(const std::string& config_path, const std::string& gamma_spec,
                     const std::string& kappa_spec, const std::string& out_path,
                     std::ostream& out, std::ostream& err, int threads = 0) {
    try {
        const RunConfig cfg = parse_config(read_file(config_path));
        const SystemParams sys = cfg.system();
        const std::vector<double> gammas = parse_grid(gamma_spec);
        const std::vector<double> kappas = parse_grid(kappa_spec);
        const auto rows = sweep_decay(sys, gammas, kappas, cfg.initial(), cfg.dt_ns, threads);
        const std::string csv = sweep_csv(cfg, rows);
        const std::string path = !out_path.empty() ? out_path : cfg.output_path;
        if (path.empty()) {
            out << csv;
        } else {
            write_file(path, csv);
            out << "wrote " << rows.size() << " rows to " << path << "\n";
        }
        return exit_ok;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << "\n";
        return exit_convergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    }
}

}  // namespace sideband
