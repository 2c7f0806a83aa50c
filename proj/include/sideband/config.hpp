#pragma once

// Flat key = value run configuration (diff-friendly, one key per line,
// '#' comments). All frequency keys carry an explicit _ghz suffix, decay
// rates _khz, times _ns; unsuffixed frequency keys are rejected.

#include "sideband/dynamics.hpp"
#include "sideband/effective.hpp"
#include "sideband/params.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sideband {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    int condition = 7;
    double eta_ghz = 0;
    double omega_c_ghz = 0;
    std::array<double, 2> omega_ghz{};
    std::array<double, 2> omega_d_ghz{};
    std::array<double, 2> g_ghz{};
    std::array<double, 2> Omega_ghz{};
    std::array<double, 2> phase_rad{};
    std::array<int, 2> p{};
    std::array<int, 2> q{};
    int w = 0;
    int m = 1;
    int n_max = 2;
    double dt_ns = 0.01;
    bool exactify = false;
    std::array<double, 2> gamma_khz{};
    double kappa_khz = 0;
    std::string initial_state;
    std::string output_path;
    std::string output_format;

    bool operator==(const RunConfig&) const = default;

    /// System in internal angular units. With `exactify` set (conditions 7
    /// and 9), both couplings are replaced by the exact solution of the
    /// gate-time product and shift-cancellation ratio constraints, so that
    /// J tau_m = +-pi/2 exactly and the shift phases cancel; the configured
    /// (rounded) couplings approximate this point.
    SystemParams system() const {
        SystemParams s;
        s.omega_c = ghz_to_rad_ns(omega_c_ghz);
        s.eta = ghz_to_rad_ns(eta_ghz);
        s.p = p;
        s.q = q;
        s.w = w;
        s.m = m;
        s.n_max = n_max;
        for (int j = 0; j < 2; ++j)
            s.qubit[j] = driven_qubit_from_ghz(omega_ghz[j], omega_d_ghz[j], g_ghz[j],
                                               Omega_ghz[j], phase_rad[j]);
        if (exactify) {
            if (condition != 7 && condition != 9)
                throw ConfigError("exactify applies to conditions rc7 and rc9 only");
            const double sign = condition == 7 ? 1.0 : -1.0;
            const double product = sign * (double(w) / double(m)) * s.eta * s.eta;
            const double wq1 = double(w) / double(q[0]);
            const double wq2 = double(w) / double(q[1]);
            const double ratio =
                condition == 7 ? (2.0 + wq2) / (2.0 + wq1) : (2.0 - wq2) / (2.0 + wq1);
            if (!(product > 0) || !(ratio > 0))
                throw ConfigError(
                    "exactify: the constraint equations have no positive-coupling solution "
                    "for this grid");
            s.qubit[0].g = std::sqrt(product / std::sqrt(ratio));
            s.qubit[1].g = std::sqrt(product * std::sqrt(ratio));
        }
        return s;
    }

    DecayRates rates() const { return DecayRates::from_khz(gamma_khz[0], gamma_khz[1], kappa_khz); }
    StateLabel initial() const { return parse_state_label(initial_state); }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline double to_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError("key '" + key + "': '" + value + "' is not a number");
    return v;
}

inline int to_int(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError("key '" + key + "': '" + value + "' is not an integer");
    return static_cast<int>(v);
}

inline bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("key '" + key + "': '" + value + "' is not a boolean");
}

inline const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys = {
        "condition", "eta_ghz", "omega_c_ghz",
        "omega1_ghz", "omega_d1_ghz", "g1_ghz", "Omega1_ghz", "phase1_rad",
        "omega2_ghz", "omega_d2_ghz", "g2_ghz", "Omega2_ghz", "phase2_rad",
        "p1", "p2", "q1", "q2", "w", "m",
        "n_max", "dt_ns", "exactify",
        "gamma1_khz", "gamma2_khz", "kappa_khz",
        "initial_state", "output_path", "output_format"};
    return keys;
}

}  // namespace detail

inline int parse_condition_name(const std::string& value) {
    std::string v = value;
    if (v.size() >= 2 && (v[0] == 'r' || v[0] == 'R') && (v[1] == 'c' || v[1] == 'C'))
        v = v.substr(2);
    const int id = detail::to_int("condition", v);
    if (id < 1 || id > 9) throw ConfigError("condition must be rc1..rc9");
    return id;
}

inline void validate_config(const RunConfig& cfg) {
    if (cfg.eta_ghz <= 0) throw ConfigError("eta_ghz must be positive");
    if (cfg.dt_ns <= 0) throw ConfigError("dt_ns must be positive");
    if (cfg.n_max < 0) throw ConfigError("n_max must be >= 0");
    if (cfg.m < 1) throw ConfigError("m must be a positive integer");
    for (int j = 0; j < 2; ++j) {
        if (cfg.g_ghz[j] < 0) throw ConfigError("couplings g must be nonnegative");
        if (cfg.Omega_ghz[j] < 0) throw ConfigError("drive amplitudes Omega must be nonnegative");
    }
    if (!cfg.output_format.empty() && cfg.output_format != "csv" && cfg.output_format != "json")
        throw ConfigError("output_format must be 'csv' or 'json'");

    const SystemParams sys = cfg.system();
    for (const auto& e : well_definedness_errors(sys)) throw ConfigError(e);
    for (const auto& e : grid_errors(sys)) throw ConfigError(e);

    const auto& rc = resonance_condition(cfg.condition);
    if (!resonance_holds(sys, cfg.condition))
        throw ConfigError(std::string("resonance condition not satisfied on the grid: ") +
                          rc.condition + " requires p1 + (" + std::to_string(rc.side1) +
                          ")q1 = p2 + (" + std::to_string(rc.side2) + ")q2");
    if (!resonance_constraints_satisfied(sys, cfg.condition))
        throw ConfigError(std::string("interaction-selection constraints violated: ") +
                          rc.constraints);
    const int w_expected = cfg.p[0] + rc.side1 * cfg.q[0];
    if (cfg.w != w_expected)
        throw ConfigError("w = " + std::to_string(cfg.w) + " does not match p1 + (" +
                          std::to_string(rc.side1) + ")q1 = " + std::to_string(w_expected));

    const StateLabel label = parse_state_label(cfg.initial_state);
    if (label.n > cfg.n_max)
        throw ConfigError("initial_state photon number exceeds n_max");
}

inline RunConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
        if (kv.count(key))
            throw ConfigError("duplicate key '" + key + "'");
        kv[key] = value;
    }

    // reject unknown keys, pointing at the suffixed form when one exists
    for (const auto& [key, value] : kv) {
        (void)value;
        bool known = false;
        for (const auto& k : detail::known_config_keys())
            if (k == key) { known = true; break; }
        if (known) continue;
        for (const auto& k : detail::known_config_keys()) {
            const std::size_t us = k.rfind('_');
            if (us != std::string::npos && k.substr(0, us) == key)
                throw ConfigError("key '" + key + "' is missing its unit suffix; use '" + k + "'");
        }
        throw ConfigError("unknown key '" + key + "'");
    }

    auto take = [&kv](const std::string& key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    auto require = [&take](const std::string& key) -> const std::string& {
        const std::string* v = take(key);
        if (!v) throw ConfigError("missing required key '" + key + "'");
        return *v;
    };

    RunConfig cfg;
    cfg.condition = parse_condition_name(require("condition"));
    cfg.eta_ghz = detail::to_double("eta_ghz", require("eta_ghz"));
    cfg.omega_c_ghz = detail::to_double("omega_c_ghz", require("omega_c_ghz"));
    for (int j = 0; j < 2; ++j) {
        const std::string n = std::to_string(j + 1);
        cfg.omega_ghz[j] = detail::to_double("omega" + n + "_ghz", require("omega" + n + "_ghz"));
        cfg.omega_d_ghz[j] =
            detail::to_double("omega_d" + n + "_ghz", require("omega_d" + n + "_ghz"));
        cfg.g_ghz[j] = detail::to_double("g" + n + "_ghz", require("g" + n + "_ghz"));
        cfg.Omega_ghz[j] = detail::to_double("Omega" + n + "_ghz", require("Omega" + n + "_ghz"));
        if (const std::string* v = take("phase" + n + "_rad"))
            cfg.phase_rad[j] = detail::to_double("phase" + n + "_rad", *v);
        if (const std::string* v = take("gamma" + n + "_khz"))
            cfg.gamma_khz[j] = detail::to_double("gamma" + n + "_khz", *v);
    }
    cfg.p[0] = detail::to_int("p1", require("p1"));
    cfg.p[1] = detail::to_int("p2", require("p2"));
    cfg.q[0] = detail::to_int("q1", require("q1"));
    cfg.q[1] = detail::to_int("q2", require("q2"));
    cfg.w = detail::to_int("w", require("w"));
    cfg.m = detail::to_int("m", require("m"));
    if (const std::string* v = take("n_max")) cfg.n_max = detail::to_int("n_max", *v);
    if (const std::string* v = take("dt_ns")) cfg.dt_ns = detail::to_double("dt_ns", *v);
    if (const std::string* v = take("exactify")) cfg.exactify = detail::to_bool("exactify", *v);
    if (const std::string* v = take("kappa_khz")) cfg.kappa_khz = detail::to_double("kappa_khz", *v);
    if (const std::string* v = take("initial_state")) {
        cfg.initial_state = *v;
    } else {
        cfg.initial_state = (cfg.condition == 8 || cfg.condition == 9) ? "ee0" : "eg0";
    }
    if (const std::string* v = take("output_path")) cfg.output_path = *v;
    if (const std::string* v = take("output_format")) cfg.output_format = *v;

    validate_config(cfg);
    return cfg;
}

inline std::string format_number(double v, int significant = 12) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant, v);
    return buf;
}

inline std::string render_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "condition = rc" << cfg.condition << "\n";
    out << "eta_ghz = " << format_number(cfg.eta_ghz) << "\n";
    out << "omega_c_ghz = " << format_number(cfg.omega_c_ghz) << "\n";
    for (int j = 0; j < 2; ++j) {
        const std::string n = std::to_string(j + 1);
        out << "omega" << n << "_ghz = " << format_number(cfg.omega_ghz[j]) << "\n";
        out << "omega_d" << n << "_ghz = " << format_number(cfg.omega_d_ghz[j]) << "\n";
        out << "g" << n << "_ghz = " << format_number(cfg.g_ghz[j]) << "\n";
        out << "Omega" << n << "_ghz = " << format_number(cfg.Omega_ghz[j]) << "\n";
        out << "phase" << n << "_rad = " << format_number(cfg.phase_rad[j]) << "\n";
    }
    out << "p1 = " << cfg.p[0] << "\n";
    out << "p2 = " << cfg.p[1] << "\n";
    out << "q1 = " << cfg.q[0] << "\n";
    out << "q2 = " << cfg.q[1] << "\n";
    out << "w = " << cfg.w << "\n";
    out << "m = " << cfg.m << "\n";
    out << "n_max = " << cfg.n_max << "\n";
    out << "dt_ns = " << format_number(cfg.dt_ns) << "\n";
    out << "exactify = " << (cfg.exactify ? "true" : "false") << "\n";
    out << "gamma1_khz = " << format_number(cfg.gamma_khz[0]) << "\n";
    out << "gamma2_khz = " << format_number(cfg.gamma_khz[1]) << "\n";
    out << "kappa_khz = " << format_number(cfg.kappa_khz) << "\n";
    out << "initial_state = " << cfg.initial_state << "\n";
    if (!cfg.output_path.empty()) out << "output_path = " << cfg.output_path << "\n";
    if (!cfg.output_format.empty()) out << "output_format = " << cfg.output_format << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Derived quantities echoed by the validation report

struct DerivedQuantities {
    std::array<double, 2> delta_ghz{};
    std::array<double, 2> W_ghz{};
    std::array<double, 2> Delta_ghz{};
    std::array<double, 2> Delta_plus_ghz{};
    std::array<double, 2> Delta_minus_ghz{};
    std::array<double, 2> theta_rad{};
    std::array<double, 2> g_over_W{};
    double eta_ghz = 0;
    double tau_ns = 0;
    double tau_m_ns = 0;
    double delta_res_ghz = 0;  // resonant detuning w * eta
    double coupling_mhz = 0;   // J from the configured couplings
    double chi1_mhz = 0;
    double chi2_mhz = 0;
    // Couplings solving the gate-time product and shift-cancellation ratio
    // exactly (conditions 7 and 9); the rounded inputs approximate these.
    bool has_exact = false;
    double g1_exact_ghz = 0;
    double g2_exact_ghz = 0;
    double coupling_exact_mhz = 0;
    double chi1_exact_mhz = 0;
    double chi2_exact_mhz = 0;
};

inline DerivedQuantities derived_quantities(const RunConfig& cfg) {
    const SystemParams s = cfg.system();
    DerivedQuantities d;
    for (int j = 0; j < 2; ++j) {
        d.delta_ghz[j] = rad_ns_to_ghz(s.qubit[j].delta());
        d.W_ghz[j] = rad_ns_to_ghz(s.qubit[j].W());
        d.Delta_ghz[j] = rad_ns_to_ghz(s.Delta(j));
        d.Delta_plus_ghz[j] = rad_ns_to_ghz(s.Delta_side(j, +1));
        d.Delta_minus_ghz[j] = rad_ns_to_ghz(s.Delta_side(j, -1));
        d.theta_rad[j] = s.qubit[j].theta();
        d.g_over_W[j] = s.qubit[j].g / s.qubit[j].W();
    }
    d.eta_ghz = rad_ns_to_ghz(s.eta);
    d.tau_ns = s.tau();
    d.tau_m_ns = s.tau_m();
    d.delta_res_ghz = rad_ns_to_ghz(s.Delta_side(0, resonance_condition(cfg.condition).side1));
    d.coupling_mhz = rad_ns_to_mhz(build_vqq(s, cfg.condition).coupling);
    const ShiftCoefficients chi = dispersive_shifts(s);
    d.chi1_mhz = rad_ns_to_mhz(chi.chi1);
    d.chi2_mhz = rad_ns_to_mhz(chi.chi2);

    if (cfg.condition == 7 || cfg.condition == 9) {
        const double sign = cfg.condition == 7 ? 1.0 : -1.0;
        const double product = sign * (double(cfg.w) / double(cfg.m)) * cfg.eta_ghz * cfg.eta_ghz;
        const double wq1 = double(cfg.w) / double(cfg.q[0]);
        const double wq2 = double(cfg.w) / double(cfg.q[1]);
        const double ratio = cfg.condition == 7 ? (2.0 + wq2) / (2.0 + wq1)
                                                : (2.0 - wq2) / (2.0 + wq1);
        if (product > 0 && ratio > 0) {
            d.has_exact = true;
            d.g1_exact_ghz = std::sqrt(product / std::sqrt(ratio));
            d.g2_exact_ghz = std::sqrt(product * std::sqrt(ratio));
            d.coupling_exact_mhz =
                1e3 * d.g1_exact_ghz * d.g2_exact_ghz / (4.0 * cfg.w * cfg.eta_ghz);
            auto chi_resonant = [&](double g, int q, int p) {
                const double W = q * cfg.eta_ghz;
                const double D = p * cfg.eta_ghz;
                return -1e3 * g * g * W / (2.0 * (D * D - W * W));
            };
            d.chi1_exact_mhz = chi_resonant(d.g1_exact_ghz, cfg.q[0], cfg.p[0]);
            d.chi2_exact_mhz = chi_resonant(d.g2_exact_ghz, cfg.q[1], cfg.p[1]);
        }
    }
    return d;
}

// ---------------------------------------------------------------------------
// Sweep grid syntax: "min:max:logN" (N points per decade, endpoints
// included) or a single value.

inline std::vector<double> parse_grid(const std::string& spec) {
    const std::size_t c1 = spec.find(':');
    if (c1 == std::string::npos) return {detail::to_double("grid", detail::trim(spec))};
    const std::size_t c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw ConfigError("grid '" + spec + "': expected min:max:logN");
    const double lo = detail::to_double("grid min", detail::trim(spec.substr(0, c1)));
    const double hi = detail::to_double("grid max", detail::trim(spec.substr(c1 + 1, c2 - c1 - 1)));
    const std::string kind = detail::trim(spec.substr(c2 + 1));
    if (kind.rfind("log", 0) != 0)
        throw ConfigError("grid '" + spec + "': only logN spacing is supported");
    const int per_decade = detail::to_int("grid points per decade", kind.substr(3));
    if (per_decade < 1) throw ConfigError("grid: points per decade must be >= 1");
    if (lo <= 0 || hi <= lo) throw ConfigError("grid: need 0 < min < max for log spacing");
    const double decades = std::log10(hi / lo);
    const int steps = static_cast<int>(std::floor(per_decade * decades + 1e-9));
    std::vector<double> grid;
    for (int k = 0; k <= steps; ++k) {
        double v = lo * std::pow(10.0, double(k) / per_decade);
        if (std::abs(v - hi) <= 1e-9 * hi) v = hi;
        grid.push_back(v);
    }
    if (grid.back() < hi) grid.push_back(hi);
    return grid;
}

}  // namespace sideband
