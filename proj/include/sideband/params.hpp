#pragma once

// Canonical driven-qubit and system parameters. All frequencies stored here
// are angular (rad/ns); conversion from GHz happens once at the API boundary
// (see units.hpp and from_ghz below).

#include "sideband/units.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace sideband {

/// One parametrically driven qubit: transition frequency omega, drive
/// frequency omega_d, cavity coupling g, half drive amplitude Omega (the
/// drive term is 2*Omega*cos(omega_d t + phase)).
struct DrivenQubitParams {
    double omega = 0;
    double omega_d = 0;
    double g = 0;
    double Omega = 0;
    double phase = 0;

    // qubit-drive detuning
    double delta() const { return omega - omega_d; }
    // dressed qubit splitting W = sqrt(delta^2 + 4 Omega^2)
    double W() const { return std::hypot(delta(), 2.0 * Omega); }
    // mixing angle, theta in (0, pi); theta = pi/2 exactly at delta = 0
    double theta() const { return std::atan2(2.0 * Omega, delta()); }

    bool operator==(const DrivenQubitParams&) const = default;
};

inline DrivenQubitParams driven_qubit_from_ghz(double omega_ghz, double omega_d_ghz,
                                               double g_ghz, double Omega_ghz,
                                               double phase_rad = 0.0) {
    return {ghz_to_rad_ns(omega_ghz), ghz_to_rad_ns(omega_d_ghz), ghz_to_rad_ns(g_ghz),
            ghz_to_rad_ns(Omega_ghz), phase_rad};
}

/// Two driven qubits, the cavity, and the integer operating grid
/// Delta_j = p_j * eta, W_j = q_j * eta with eta = 2*pi/tau.
struct SystemParams {
    std::array<DrivenQubitParams, 2> qubit{};
    double omega_c = 0;  // cavity frequency, rad/ns
    double eta = 0;      // base frequency, rad/ns
    std::array<int, 2> p{0, 0};
    std::array<int, 2> q{0, 0};
    int w = 0;
    int m = 1;
    int n_max = 2;

    // cavity-drive detuning for qubit j (0-based index)
    double Delta(int j) const { return omega_c - qubit[j].omega_d; }
    double Delta_side(int j, int side) const { return Delta(j) + side * qubit[j].W(); }

    double tau() const { return two_pi / eta; }
    double tau_m() const { return m * tau(); }

    bool operator==(const SystemParams&) const = default;
};

/// Hard preconditions for the period-averaged effective theory: nonzero
/// detunings and distance from the lines where the averaging integrals have
/// poles (W = |Delta|, W = 2|Delta|). Returns human-readable violations.
inline std::vector<std::string> well_definedness_errors(const SystemParams& s) {
    std::vector<std::string> errors;
    if (s.eta <= 0) errors.push_back("eta must be positive");
    if (s.m <= 0) errors.push_back("m must be a positive integer");
    if (s.n_max < 0) errors.push_back("n_max must be >= 0");
    for (int j = 0; j < 2; ++j) {
        const std::string qj = "qubit " + std::to_string(j + 1);
        const double W = s.qubit[j].W();
        const double D = s.Delta(j);
        if (W <= 0) errors.push_back(qj + ": W must be positive (vanishing dressed gap)");
        if (s.p[j] == 0 || D == 0) errors.push_back(qj + ": Delta != 0 required (p != 0)");
        if (std::abs(s.q[j]) == std::abs(s.p[j]))
            errors.push_back(qj + ": W != |Delta| required (q != |p|)");
        if (std::abs(s.q[j]) == 2 * std::abs(s.p[j]))
            errors.push_back(qj + ": W != 2|Delta| required (q != 2|p|)");
    }
    return errors;
}

/// Integer-grid consistency: Delta_j/eta and W_j/eta must sit on the integers
/// p_j, q_j to within 1e-9 (absolute, in grid units).
inline std::vector<std::string> grid_errors(const SystemParams& s, double tol = 1e-9) {
    std::vector<std::string> errors;
    for (int j = 0; j < 2; ++j) {
        const std::string qj = "qubit " + std::to_string(j + 1);
        const double dp = s.Delta(j) / s.eta - s.p[j];
        const double dq = s.qubit[j].W() / s.eta - s.q[j];
        if (std::abs(dp) > tol)
            errors.push_back(qj + ": Delta/eta = " + std::to_string(s.p[j] + dp) +
                             " is not the integer p = " + std::to_string(s.p[j]));
        if (std::abs(dq) > tol)
            errors.push_back(qj + ": W/eta = " + std::to_string(s.q[j] + dq) +
                             " is not the integer q = " + std::to_string(s.q[j]));
    }
    return errors;
}

/// Soft validity checks (perturbative and rotating-wave regimes). These warn
/// rather than fail.
inline std::vector<std::string> validity_warnings(const SystemParams& s) {
    std::vector<std::string> warnings;
    for (int j = 0; j < 2; ++j) {
        const std::string qj = "qubit " + std::to_string(j + 1);
        const double gw = s.qubit[j].g / s.qubit[j].W();
        if (gw > 0.1)
            warnings.push_back(qj + ": g/W = " + std::to_string(gw) +
                               " exceeds 0.1; second-order truncation degrades");
        const double rwa = std::abs(s.Delta(j)) / (s.omega_c + s.qubit[j].omega_d);
        if (rwa > 0.1)
            warnings.push_back(qj + ": |Delta|/(omega_c + omega_d) = " + std::to_string(rwa) +
                               " exceeds 0.1; rotating-wave approximation degrades");
        if (s.qubit[j].phase != 0)
            warnings.push_back(qj + ": nonzero drive phase is supported only by the "
                               "time-domain propagators, not the analytic operations");
    }
    return warnings;
}

/// Dressed-basis product state |l1 l2, n> with l = 'e' or 'g'.
struct StateLabel {
    int l1 = 0;  // 0 = e, 1 = g
    int l2 = 0;
    int n = 0;

    bool operator==(const StateLabel&) const = default;
};

inline StateLabel parse_state_label(const std::string& text) {
    auto level = [](char c) -> int {
        if (c == 'e') return 0;
        if (c == 'g') return 1;
        throw std::invalid_argument("state label: qubit levels must be 'e' or 'g'");
    };
    if (text.size() < 3)
        throw std::invalid_argument("state label must look like 'eg0' (two levels + photon number)");
    StateLabel s;
    s.l1 = level(text[0]);
    s.l2 = level(text[1]);
    char* end = nullptr;
    s.n = static_cast<int>(std::strtol(text.c_str() + 2, &end, 10));
    if (end == text.c_str() + 2 || *end != '\0' || s.n < 0)
        throw std::invalid_argument("state label: bad photon number in '" + text + "'");
    return s;
}

inline std::string format_state_label(const StateLabel& s) {
    std::string text;
    text += (s.l1 == 0 ? 'e' : 'g');
    text += (s.l2 == 0 ? 'e' : 'g');
    text += std::to_string(s.n);
    return text;
}

}  // namespace sideband
