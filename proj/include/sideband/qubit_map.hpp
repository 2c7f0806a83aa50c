#pragma once

// Maps physical spin-qubit realizations onto the canonical driven-qubit
// parameters (omega, g, Omega): detuning-driven one-electron qubits in double
// quantum dots, and three-electron resonant-exchange qubits in triple dots.
// All inputs are plain frequencies in GHz; outputs are DrivenQubitParams in
// the library-internal angular units.

#include "sideband/params.hpp"
#include "sideband/units.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sideband {

// ---------------------------------------------------------------------------
// Double-quantum-dot spin qubit

/// Double-dot parameters at the zero-detuning sweet spot: tunnel splitting
/// 2t, Zeeman splitting Bz, transverse gradient Bx, charge-cavity coupling
/// g_c, detuning-drive amplitude F (the drive is 2F cos(w_d t + phase')) and
/// drive frequency. Energies as frequencies in GHz.
struct DqdParams {
    double tunnel_2t = 0;
    double bz = 0;
    double bx = 0;
    double g_charge = 0;
    double drive_amp_F = 0;
    double drive_freq = 0;
    double drive_phase = 0;  // rad
};

struct DqdSpectrum {
    double omega0 = 0, omega1 = 0, omega2 = 0, omega3 = 0;  // GHz
    double W_cal = 0;  // sqrt((2t+Bz)^2 + Bx^2)
    double V_cal = 0;  // sqrt((2t-Bz)^2 + Bx^2)
    double phi_a = 0;  // rad
    double phi_b = 0;  // rad, the spin-flip mixing angle
    double d01 = 0, d02 = 0, d13 = 0, d23 = 0;  // dipole matrix elements
    std::array<double, 4> numeric_levels{};     // brute-force eigenvalues, ascending
    double reduction_ratio = 0;                 // (W - V) / (2V)
};

/// The transformed 4x4 double-dot Hamiltonian in the charge-eigenstate x spin
/// product basis {+up, +down, -up, -down}.
inline Eigen::Matrix4d dqd_hamiltonian(const DqdParams& p) {
    Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
    h(0, 0) = 0.5 * (p.tunnel_2t + p.bz);
    h(1, 1) = 0.5 * (p.tunnel_2t - p.bz);
    h(2, 2) = 0.5 * (-p.tunnel_2t + p.bz);
    h(3, 3) = 0.5 * (-p.tunnel_2t - p.bz);
    h(0, 3) = h(3, 0) = -0.5 * p.bx;
    h(1, 2) = h(2, 1) = -0.5 * p.bx;
    return h;
}

inline DqdSpectrum dqd_spectrum(const DqdParams& p) {
    if (p.tunnel_2t <= 0) throw std::invalid_argument("dqd_spectrum: 2t must be positive");
    if (p.bx < 0) throw std::invalid_argument("dqd_spectrum: Bx must be nonnegative");
    DqdSpectrum s;
    s.W_cal = std::hypot(p.tunnel_2t + p.bz, p.bx);
    s.V_cal = std::hypot(p.tunnel_2t - p.bz, p.bx);
    if (s.V_cal == 0)
        throw std::domain_error("dqd_spectrum: degenerate spectrum (V = 0), "
                                "two-level reduction breaks down");
    s.omega0 = -0.5 * s.W_cal;
    s.omega3 = 0.5 * s.W_cal;
    s.omega1 = -0.5 * s.V_cal;
    s.omega2 = 0.5 * s.V_cal;
    s.phi_a = std::atan2(p.bx, p.tunnel_2t + p.bz);
    s.phi_b = std::atan2(p.bx, p.tunnel_2t - p.bz);
    const double sb = std::sin(0.5 * s.phi_b);
    const double cb = std::cos(0.5 * s.phi_b);
    s.d01 = sb;
    s.d23 = -sb;
    s.d02 = cb;
    s.d13 = cb;
    s.reduction_ratio = (s.W_cal - s.V_cal) / (2.0 * s.V_cal);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(dqd_hamiltonian(p));
    for (int i = 0; i < 4; ++i) s.numeric_levels[i] = es.eigenvalues()(i);
    return s;
}

struct DqdMapping {
    DrivenQubitParams params;  // angular units
    DqdSpectrum spectrum;
    bool charge_qubit = false;
    std::vector<std::string> warnings;
};

/// Reduces the double dot to the canonical driven two-level form. The
/// lowest doublet {|0>, |1>} defines the spin qubit with
/// omega = (W - V)/2, g = g_c |sin(phi_b/2)|, Omega = (F/2) |sin(phi_b/2)|;
/// the sign of sin(phi_b/2) is folded into the drive phase. Bz = Bx = 0
/// selects the bare charge qubit instead (omega = 2t, g = g_c, 2*Omega = F).
inline DqdMapping map_dqd(const DqdParams& p) {
    DqdMapping out;
    if (p.bz == 0 && p.bx == 0) {
        if (p.tunnel_2t <= 0) throw std::invalid_argument("map_dqd: 2t must be positive");
        out.charge_qubit = true;
        out.params = driven_qubit_from_ghz(p.tunnel_2t, p.drive_freq, p.g_charge,
                                           0.5 * p.drive_amp_F, p.drive_phase);
        out.spectrum.W_cal = out.spectrum.V_cal = p.tunnel_2t;
        return out;
    }
    out.spectrum = dqd_spectrum(p);
    if (p.tunnel_2t <= p.bz)
        out.warnings.push_back("2t <= Bz: the lowest doublet is not spin-like and the "
                               "two-level reduction is unreliable");
    if (out.spectrum.reduction_ratio > 0.1)
        out.warnings.push_back("(W - V)/(2V) = " + std::to_string(out.spectrum.reduction_ratio) +
                               " exceeds 0.1; two-level reduction degrades");
    const double sb = std::sin(0.5 * out.spectrum.phi_b);
    const double omega = 0.5 * (out.spectrum.W_cal - out.spectrum.V_cal);
    double phase = p.drive_phase;
    if (sb < 0) {
        phase += std::acos(-1.0);  // fold the sign of sin(phi_b/2)
        out.warnings.push_back("negative dipole sign folded into the drive phase (+pi); the "
                               "matching cavity-operator phase redefinition has no observable "
                               "effect");
    }
    out.params = driven_qubit_from_ghz(omega, p.drive_freq, p.g_charge * std::abs(sb),
                                       0.5 * p.drive_amp_F * std::abs(sb), phase);
    return out;
}

// ---------------------------------------------------------------------------
// Resonant-exchange qubit

/// Triple-dot resonant-exchange qubit with symmetric tunneling t and Hubbard
/// gap Delta (both GHz; this Delta is the charge gap, unrelated to the
/// cavity-drive detunings). Optional left/right exchange couplings evaluate
/// the qubit frequency away from the symmetric point.
struct RxParams {
    double tunnel_t = 0;
    double delta_hubbard = 0;
    double g_charge = 0;
    std::optional<double> exchange_jl;
    std::optional<double> exchange_jr;
};

/// omega = sqrt(J^2 + 3 j^2) with J = (Jl + Jr)/2, j = (Jl - Jr)/2 (GHz).
inline double rx_frequency(double jl_ghz, double jr_ghz) {
    const double J = 0.5 * (jl_ghz + jr_ghz);
    const double j = 0.5 * (jl_ghz - jr_ghz);
    return std::sqrt(J * J + 3.0 * j * j);
}

struct RxMapping {
    DrivenQubitParams params;  // coupling (and frequency when exchanges given)
    double xi = 0;             // charge admixture t / Delta
    std::vector<std::string> warnings;
};

/// Effective qubit-photon coupling at the symmetric operation point:
/// g = (sqrt(3)/2) xi^2 g_c with xi = t / Delta.
inline RxMapping map_rx(const RxParams& p) {
    if (p.delta_hubbard == 0)
        throw std::invalid_argument("map_rx: the Hubbard gap Delta must be nonzero");
    RxMapping out;
    out.xi = p.tunnel_t / p.delta_hubbard;
    if (out.xi < 0 || out.xi >= 1)
        throw std::domain_error("map_rx: charge admixture xi = t/Delta must lie in [0, 1)");
    if (out.xi > 0.3)
        out.warnings.push_back("xi = " + std::to_string(out.xi) +
                               " exceeds 0.3; perturbative charge elimination degrades");
    const double g = 0.5 * std::sqrt(3.0) * out.xi * out.xi * p.g_charge;
    double omega = 0;
    if (p.exchange_jl && p.exchange_jr) omega = rx_frequency(*p.exchange_jl, *p.exchange_jr);
    out.params = driven_qubit_from_ghz(omega, 0.0, g, 0.0, 0.0);
    return out;
}

}  // namespace sideband
