#pragma once

// Integer operating-point search for the iSWAP (condition 7) and
// double-excitation (condition 9) gates: enumerate grids (p_j, q_j, w, m)
// satisfying the resonance equality, the interaction-selection constraints
// and the averaging-pole exclusions, then solve the simultaneous gate-time
// and shift-cancellation relations for the couplings (g1, g2).

#include "sideband/effective.hpp"
#include "sideband/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace sideband {

struct SearchBounds {
    int condition = 7;  // 7 or 9
    int q_max = 8;      // q_j in 1..q_max
    int p_max = 20;     // |p_j| <= p_max
    int m_max = 50;     // m in 1..m_max
    double eta = ghz_to_rad_ns(0.05);
    double g_min = ghz_to_rad_ns(0.002);
    double g_max = ghz_to_rad_ns(0.05);
    // Validity filter on g_j / W_j. Left loose enough to admit operating
    // points with gate validity comparable to the reference ones.
    double max_g_over_w = 0.2;
};

struct SearchCandidate {
    int q1 = 0, q2 = 0, p1 = 0, p2 = 0, w = 0, m = 0;
    double eta = 0;     // rad/ns
    double tau_m = 0;   // ns
    double g1 = 0;      // rad/ns
    double g2 = 0;
    double coupling = 0;  // J, rad/ns
    double chi1 = 0;      // rad/ns
    double chi2 = 0;
};

namespace detail {
inline bool pole_free(int p, int q) {
    return p != 0 && q != std::abs(p) && q != 2 * std::abs(p);
}
inline double chi_resonant(double g, int q, int p, double eta) {
    const double w_freq = q * eta;
    const double delta = p * eta;
    return -g * g * w_freq / (2.0 * (delta * delta - w_freq * w_freq));
}
}  // namespace detail

/// Enumerates valid integer grids inside the bounds and solves the coupling
/// constraints; results are sorted by gate time, then by (p1, p2, q1, q2).
/// May be empty.
inline std::vector<SearchCandidate> search_parameters(const SearchBounds& b) {
    if (b.condition != 7 && b.condition != 9)
        throw std::invalid_argument("search_parameters: condition must be 7 or 9");
    if (b.q_max < 1 || b.p_max < 1 || b.m_max < 1 || b.eta <= 0)
        throw std::invalid_argument("search_parameters: empty bounds");
    const bool cond7 = b.condition == 7;
    std::vector<SearchCandidate> out;
    for (int q1 = 1; q1 <= b.q_max; ++q1) {
        for (int q2 = 1; q2 <= b.q_max; ++q2) {
            // interaction-selection constraints, identical sets for 7 and 9
            if (cond7 && (q1 == q2 || q1 == 2 * q2 || 2 * q1 == q2)) continue;
            for (int p1 = -b.p_max; p1 <= b.p_max; ++p1) {
                if (!detail::pole_free(p1, q1)) continue;
                const int w = p1 - q1;
                if (w == 0) continue;
                if (cond7 ? w < 0 : w > 0) continue;  // coupling product must be positive
                const int p2 = cond7 ? w + q2 : w - q2;
                if (std::abs(p2) > b.p_max || !detail::pole_free(p2, q2)) continue;
                const double ratio = cond7
                                         ? (2.0 + double(w) / q2) / (2.0 + double(w) / q1)
                                         : (2.0 - double(w) / q2) / (2.0 + double(w) / q1);
                if (!(ratio > 0)) continue;
                for (int m = 1; m <= b.m_max; ++m) {
                    const double product = std::abs(double(w)) / m * b.eta * b.eta;
                    const double g1 = std::sqrt(product / std::sqrt(ratio));
                    const double g2 = std::sqrt(product * std::sqrt(ratio));
                    if (g1 < b.g_min || g1 > b.g_max || g2 < b.g_min || g2 > b.g_max) continue;
                    if (g1 / (q1 * b.eta) > b.max_g_over_w) continue;
                    if (g2 / (q2 * b.eta) > b.max_g_over_w) continue;
                    SearchCandidate c;
                    c.q1 = q1; c.q2 = q2; c.p1 = p1; c.p2 = p2; c.w = w; c.m = m;
                    c.eta = b.eta;
                    c.tau_m = m * two_pi / b.eta;
                    c.g1 = g1; c.g2 = g2;
                    c.coupling = g1 * g2 / (4.0 * w * b.eta);
                    c.chi1 = detail::chi_resonant(g1, q1, p1, b.eta);
                    c.chi2 = detail::chi_resonant(g2, q2, p2, b.eta);
                    out.push_back(c);
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const SearchCandidate& a, const SearchCandidate& z) {
        if (a.tau_m != z.tau_m) return a.tau_m < z.tau_m;
        if (a.p1 != z.p1) return a.p1 < z.p1;
        if (a.p2 != z.p2) return a.p2 < z.p2;
        if (a.q1 != z.q1) return a.q1 < z.q1;
        return a.q2 < z.q2;
    });
    return out;
}

/// Realizes a candidate as a full resonantly driven system around the given
/// cavity frequency.
inline SystemParams system_from_candidate(const SearchCandidate& c, double omega_c_ghz = 6.0,
                                          int n_max = 2) {
    SystemParams s;
    s.omega_c = ghz_to_rad_ns(omega_c_ghz);
    s.eta = c.eta;
    s.p = {c.p1, c.p2};
    s.q = {c.q1, c.q2};
    s.w = c.w;
    s.m = c.m;
    s.n_max = n_max;
    const double g[2] = {c.g1, c.g2};
    for (int j = 0; j < 2; ++j) {
        DrivenQubitParams qb;
        qb.omega_d = s.omega_c - s.p[j] * c.eta;
        qb.omega = qb.omega_d;  // resonant driving
        qb.Omega = 0.5 * s.q[j] * c.eta;
        qb.g = g[j];
        s.qubit[j] = qb;
    }
    return s;
}

}  // namespace sideband
