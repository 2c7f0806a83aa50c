#include "sideband/qubit_map.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

using namespace sideband;

TEST_CASE("double-dot spectrum") {
    SECTION("no transverse gradient, no mixing") {
        DqdParams p;
        p.tunnel_2t = 10.0;
        p.bz = 6.0;
        p.bx = 0.0;
        const DqdSpectrum s = dqd_spectrum(p);
        CHECK(s.phi_b == 0.0);
        CHECK(s.W_cal == Catch::Approx(16.0));
        CHECK(s.V_cal == Catch::Approx(4.0));
    }
    SECTION("degenerate charge-spin point maximizes the mixing angle") {
        DqdParams p;
        p.tunnel_2t = 8.0;
        p.bz = 8.0;
        p.bx = 1.5;
        const DqdSpectrum s = dqd_spectrum(p);
        CHECK(s.V_cal == Catch::Approx(1.5));
        CHECK(s.phi_b == Catch::Approx(std::acos(-1.0) / 2.0));
    }
    SECTION("analytic levels match the 4x4 eigensolver") {
        std::mt19937 rng(17);
        std::uniform_real_distribution<double> t2(2.0, 20.0);
        std::uniform_real_distribution<double> frac(0.0, 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            DqdParams p;
            p.tunnel_2t = t2(rng);
            p.bz = frac(rng) * p.tunnel_2t * 0.95;
            p.bx = frac(rng) * 3.0;
            const DqdSpectrum s = dqd_spectrum(p);
            const double analytic[4] = {-0.5 * s.W_cal, -0.5 * s.V_cal, 0.5 * s.V_cal,
                                        0.5 * s.W_cal};
            for (int i = 0; i < 4; ++i)
                CHECK(std::abs(s.numeric_levels[i] - analytic[i]) <=
                      1e-12 * std::max(1.0, std::abs(analytic[i])));
        }
    }
    SECTION("degenerate V = 0 is rejected") {
        DqdParams p;
        p.tunnel_2t = 5.0;
        p.bz = 5.0;
        p.bx = 0.0;
        CHECK_THROWS_AS(dqd_spectrum(p), std::domain_error);
    }
}

TEST_CASE("double-dot to driven-qubit mapping") {
    SECTION("no gradient, no spin-photon coupling") {
        DqdParams p;
        p.tunnel_2t = 10.0;
        p.bz = 6.0;
        p.bx = 0.0;
        p.g_charge = 0.04;
        p.drive_amp_F = 0.5;
        p.drive_freq = 2.0;
        const DqdMapping m = map_dqd(p);
        CHECK(m.params.g == 0.0);
        CHECK(m.params.Omega == 0.0);
        CHECK(rad_ns_to_ghz(m.params.omega) == Catch::Approx(0.5 * (16.0 - 4.0)));
    }
    SECTION("coupling and drive share the dipole factor") {
        DqdParams p;
        p.tunnel_2t = 9.0;
        p.bz = 7.0;
        p.bx = 1.2;
        p.g_charge = 0.05;
        p.drive_amp_F = 0.8;
        p.drive_freq = 1.0;
        const DqdMapping m = map_dqd(p);
        const DqdSpectrum s = dqd_spectrum(p);
        const double dipole = std::abs(std::sin(0.5 * s.phi_b));
        CHECK(rad_ns_to_ghz(m.params.g) == Catch::Approx(p.g_charge * dipole).epsilon(1e-12));
        CHECK(rad_ns_to_ghz(m.params.Omega) ==
              Catch::Approx(0.5 * p.drive_amp_F * dipole).epsilon(1e-12));
        // g/(2 Omega) = g_c / F regardless of the mixing angle
        CHECK(m.params.g / (2.0 * m.params.Omega) ==
              Catch::Approx(p.g_charge / p.drive_amp_F).epsilon(1e-12));
        CHECK(rad_ns_to_ghz(m.params.omega) ==
              Catch::Approx(0.5 * (s.W_cal - s.V_cal)).epsilon(1e-12));
    }
    SECTION("bare charge qubit at zero field") {
        DqdParams p;
        p.tunnel_2t = 5.0;
        p.bz = 0.0;
        p.bx = 0.0;
        p.g_charge = 0.04;
        p.drive_amp_F = 0.6;
        p.drive_freq = 5.0;
        const DqdMapping m = map_dqd(p);
        CHECK(m.charge_qubit);
        CHECK(rad_ns_to_ghz(m.params.omega) == Catch::Approx(5.0));
        CHECK(rad_ns_to_ghz(m.params.g) == Catch::Approx(0.04));
        CHECK(rad_ns_to_ghz(2.0 * m.params.Omega) == Catch::Approx(0.6));
    }
    SECTION("slow two-level reduction is flagged") {
        DqdParams p;
        p.tunnel_2t = 10.0;
        p.bz = 2.0;  // W and V far apart
        p.bx = 1.0;
        p.g_charge = 0.05;
        p.drive_amp_F = 0.5;
        p.drive_freq = 1.0;
        const DqdMapping m = map_dqd(p);
        CHECK_FALSE(m.warnings.empty());
    }
}

TEST_CASE("resonant-exchange qubit mapping") {
    SECTION("no tunneling, no dipole") {
        RxParams p;
        p.tunnel_t = 0.0;
        p.delta_hubbard = 20.0;
        p.g_charge = 0.05;
        CHECK(map_rx(p).params.g == 0.0);
    }
    SECTION("symmetric exchange point") {
        CHECK(rx_frequency(1.4, 1.4) == Catch::Approx(1.4));
        CHECK(rx_frequency(2.0, 1.0) == Catch::Approx(std::sqrt(1.5 * 1.5 + 3 * 0.25)));
    }
    SECTION("closed form equals the derivative form") {
        std::mt19937 rng(29);
        std::uniform_real_distribution<double> tdist(0.5, 6.0);
        for (int trial = 0; trial < 40; ++trial) {
            RxParams p;
            p.tunnel_t = tdist(rng);
            p.delta_hubbard = p.tunnel_t / (0.05 + 0.25 * (trial / 40.0));  // xi <= 0.3
            p.g_charge = 0.05;
            const RxMapping m = map_rx(p);
            // finite differences of Jl = t^2/(D + eps), Jr = t^2/(D - eps) at eps = 0
            const double h = 1e-5 * p.delta_hubbard;
            auto jl = [&](double eps) { return p.tunnel_t * p.tunnel_t / (p.delta_hubbard + eps); };
            auto jr = [&](double eps) { return p.tunnel_t * p.tunnel_t / (p.delta_hubbard - eps); };
            const double dJ = ((jl(h) + jr(h)) - (jl(-h) + jr(-h))) / (4.0 * h);
            const double dj = ((jl(h) - jr(h)) - (jl(-h) - jr(-h))) / (4.0 * h);
            const double g_fd = 0.5 * p.g_charge * std::sqrt(dJ * dJ + 3.0 * dj * dj);
            CHECK(rad_ns_to_ghz(m.params.g) == Catch::Approx(g_fd).epsilon(1e-8));
        }
    }
    SECTION("coupling grows monotonically with the admixture") {
        double last = -1.0;
        for (double xi : {0.05, 0.1, 0.2, 0.3, 0.5}) {
            RxParams p;
            p.tunnel_t = xi * 10.0;
            p.delta_hubbard = 10.0;
            p.g_charge = 0.05;
            const double g = map_rx(p).params.g;
            CHECK(g > last);
            last = g;
        }
    }
    SECTION("perturbative validity warnings and errors") {
        RxParams p;
        p.tunnel_t = 4.0;
        p.delta_hubbard = 10.0;
        p.g_charge = 0.05;
        CHECK_FALSE(map_rx(p).warnings.empty());  // xi = 0.4 > 0.3
        p.delta_hubbard = 0.0;
        CHECK_THROWS_AS(map_rx(p), std::invalid_argument);
        p.delta_hubbard = 3.0;  // xi > 1
        CHECK_THROWS_AS(map_rx(p), std::domain_error);
    }
}
