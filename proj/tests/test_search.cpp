#include "sideband/search.hpp"

#include "sideband/effective.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace sideband;

namespace {
SearchBounds reference_bounds(int condition) {
    SearchBounds b;
    b.condition = condition;
    b.q_max = condition == 7 ? 8 : 12;
    b.p_max = 20;
    b.m_max = 50;
    b.eta = ghz_to_rad_ns(0.05);
    b.g_min = ghz_to_rad_ns(0.002);
    b.g_max = ghz_to_rad_ns(0.05);
    return b;
}
}  // namespace

TEST_CASE("search recovers the reference iSWAP tuple") {
    const auto found = search_parameters(reference_bounds(7));
    REQUIRE_FALSE(found.empty());
    bool hit = false;
    for (const auto& c : found) {
        if (c.q1 == 7 && c.q2 == 4 && c.p1 == 20 && c.p2 == 17 && c.m == 40) {
            hit = true;
            CHECK(c.w == 13);
            const double eta_ghz = 0.05;
            // g1 g2 = (13/40) eta^2 and g2/g1 = sqrt((2 + 13/4)/(2 + 13/7))
            const double product = rad_ns_to_ghz(c.g1) * rad_ns_to_ghz(c.g2);
            CHECK(product == Catch::Approx((13.0 / 40.0) * eta_ghz * eta_ghz).epsilon(1e-12));
            const double ratio = c.g2 / c.g1;
            CHECK(ratio == Catch::Approx(std::sqrt((2 + 13.0 / 4) / (2 + 13.0 / 7)))
                               .epsilon(1e-12));
            CHECK(c.tau_m == Catch::Approx(800.0).epsilon(1e-12));
        }
    }
    CHECK(hit);
}

TEST_CASE("search recovers the reference double-excitation tuple") {
    const auto found = search_parameters(reference_bounds(9));
    bool hit = false;
    for (const auto& c : found) {
        if (c.q1 == 12 && c.q2 == 11 && c.p1 == 10 && c.p2 == -13 && c.m == 10) {
            hit = true;
            CHECK(c.w == -2);
            CHECK(rad_ns_to_ghz(c.g1) == Catch::Approx(0.0214087209644).epsilon(1e-9));
            CHECK(rad_ns_to_ghz(c.g2) == Catch::Approx(0.0233549683248).epsilon(1e-9));
            CHECK(rad_ns_to_mhz(c.coupling) == Catch::Approx(-1.25).epsilon(1e-12));
        }
    }
    CHECK(hit);
}

TEST_CASE("infeasible bounds return the empty list") {
    SearchBounds b = reference_bounds(7);
    b.q_max = 1;
    b.p_max = 1;  // every (p, q) hits a pole or w = 0
    CHECK(search_parameters(b).empty());
}

TEST_CASE("candidates re-validate through the constraint checks") {
    const double pi = std::acos(-1.0);
    for (int condition : {7, 9}) {
        SearchBounds b = reference_bounds(condition);
        b.m_max = 12;
        const auto found = search_parameters(b);
        REQUIRE_FALSE(found.empty());
        const std::size_t stride = std::max<std::size_t>(1, found.size() / 10);
        for (std::size_t i = 0; i < found.size(); i += stride) {
            const SystemParams s = system_from_candidate(found[i]);
            CHECK(grid_errors(s).empty());
            CHECK(well_definedness_errors(s).empty());
            CHECK(resonance_holds(s, condition));
            CHECK(resonance_constraints_satisfied(s, condition));
            int others = 0;
            for (const auto& c : classify_resonance(s))
                if (c.id != condition && c.holds) ++others;
            CHECK(others == 0);
            const ConstraintReport r = check_constraints(s, condition, 1e-9);
            CHECK(r.satisfied);
            const double sign = condition == 7 ? 1.0 : -1.0;
            CHECK(std::abs(build_vqq(s, condition).coupling * s.tau_m() - sign * pi / 2.0) <=
                  1e-12);
        }
    }
}

TEST_CASE("results are ranked by gate time") {
    const auto found = search_parameters(reference_bounds(7));
    for (std::size_t i = 1; i < found.size(); ++i)
        CHECK(found[i - 1].tau_m <= found[i].tau_m);
}

TEST_CASE("validity cap and coupling window are honored") {
    SearchBounds b = reference_bounds(7);
    b.max_g_over_w = 0.08;
    for (const auto& c : search_parameters(b)) {
        CHECK(c.g1 / (c.q1 * b.eta) <= 0.08);
        CHECK(c.g2 / (c.q2 * b.eta) <= 0.08);
        CHECK(c.g1 >= b.g_min);
        CHECK(c.g2 <= b.g_max);
    }
}

TEST_CASE("search rejects unsupported conditions") {
    SearchBounds b = reference_bounds(7);
    b.condition = 3;
    CHECK_THROWS_AS(search_parameters(b), std::invalid_argument);
}
