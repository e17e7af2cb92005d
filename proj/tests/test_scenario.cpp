#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "uavsec/scenario.hpp"

using namespace uavsec;
using uavsec::testing::make_case;

namespace {

bool has_code(const std::vector<ValidationError>& errs, const std::string& code) {
    for (const auto& e : errs)
        if (e.code == code) return true;
    return false;
}

Trajectory straight_line(const Scenario& s) {
    Trajectory traj;
    traj.xs.resize(s.num_slots);
    traj.ys.resize(s.num_slots);
    const Vec2 span = s.final_pos - s.start_pos;
    for (int n = 1; n <= s.num_slots; ++n) {
        const Vec2 p = s.start_pos + (static_cast<double>(n) / s.num_slots) * span;
        traj.xs[n - 1] = p.x;
        traj.ys[n - 1] = p.y;
    }
    return traj;
}

} // namespace

TEST_CASE("validate accepts the taut reference geometry") {
    // Endpoint distance 1200 m equals v_max * T exactly.
    const Scenario s = make_case(1, LinkDirection::U2G, 400.0, 0.5, -5.0);
    CHECK(validate(s).empty());
}

TEST_CASE("validate accepts coincident endpoints") {
    Scenario s = make_case(1, LinkDirection::U2G, 400.0, 0.5, -5.0);
    s.final_pos = s.start_pos;
    CHECK(validate(s).empty());
}

TEST_CASE("validate flags unreachable endpoints") {
    Scenario s = make_case(1, LinkDirection::U2G, 400.0, 0.5, -5.0);
    s.start_pos = {0.0, 0.0};
    s.final_pos = {0.0, 1300.0};   // 1300 > 3 m/s * 400 s
    CHECK(has_code(validate(s), "InfeasibleEndpoints"));
}

TEST_CASE("validate flags a broken power budget") {
    Scenario s = make_case(1, LinkDirection::U2G, 400.0, 0.5, -5.0);
    s.peak_power_w = s.avg_power_w;
    CHECK(has_code(validate(s), "BadPowerBudget"));
    s.peak_power_w = 0.5 * s.avg_power_w;
    CHECK(has_code(validate(s), "BadPowerBudget"));
}

TEST_CASE("validate flags a co-located eavesdropper") {
    Scenario s = make_case(1, LinkDirection::G2U, 400.0, 0.5, -5.0);
    s.eaves_pos = s.ground_pos;
    CHECK(has_code(validate(s), "CoLocatedEavesdropper"));
}

TEST_CASE("uniform straight line at minimum period is feasible") {
    const Scenario s = make_case(1, LinkDirection::U2G, 400.0, 0.5, -5.0);
    CHECK(is_feasible_trajectory(s, straight_line(s)));
}

TEST_CASE("a double-length step is rejected") {
    const Scenario s = make_case(1, LinkDirection::U2G, 500.0, 0.5, -5.0);
    Trajectory traj = straight_line(s);
    traj.xs[10] += 2.0 * s.max_step_m();
    CHECK_FALSE(is_feasible_trajectory(s, traj));
}

TEST_CASE("length mismatch throws") {
    const Scenario s = make_case(1, LinkDirection::U2G, 400.0, 0.5, -5.0);
    Trajectory traj = straight_line(s);
    traj.xs.pop_back();
    traj.ys.pop_back();
    CHECK_THROWS_AS(is_feasible_trajectory(s, traj), std::invalid_argument);
}

TEST_CASE("every valid scenario admits the uniform straight line") {
    uavsec::testing::TestRng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        Scenario s = make_case(1, LinkDirection::U2G, 400.0, 5.0, -5.0);
        s.start_pos = {rng.uniform(-500, 500), rng.uniform(-500, 500)};
        s.v_max = rng.uniform(0.5, 5.0);
        s.num_slots = rng.uniform_int(1, 60);
        s.slot_len_s = rng.uniform(0.2, 10.0);
        // Place the final point inside the reachable disk.
        const double reach = s.v_max * s.flight_period_s();
        const double r = rng.uniform(0.0, reach);
        const double ang = rng.uniform(0.0, 6.28318);
        s.final_pos = s.start_pos + Vec2{r * std::cos(ang), r * std::sin(ang)};
        REQUIRE(validate(s).empty());
        CHECK(is_feasible_trajectory(s, straight_line(s)));
    }
}

TEST_CASE("per-slot travel bound is the product of speed and slot length") {
    const Scenario s = make_case(2, LinkDirection::G2U, 600.0, 0.5, -5.0);
    CHECK(s.max_step_m() == 3.0 * 0.5);
    CHECK(s.flight_period_s() == doctest::Approx(600.0));
}
