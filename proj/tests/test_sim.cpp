#include <doctest.h>

#include <cstring>

#include "occsim/sim.hpp"
#include "test_util.hpp"

using namespace occ;

namespace {
const Model& M() { return *default_model(); }
}

TEST_CASE("maneuver decisions") {
    WorldConfig w;
    VehicleState b{Role::Bullet, 0, 10, 0.06, 0.03};
    CHECK(decide_maneuver(FearLevel::High, b, w) == doctest::Approx(0.0));  // already at min speed
    b.speed = 20;
    CHECK(decide_maneuver(FearLevel::High, b, w) == doctest::Approx(-0.03));
    CHECK(decide_maneuver(FearLevel::VeryHigh, b, w) == doctest::Approx(-0.03));
    b.speed = 10;
    CHECK(decide_maneuver(FearLevel::VeryLow, b, w) == doctest::Approx(0.06));
    CHECK(decide_maneuver(FearLevel::Low, b, w) == doctest::Approx(0.06));
    CHECK(decide_maneuver(FearLevel::Medium, b, w) == 0.0);
    CHECK(decide_maneuver(FearLevel::Medium, b, w, MediumAction::Accelerate) == doctest::Approx(0.06));
    b.speed = 100;
    CHECK(decide_maneuver(FearLevel::VeryLow, b, w) == 0.0);
    b.speed = 99.98;
    CHECK(decide_maneuver(FearLevel::VeryLow, b, w) == doctest::Approx(0.02));
    w.accel_scale = 10;
    b.speed = 50;
    CHECK(decide_maneuver(FearLevel::High, b, w) == doctest::Approx(-0.3));
}

TEST_CASE("step applies the commanded speed change") {
    WorldConfig w;
    ScenarioConfig c;
    c.undesirability = 0.0;  // no undesirable prospect, so no fear
    VehicleState b{Role::Bullet, 0, 10, 0.06, 0.06};
    VehicleState t{Role::Target, 30, 10, 0.0, 0.0};
    auto s = step(w, c, M(), b, t, 0);
    CHECK(s.record.fear_level == FearLevel::VeryLow);
    CHECK(s.bullet.speed == doctest::Approx(10.06));

    c.undesirability = 1.0;
    b.speed = 10.06;
    t.position = b.position + 0.5;
    s = step(w, c, M(), b, t, 1);
    CHECK(s.record.fear_level == FearLevel::High);
    CHECK(s.bullet.speed == doctest::Approx(10.0));
    CHECK(s.record.bullet_speed == 10.06);
}

TEST_CASE("three ticks at fixed speeds follow hand kinematics") {
    WorldConfig w;
    ScenarioConfig c;
    c.eeec_agent = false;
    c.bullet_accel = 0;
    c.target_accel = 0;
    c.target_decel = 0;
    c.target_initial_speed = 20;
    c.ticks = 3;
    Trace tr = run_scenario(w, c, M());
    REQUIRE(tr.records.size() == 3);
    // per tick: speed mph * 0.1 s * 1.46667 ft/s per mph / 100 ft per unit
    double per_tick_gap = (20.0 - 10.0) * 0.1 * 1.46667 / 100.0;
    for (int k = 0; k < 3; ++k) {
        CHECK(tr.records[k].tick == k);
        CHECK(tr.records[k].distance == doctest::Approx(1.0 + k * per_tick_gap).epsilon(1e-12));
        CHECK(tr.records[k].bullet_speed == 10.0);
        CHECK(tr.records[k].target_speed == 20.0);
        CHECK(tr.records[k].ssd == doctest::Approx((1.47 * 10 * 0.4397 + 1.075 * 100 / 11.2) / 100));
    }
}

TEST_CASE("target alternates accel and decel phases") {
    WorldConfig w;
    ScenarioConfig c;
    c.eeec_agent = false;
    c.bullet_accel = 0;
    c.target_accel = 0.5;
    c.target_decel = 0.25;
    c.target_period = 4;
    c.separation = 20;
    c.ticks = 12;
    Trace tr = run_scenario(w, c, M());
    std::vector<double> want{10, 10.5, 11, 11.5, 12, 11.75, 11.5, 11.25, 11, 11.5, 12, 12.5};
    for (std::size_t k = 0; k < want.size(); ++k) CHECK(tr.records[k].target_speed == doctest::Approx(want[k]));
}

TEST_CASE("zero ticks gives an empty trace") {
    ScenarioConfig c;
    c.ticks = 0;
    Trace tr = run_scenario(WorldConfig{}, c, M());
    CHECK(tr.records.empty());
    CHECK_FALSE(tr.collided);
}

TEST_CASE("agent disabled follows the raw acceleration schedule") {
    WorldConfig w;
    ScenarioConfig c;
    c.eeec_agent = false;
    c.separation = 40;
    c.ticks = 50;
    Trace tr = run_scenario(w, c, M());
    for (std::size_t k = 0; k < tr.records.size(); ++k)
        CHECK(tr.records[k].bullet_speed == doctest::Approx(10.0 + 0.06 * static_cast<double>(k)));
}

TEST_CASE("collision terminates the run") {
    WorldConfig w;
    w.accel_scale = 100;
    ScenarioConfig c;
    c.eeec_agent = false;
    c.separation = 0.5;
    c.target_accel = 0;
    c.ticks = 100;
    Trace tr = run_scenario(w, c, M());
    CHECK(tr.collided);
    CHECK(tr.collision_tick > 0);
    CHECK(tr.records.size() == static_cast<std::size_t>(tr.collision_tick));
    for (const auto& r : tr.records) CHECK(r.distance > 0);
}

TEST_CASE("runs are deterministic and respect speed bounds") {
    auto doc = load_scenario(data_dir() / "scenarios" / "exp1.json");
    for (auto medium : {MediumAction::Hold, MediumAction::Accelerate}) {
        doc.scenario.medium_action = medium;
        doc.world.accel_scale = 25;
        Trace a = run_scenario(doc.world, doc.scenario, *doc.model);
        Trace b = run_scenario(doc.world, doc.scenario, *doc.model);
        CHECK(trace_to_csv(a) == trace_to_csv(b));
        REQUIRE(a.records.size() == b.records.size());
        CHECK(std::memcmp(a.records.data(), b.records.data(), a.records.size() * sizeof(TickRecord)) == 0);
        for (const auto& r : a.records) {
            CHECK(r.bullet_speed >= doc.world.min_velocity);
            CHECK(r.bullet_speed <= doc.world.max_velocity);
            CHECK(r.target_speed >= doc.world.min_velocity);
            CHECK(r.target_speed <= doc.world.max_velocity);
        }
    }
}

TEST_CASE("SimConnector import") {
    auto r = import_simconnector("0.9,0.8,0.7");
    REQUIRE(r.size() == 1);
    CHECK(r[0].undesirability == 0.9);
    CHECK(r[0].likelihood == 0.8);
    CHECK(r[0].ig == 0.7);

    r = import_simconnector("undesirability,likelihood,ig\n0.1,,0.2\n\n0.3,0.4,0.5\n");
    REQUIRE(r.size() == 2);
    CHECK_FALSE(r[0].likelihood.has_value());

    auto message = [](const std::string& text) {
        try {
            import_simconnector(text);
        } catch (const std::runtime_error& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("1.3,0.2,0.2").rfind("line 1:", 0) == 0);
    CHECK(message("0.1,0.2,0.2\n0.1,abc,0.2").rfind("line 2:", 0) == 0);
    CHECK(message("0.1,0.2").rfind("line 1:", 0) == 0);
    CHECK(message("undesirability,likelihood,ig\n0.1,0.2,-0.5").rfind("line 2:", 0) == 0);
}

TEST_CASE("replayed records drive the appraisal") {
    WorldConfig w;
    ScenarioConfig c;
    c.separation = 40;
    c.ticks = 3;
    c.replay = import_simconnector("1,0.95,1\n1,0.05,1\n");
    Trace tr = run_scenario(w, c, M());
    CHECK(tr.records[0].fear_level == FearLevel::VeryHigh);
    CHECK(tr.records[1].fear_display < tr.records[0].fear_display);
    CHECK(tr.records[2].fear_display == tr.records[1].fear_display);
}

TEST_CASE("trace CSV round-trip") {
    auto doc = load_scenario(data_dir() / "scenarios" / "exp1.json");
    Trace t = run_scenario(doc.world, doc.scenario, *doc.model);
    std::string csv = trace_to_csv(t);
    CHECK(csv.rfind("tick,ssd,distance,fear_display,fear_level,bullet_speed,target_speed\n", 0) == 0);
    Trace back = trace_from_csv(csv);
    CHECK(trace_to_csv(back) == csv);
    CHECK_THROWS_AS(trace_from_csv("tick,x\n"), ConfigError);
    CHECK_THROWS_AS(trace_from_csv(trace_csv_header() + "\n1,2,3\n"), ConfigError);
}

TEST_CASE("scenario config errors name the key") {
    auto where = [](const std::string& text) {
        try {
            parse_scenario(text, {}, "s.json");
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(where(R"({"scenario": {"separation": -1}})").find("[scenario]") != std::string::npos);
    CHECK(where(R"({"scenario": {"speed": 3}})").find("scenario/speed") != std::string::npos);
    CHECK(where(R"({"world": {"tick_seconds": "fast"}})").find("world/tick_seconds") != std::string::npos);
    CHECK(where(R"({"scenario": {"medium_action": "brake"}})").find("medium_action") != std::string::npos);
    CHECK(where("{").find("byte") != std::string::npos);
    CHECK(where("{}") == "no error");
}
