#include <doctest.h>

#include <cmath>

#include "occsim/experiments.hpp"
#include "test_util.hpp"

using namespace occ;

namespace {

SweepSpec small_spec(int reps, int jitter) {
    SweepSpec s = load_sweep(data_dir() / "sweeps" / "table7.json");
    s.rows.resize(2);
    s.repetitions = reps;
    s.ticks = 30;
    s.phase_jitter = jitter;
    return s;
}

// Reaction distance plus v^2/(2a), all in feet and ft/s.
double closed_form_stop(double mph, double t, double a) {
    double v = mph * 1.46667;
    return v * t + v * v / (2 * a);
}

}  // namespace

TEST_CASE("shipped sweep documents") {
    SweepSpec t7 = load_sweep(data_dir() / "sweeps" / "table7.json");
    CHECK(t7.rows.size() == 6);
    CHECK(t7.repetitions == 50);
    CHECK(t7.ticks == 100);
    CHECK(t7.rows[2].world.min_velocity == 60);
    CHECK(t7.rows[1].scenario.bullet_decel == 0.06);
    SweepSpec t8 = load_sweep(data_dir() / "sweeps" / "table8.json");
    CHECK(t8.rows.size() == 5);
    CHECK(t8.rows[4].scenario.separation == 17);

    // The embedded copies parse to the same rows.
    SweepSpec e7 = parse_sweep(embedded::table7_json(), {}, "table7.json");
    REQUIRE(e7.rows.size() == t7.rows.size());
    for (std::size_t i = 0; i < e7.rows.size(); ++i) {
        CHECK(e7.rows[i].scenario.separation == t7.rows[i].scenario.separation);
        CHECK(e7.rows[i].world.min_velocity == t7.rows[i].world.min_velocity);
    }
}

TEST_CASE("empty sweep") {
    SweepSpec s;
    s.model = default_model();
    CHECK(run_sweep(s).runs.empty());
}

TEST_CASE("sweep cardinality, seeds and ordering") {
    auto ds = run_sweep(small_spec(3, 10), 4);
    REQUIRE(ds.runs.size() == 6);
    for (std::size_t i = 0; i < ds.runs.size(); ++i) {
        CHECK(ds.runs[i].row == static_cast<int>(i / 3));
        CHECK(ds.runs[i].repetition == static_cast<int>(i % 3));
        CHECK(ds.runs[i].seed == 7000 + i);
        CHECK(ds.runs[i].phase >= 0);
        CHECK(ds.runs[i].phase <= 10);
        CHECK(ds.runs[i].trace.records.size() == 30);
        CHECK(ds.runs[i].reports.size() == 2);
    }
}

TEST_CASE("sweep output does not depend on thread count") {
    auto spec = small_spec(4, 24);
    auto a = serialize_dataset(run_sweep(spec, 1));
    auto b = serialize_dataset(run_sweep(spec, 7));
    CHECK(a == b);
    CHECK(a.count("aggregate.csv") == 1);
    CHECK(a.count("invariants.csv") == 1);
    CHECK(a.count("runs/row01_rep003.csv") == 1);
}

TEST_CASE("zero jitter makes repetitions identical") {
    auto ds = run_sweep(small_spec(3, 0), 2);
    CHECK(trace_to_csv(ds.runs[0].trace) == trace_to_csv(ds.runs[1].trace));
    CHECK(trace_to_csv(ds.runs[0].trace) == trace_to_csv(ds.runs[2].trace));
}

TEST_CASE("aggregates can be recomputed from stored traces") {
    auto ds = run_sweep(small_spec(2, 5), 2);
    auto files = serialize_dataset(ds);
    for (const auto& r : ds.runs) {
        char name[64];
        std::snprintf(name, sizeof name, "runs/row%02d_rep%03d.csv", r.row, r.repetition);
        Trace back = trace_from_csv(files.at(name));
        double min_gap = back.records.front().distance;
        for (const auto& t : back.records) min_gap = std::min(min_gap, t.distance);
        std::string needle = "," + format_fixed(min_gap) + ",";
        CHECK(files.at("aggregate.csv").find(needle) != std::string::npos);
    }
}

TEST_CASE("invalid rows are rejected before any run") {
    auto spec = small_spec(1, 0);
    spec.rows[1].scenario.separation = -2;
    CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
    spec = small_spec(0, 0);
    CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep(R"({"rows": [{"scenario": {"ticks": -3}}]})", {}, "x.json"), ConfigError);
}

TEST_CASE("braking trials agree with closed-form stopping distance") {
    for (double mph : {5.0, 15.0, 33.3, 50.0, 100.0})
        for (double t : {0.4397, 3.8085}) {
            double g = min_stopping_gap(mph, t, 11.2);
            CHECK(g == doctest::Approx(closed_form_stop(mph, t, 11.2)).epsilon(1e-6));
            CHECK(braking_trial(mph, t, 11.2, g * 1.001));
            CHECK_FALSE(braking_trial(mph, t, 11.2, g * 0.999));
        }
    CHECK(min_stopping_gap(0, 1, 11.2) == 0.0);
}

TEST_CASE("comparison tables") {
    auto speeds = even_speeds(15, 50, 12);
    REQUIRE(speeds.size() == 12);
    CHECK(speeds.front() == 15);
    CHECK(speeds.back() == 50);
    auto same = compare_ssd(speeds, agent_profile(), agent_profile());
    for (const auto& r : same) CHECK(r.agent == r.human);
    auto t = compare_ssd(speeds, agent_profile(), human_profile());
    for (const auto& r : t) {
        CHECK(r.success);
        CHECK(r.agent < r.human);
        CHECK(r.kind == ScenarioKind::RearEnd);
    }
    auto o = compare_osd({20, 30, 40}, agent_profile(), agent_profile(), default_model()->sight);
    for (const auto& r : o) CHECK(r.agent == r.human);
    CHECK_THROWS_AS(compare_ssd({30, 20}, agent_profile(), human_profile()), std::invalid_argument);
    CHECK_THROWS_AS(compare_osd({}, agent_profile(), human_profile(), SightCalibration{}), std::invalid_argument);

    auto back = comparison_from_csv(comparison_to_csv(t));
    REQUIRE(back.size() == t.size());
    CHECK(back[3].agent == doctest::Approx(t[3].agent).epsilon(1e-6));
}
