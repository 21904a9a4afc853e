#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "occsim/model.hpp"
#include "test_util.hpp"

using namespace occ;

TEST_CASE("likelihood examples at term peaks") {
    const FearModel& f = default_model()->fear;
    double v = f.compute_likelihood(0.3, 1.0);  // LD, VHS
    CHECK(v >= 0.76);
    CHECK(v <= 1.0);
    v = f.compute_likelihood(0.49, 0.49);  // MD, MS
    CHECK(v >= 0.25);
    CHECK(v <= 0.73);
    v = f.compute_likelihood(1.0, 0.3);  // VHD, LS
    CHECK(v >= 0.0);
    CHECK(v <= 0.24);
}

TEST_CASE("fear potential examples") {
    const FearModel& f = default_model()->fear;
    double hi = f.fear_potential({0.9, 0.9, 0.9});
    CHECK(hi >= 0.76);
    CHECK(hi <= 1.0);
    double mid = f.fear_potential({0.49, 0.49, 0.49});
    CHECK(mid >= 0.25);
    CHECK(mid <= 0.73);
    for (double x : {0.0, 0.3, 1.0})
        for (double y : {0.0, 0.6, 1.0}) {
            double z = f.fear_potential({0.0, x, y});
            CHECK(z >= 0.0);
            CHECK(z <= 0.24);
        }
    CHECK_THROWS_AS(f.fear_potential({1.1, 0.2, 0.2}), std::domain_error);
    CHECK_THROWS_AS(f.fear_potential({0.5, -0.1, 0.2}), std::domain_error);
}

TEST_CASE("fear intensity examples") {
    CHECK(fear_intensity(0.8, 0.0) == 0.8);
    CHECK(fear_intensity(0.5, 0.6) == 0.0);
    CHECK(fear_intensity(0.76, 0.10) == doctest::Approx(0.66));
    CHECK(fear_intensity(0.4, 0.4) == 0.0);
}

TEST_CASE("classify examples") {
    const FearModel& f = default_model()->fear;
    CHECK(f.classify(0.49) == std::pair{FearLevel::Medium, 49});
    CHECK(f.classify(0.76) == std::pair{FearLevel::VeryHigh, 76});
    CHECK(f.classify(0.06) == std::pair{FearLevel::VeryLow, 6});
    CHECK(f.classify(0.30).first == FearLevel::Low);
    CHECK(f.classify(0.0) == std::pair{FearLevel::VeryLow, 6});
    CHECK(f.classify(1.0) == std::pair{FearLevel::VeryHigh, 76});
}

TEST_CASE("classify plateaus and level order") {
    const FearModel& f = default_model()->fear;
    std::set<int> plateaus;
    int last_display = -1, last_level = -1;
    for (int i = 0; i <= 100000; ++i) {
        auto [level, display] = f.classify(i / 100000.0);
        plateaus.insert(display);
        CHECK(display >= last_display);
        CHECK(static_cast<int>(level) >= last_level);
        last_display = display;
        last_level = static_cast<int>(level);
    }
    CHECK(plateaus == std::set<int>{6, 16, 26, 36, 49, 66, 76});
}

TEST_CASE("shipped ff rules match the generator") {
    CHECK(embedded::ff_rules() == generate_ff_rules());
    CHECK(read_text_file(data_dir() / "ff.rules") == generate_ff_rules());
    CHECK(default_model()->fear.ff_system().rulebase().rules.size() == 125);
}

TEST_CASE("ff consequent follows the weighted mean with halves rounding up") {
    const auto& rb = default_model()->fear.ff_system().rulebase();
    auto idx = [&](const LinguisticVariable& v, const std::string& t) { return static_cast<int>(*v.term_index(t)); };
    for (const auto& r : rb.rules) {
        int a = idx(rb.inputs[0], r.antecedents[0].term);
        int b = idx(rb.inputs[1], r.antecedents[1].term);
        int c = idx(rb.inputs[2], r.antecedents[2].term);
        double mean = (a + 2.0 * b + c) / 4.0;
        int want = static_cast<int>(std::floor(mean + 0.5));
        CHECK(idx(rb.output, r.consequent.term) == want);
    }
}

TEST_CASE("closer gap at fixed speed never lowers the display") {
    const FearModel& f = default_model()->fear;
    for (double u : {0.3, 0.7, 1.0})
        for (double speed : {0.0, 0.1, 0.25, 0.5, 0.8, 1.0}) {
            int prev = -1;
            for (int i = 1000; i >= 0; --i) {
                int d = f.appraise(i / 1000.0, speed, u, u).display;
                CHECK(d >= prev);
                prev = d;
            }
        }
}

TEST_CASE("likelihood override replaces the computed value") {
    const FearModel& f = default_model()->fear;
    auto s = f.appraise(1.0, 0.0, 1.0, 1.0, 0.95);
    CHECK(s.likelihood == 0.95);
    CHECK(s.level == FearLevel::VeryHigh);
    CHECK(s.intensity == s.potential);
}

TEST_CASE("model loading reports locations") {
    std::string text = embedded::model_json();
    auto broken = text;
    broken.replace(broken.find("\"threshold\": 0.0"), 16, "\"threshold\": \"x\"");
    try {
        parse_model(broken, {}, "m.json");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("fear/threshold") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_model("{ nope", {}, "m.json"), ConfigError);
    CHECK(load_model(data_dir() / "model.json")->fear.cells().size() == 7);
}
