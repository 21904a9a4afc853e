#include <doctest.h>

#include <regex>
#include <set>

#include "occsim/experiments.hpp"
#include "occsim/plot.hpp"
#include "test_util.hpp"

using namespace occ;

namespace {

std::size_t count(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
    return n;
}

Trace replay_trace() {
    // Displays of a closing sequence: High, three Medium, High, four VeryHigh.
    int disp[] = {66, 49, 49, 49, 66, 76, 76, 76, 76};
    Trace t;
    for (int i = 0; i < 9; ++i) {
        auto [level, d] = default_model()->fear.classify(disp[i] / 100.0);
        t.records.push_back({i, 0.16, 10.0 - i, d, level, 10, 10});
    }
    return t;
}

}  // namespace

TEST_CASE("trace chart plateaus at the replayed displays") {
    Trace t = replay_trace();
    std::string svg = trace_svg(t);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    std::set<int> seen;
    for (const auto& r : t.records) seen.insert(r.fear_display);
    CHECK(seen == std::set<int>{49, 66, 76});
    CHECK(count(svg, "<path id=\"fear\"") == 1);
    CHECK(count(svg, "<path id=\"gap\"") == 1);
    CHECK(svg == trace_svg(t));
}

TEST_CASE("single tick chart is still valid") {
    Trace t;
    t.records.push_back({0, 0.16, 1.0, 66, FearLevel::High, 10, 10});
    std::string svg = trace_svg(t);
    CHECK(count(svg, "<circle") == 2);
    CHECK(svg.find("nan") == std::string::npos);
    CHECK_THROWS_AS(trace_svg(Trace{}), std::invalid_argument);
}

TEST_CASE("comparison chart has one bar group per speed") {
    auto table = compare_ssd(even_speeds(15, 50, 12), agent_profile(), human_profile());
    std::string svg = comparison_svg(table);
    CHECK(count(svg, "<g class=\"speed\"") == 12);
    std::regex bar("<rect class=\"(agent|human)\" x=\"[0-9.]+\" y=\"[0-9.]+\" width=\"[0-9.]+\" height=\"([0-9.]+)\"");
    std::vector<double> agent, human;
    for (std::sregex_iterator it(svg.begin(), svg.end(), bar), end; it != end; ++it)
        ((*it)[1] == "agent" ? agent : human).push_back(std::stod((*it)[2]));
    REQUIRE(agent.size() == 12);
    REQUIRE(human.size() == 12);
    for (std::size_t i = 0; i < 12; ++i) CHECK(agent[i] < human[i]);
    CHECK(svg == comparison_svg(table));
    CHECK_THROWS_AS(comparison_svg({}), std::invalid_argument);
}
