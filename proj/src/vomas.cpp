#include "occsim/vomas.hpp"

#include <stdexcept>

namespace occ {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Violated: return "violated";
        case Verdict::Vacuous: return "vacuous";
    }
    return "?";
}

InvariantSpec inv1a(double very_small_gap) { return {"Inv1A", very_small_gap, std::nullopt}; }
InvariantSpec inv1b() { return {"Inv1B", 3.0, std::nullopt}; }

namespace {

std::string describe(const TickRecord& r) {
    return "gap=" + format_fixed(r.distance, 4) + " display=" + std::to_string(r.fear_display) +
           " level=" + to_string(r.fear_level) + " speed=" + format_fixed(r.bullet_speed, 4);
}

InvariantReport check_1a(const std::vector<TickRecord>& recs, const InvariantSpec& spec) {
    InvariantReport rep{spec.id, Verdict::Vacuous, {}, "very_small_gap=" + format_fixed(spec.very_small_gap, 4)};
    bool triggered = false;
    for (const auto& r : recs) {
        if (!(r.distance < spec.very_small_gap)) continue;
        triggered = true;
        if (r.fear_level != FearLevel::High && r.fear_level != FearLevel::VeryHigh)
            rep.evidence.push_back({r.tick, describe(r)});
    }
    if (triggered) rep.verdict = rep.evidence.empty() ? Verdict::Pass : Verdict::Violated;
    return rep;
}

// Consecutive ticks where the gap strictly shrinks while the bullet does not
// slow down form the windows; fear display must not drop inside them.
InvariantReport check_1b(const std::vector<TickRecord>& recs, const InvariantSpec& spec) {
    InvariantReport rep{spec.id, Verdict::Vacuous, {}, "window=strictly decreasing gap, non-decreasing speed"};
    bool triggered = false;
    for (std::size_t i = 1; i < recs.size(); ++i) {
        const auto& a = recs[i - 1];
        const auto& b = recs[i];
        if (!(b.distance < a.distance && b.bullet_speed >= a.bullet_speed)) continue;
        triggered = true;
        if (b.fear_display < a.fear_display)
            rep.evidence.push_back({b.tick, describe(b) + " previous_display=" + std::to_string(a.fear_display)});
    }
    if (triggered) rep.verdict = rep.evidence.empty() ? Verdict::Pass : Verdict::Violated;
    return rep;
}

InvariantReport check_custom(const std::vector<TickRecord>& recs, const InvariantSpec& spec) {
    InvariantReport rep{spec.id, Verdict::Vacuous, {}, "custom"};
    bool triggered = false;
    for (const auto& r : recs) {
        if (!spec.custom->pre(r)) continue;
        triggered = true;
        if (!spec.custom->post(r)) rep.evidence.push_back({r.tick, describe(r)});
    }
    if (triggered) rep.verdict = rep.evidence.empty() ? Verdict::Pass : Verdict::Violated;
    return rep;
}

InvariantReport check_rows(const ComparisonTable& table, ScenarioKind kind, const char* id) {
    InvariantReport rep{id, Verdict::Vacuous, {}, kind == ScenarioKind::RearEnd ? "rear_end rows" : "overtaking rows"};
    bool triggered = false;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& r = table[i];
        if (r.kind != kind || !r.success) continue;
        triggered = true;
        if (!(r.agent < r.human))
            rep.evidence.push_back({static_cast<int>(i), "speed=" + format_fixed(r.speed_mph, 3) + " agent=" +
                                                              format_fixed(r.agent, 3) + " human=" + format_fixed(r.human, 3)});
    }
    if (triggered) rep.verdict = rep.evidence.empty() ? Verdict::Pass : Verdict::Violated;
    return rep;
}

}  // namespace

std::vector<InvariantReport> check_trace_invariants(const std::vector<TickRecord>& records,
                                                    const std::vector<InvariantSpec>& specs) {
    std::vector<InvariantReport> out;
    for (const auto& s : specs) {
        if (s.custom) out.push_back(check_custom(records, s));
        else if (s.id == "Inv1A") out.push_back(check_1a(records, s));
        else if (s.id == "Inv1B") out.push_back(check_1b(records, s));
        else throw std::invalid_argument("unknown trace invariant '" + s.id + "'");
    }
    return out;
}

std::vector<InvariantReport> check_comparison_invariants(const ComparisonTable& table) {
    return {check_rows(table, ScenarioKind::RearEnd, "Inv2"), check_rows(table, ScenarioKind::Overtaking, "Inv3")};
}

bool any_violated(const std::vector<InvariantReport>& reports) {
    for (const auto& r : reports)
        if (r.verdict == Verdict::Violated) return true;
    return false;
}

std::string reports_summary(const std::vector<InvariantReport>& reports) {
    std::string out;
    for (const auto& r : reports) {
        out += r.id + ": " + to_string(r.verdict) + " (" + r.parameters + ")";
        if (!r.evidence.empty()) out += ", " + std::to_string(r.evidence.size()) + " offending";
        out += "\n";
        for (const auto& e : r.evidence) out += "  at " + std::to_string(e.index) + ": " + e.observed + "\n";
    }
    return out;
}

std::string reports_to_csv(const std::vector<InvariantReport>& reports) {
    std::string out = "invariant,verdict,index,observed\n";
    for (const auto& r : reports) {
        if (r.evidence.empty()) out += r.id + "," + to_string(r.verdict) + ",,\n";
        for (const auto& e : r.evidence)
            out += r.id + "," + to_string(r.verdict) + "," + std::to_string(e.index) + ",\"" + e.observed + "\"\n";
    }
    return out;
}

}  // namespace occ
