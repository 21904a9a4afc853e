#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "occsim/sim.hpp"

namespace occ {

enum class Verdict { Pass, Violated, Vacuous };
std::string to_string(Verdict v);

// A custom monitor: precondition and postcondition over a single record.
struct RecordPredicates {
    std::function<bool(const TickRecord&)> pre;
    std::function<bool(const TickRecord&)> post;
};

struct InvariantSpec {
    std::string id;  // "Inv1A", "Inv1B", or any name when `custom` is set
    double very_small_gap = 3.0;
    std::optional<RecordPredicates> custom;
};

struct Evidence {
    int index;  // tick for traces, row for comparison tables
    std::string observed;
};

struct InvariantReport {
    std::string id;
    Verdict verdict = Verdict::Vacuous;
    std::vector<Evidence> evidence;  // offending ticks or rows only
    std::string parameters;
};

InvariantSpec inv1a(double very_small_gap = 3.0);
InvariantSpec inv1b();

// Throws std::invalid_argument for ids that are not trace invariants.
std::vector<InvariantReport> check_trace_invariants(const std::vector<TickRecord>& records,
                                                    const std::vector<InvariantSpec>& specs);
inline std::vector<InvariantReport> check_trace_invariants(const Trace& trace, const std::vector<InvariantSpec>& specs) {
    return check_trace_invariants(trace.records, specs);
}

struct ComparisonRow {
    double speed_mph = 0.0;
    double agent = 0.0;  // feet
    double human = 0.0;
    ScenarioKind kind = ScenarioKind::RearEnd;
    bool success = true;
    // Closed-form values emitted next to the measured ones.
    double agent_formula = 0.0;
    double human_formula = 0.0;
};

using ComparisonTable = std::vector<ComparisonRow>;

// Inv2 over successful rear-end rows, Inv3 over successful overtaking rows.
std::vector<InvariantReport> check_comparison_invariants(const ComparisonTable& table);

bool any_violated(const std::vector<InvariantReport>& reports);
std::string reports_summary(const std::vector<InvariantReport>& reports);
std::string reports_to_csv(const std::vector<InvariantReport>& reports);

// Collects records as a passive observer; attach via run_scenario's observer.
class TraceMonitor {
public:
    explicit TraceMonitor(std::vector<InvariantSpec> specs) : specs_(std::move(specs)) {}
    TickObserver observer() {
        return [this](const TickRecord& r) { seen_.push_back(r); };
    }
    std::vector<InvariantReport> reports() const { return check_trace_invariants(seen_, specs_); }

private:
    std::vector<InvariantSpec> specs_;
    std::vector<TickRecord> seen_;
};

}  // namespace occ
