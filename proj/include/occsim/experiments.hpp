#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "occsim/sight.hpp"
#include "occsim/sim.hpp"
#include "occsim/vomas.hpp"

namespace occ {

struct SweepRow {
    WorldConfig world;
    ScenarioConfig scenario;
};

struct SweepSpec {
    std::vector<SweepRow> rows;
    int repetitions = 50;
    int ticks = 100;
    std::uint64_t base_seed = 0;
    // Each repetition adds a seeded offset in [0, phase_jitter] ticks to the
    // target's phase. 0 makes every repetition identical.
    int phase_jitter = 0;
    std::shared_ptr<const Model> model;

    void validate() const;
};

struct RunResult {
    int row = 0;
    int repetition = 0;
    std::uint64_t seed = 0;
    int phase = 0;
    Trace trace;
    std::vector<InvariantReport> reports;
};

struct SweepDataset {
    std::vector<RunResult> runs;  // ordered by row, then repetition
};

// threads == 0 picks the hardware concurrency. Results never depend on it.
SweepDataset run_sweep(const SweepSpec& spec, unsigned threads = 0);

// File name -> content, exactly what write_dataset puts on disk.
std::map<std::string, std::string> serialize_dataset(const SweepDataset& ds);
void write_dataset(const SweepDataset& ds, const std::filesystem::path& dir);

SweepSpec load_sweep(const std::filesystem::path& path);
// An empty base_dir resolves the shipped names against the embedded data.
SweepSpec parse_sweep(const std::string& text, const std::filesystem::path& base_dir, const std::string& where = "<sweep>");

// Minimum initial gap (feet) to a stopped obstacle that a vehicle at `mph`
// clears, found by stepping reaction then braking with time step dt.
double min_stopping_gap(double mph, double reaction_time, double decel, double dt = 1e-3);
bool braking_trial(double mph, double reaction_time, double decel, double gap_feet, double dt = 1e-3);

std::vector<double> even_speeds(double lo, double hi, int count);

ComparisonTable compare_ssd(const std::vector<double>& speeds, const ReactionProfile& agent, const ReactionProfile& human,
                            double decel = 11.2);
ComparisonTable compare_osd(const std::vector<double>& speeds, const ReactionProfile& agent, const ReactionProfile& human,
                            const SightCalibration& cal);

std::string comparison_to_csv(const ComparisonTable& table);
ComparisonTable comparison_from_csv(const std::string& text, const std::string& where = "<table>");

}  // namespace occ
