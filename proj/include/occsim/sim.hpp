#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "occsim/fear.hpp"
#include "occsim/model.hpp"

namespace occ {

struct WorldConfig {
    double extent_lo = -25.0;
    double extent_hi = 25.0;
    double patch_scale = 100.0;  // feet per sim unit
    double tick_seconds = 0.1;
    double min_velocity = 10.0;  // mph
    double max_velocity = 100.0;
    // Multiplies every accel/decel column. 1 reads them as mph per tick.
    double accel_scale = 1.0;
    std::uint64_t seed = 0;

    double span() const { return extent_hi - extent_lo; }
    void validate() const;
};

enum class Role { Bullet, Target };
enum class ScenarioKind { RearEnd, Overtaking };
enum class MediumAction { Hold, Accelerate };

struct VehicleState {
    Role role = Role::Bullet;
    double position = 0.0;  // sim units
    double speed = 0.0;     // mph
    double accel = 0.0;     // mph per tick
    double decel = 0.0;
};

// One imported SimConnector record. A present likelihood overrides the
// per-tick computation during replay.
struct SimRecord {
    double undesirability = 1.0;
    std::optional<double> likelihood;
    double ig = 1.0;
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::RearEnd;
    double separation = 1.0;
    double bullet_accel = 0.06;
    double bullet_decel = 0.03;
    double target_accel = 0.03;
    double target_decel = 0.03;
    int target_period = 25;
    int target_phase = 0;
    std::optional<double> target_initial_speed;  // defaults to min_velocity
    bool eeec_agent = true;
    double undesirability = 1.0;
    double ig = 1.0;
    std::string reaction = "eeec_agent";
    MediumAction medium_action = MediumAction::Hold;
    int ticks = 100;
    std::vector<SimRecord> replay;

    void validate(const WorldConfig& world) const;
};

struct TickRecord {
    int tick = 0;
    double ssd = 0.0;       // sim units
    double distance = 0.0;  // sim units
    int fear_display = 0;
    FearLevel fear_level = FearLevel::VeryLow;
    double bullet_speed = 0.0;  // speed the appraisal saw
    double target_speed = 0.0;
};

struct Trace {
    WorldConfig world;
    ScenarioConfig config;
    std::vector<TickRecord> records;
    bool collided = false;
    int collision_tick = -1;
};

// Signed speed change for this tick, already clamped so the speed stays in
// [min_velocity, max_velocity].
double decide_maneuver(FearLevel level, const VehicleState& bullet, const WorldConfig& world,
                       MediumAction medium = MediumAction::Hold);

struct StepResult {
    VehicleState bullet;
    VehicleState target;
    TickRecord record;
    bool collided = false;
};

StepResult step(const WorldConfig& world, const ScenarioConfig& cfg, const Model& model, const VehicleState& bullet,
                const VehicleState& target, int tick);

using TickObserver = std::function<void(const TickRecord&)>;

Trace run_scenario(const WorldConfig& world, const ScenarioConfig& cfg, const Model& model,
                   const TickObserver& observer = {});

// `undesirability,likelihood,ig` lines; header optional; likelihood may be empty.
std::vector<SimRecord> import_simconnector(std::istream& in);
std::vector<SimRecord> import_simconnector(const std::string& text);

struct ScenarioDocument {
    WorldConfig world;
    ScenarioConfig scenario;
    std::shared_ptr<const Model> model;
};

ScenarioDocument load_scenario(const std::filesystem::path& path);
ScenarioDocument parse_scenario(const std::string& text, const std::filesystem::path& base_dir,
                                const std::string& where = "<scenario>");

const std::string& trace_csv_header();
std::string trace_to_csv(const Trace& trace);
// Reads records back; world/config are left at defaults.
Trace trace_from_csv(const std::string& text, const std::string& where = "<trace>");

std::string format_fixed(double v, int digits = 6);

}  // namespace occ
