#pragma once

#include <string>
#include <utility>
#include <vector>

namespace occ {

inline constexpr double kFpsPerMph = 1.46667;

struct ReactionProfile {
    std::string name;
    double reaction_time;
};

ReactionProfile agent_profile(double reaction_time = 0.4397);
ReactionProfile human_profile(double reaction_time = 3.8085);

struct SsdParams {
    double V;        // mph
    double t;        // s
    double a = 11.2;  // ft/s^2
};

struct OsdParams {
    double Vb;  // ft/s
    double t;   // s
    double s;   // ft
    double a;   // ft/s^2
};

// 1.47 V t + 1.075 V^2 / a, in feet. Throws std::domain_error when a == 0.
double stopping_sight_distance(const SsdParams& p);

// Vb t + 2 s + Vb sqrt(4 s / a), in feet.
double overtaking_sight_distance(const OsdParams& p);

inline double to_sim_units(double feet, double patch_scale = 100.0) { return feet / patch_scale; }
inline double mph_to_fps(double mph) { return mph * kFpsPerMph; }

struct SightCalibration {
    double agent_reaction = 0.4397;
    double human_reaction = 3.8085;
    double ssd_decel = 11.2;
    double osd_spacing = 5.0;
    // (mph, ft/s^2) anchors, interpolated linearly and held flat outside.
    std::vector<std::pair<double, double>> osd_accel{{25.0, 19.34157601174745}, {50.0, 10.13439831726626}};

    double osd_accel_at(double mph) const;
    double reaction_for(const std::string& profile) const;
};

}  // namespace occ
