#include "occsim/sight.hpp"

#include <cmath>
#include <stdexcept>

namespace occ {

ReactionProfile agent_profile(double reaction_time) { return {"eeec_agent", reaction_time}; }
ReactionProfile human_profile(double reaction_time) { return {"human", reaction_time}; }

double stopping_sight_distance(const SsdParams& p) {
    if (p.a == 0.0) throw std::domain_error("stopping sight distance with zero deceleration");
    return 1.47 * p.V * p.t + 1.075 * p.V * p.V / p.a;
}

double overtaking_sight_distance(const OsdParams& p) {
    if (p.Vb == 0.0) return 2.0 * p.s;
    if (p.a == 0.0) throw std::domain_error("overtaking sight distance with zero acceleration");
    return p.Vb * p.t + 2.0 * p.s + p.Vb * std::sqrt(4.0 * p.s / p.a);
}

double SightCalibration::osd_accel_at(double mph) const {
    if (osd_accel.empty()) throw std::invalid_argument("no overtaking acceleration calibration");
    if (mph <= osd_accel.front().first) return osd_accel.front().second;
    if (mph >= osd_accel.back().first) return osd_accel.back().second;
    for (std::size_t i = 1; i < osd_accel.size(); ++i) {
        auto [x0, y0] = osd_accel[i - 1];
        auto [x1, y1] = osd_accel[i];
        if (mph <= x1) return y0 + (y1 - y0) * (mph - x0) / (x1 - x0);
    }
    return osd_accel.back().second;
}

double SightCalibration::reaction_for(const std::string& profile) const {
    if (profile == "eeec_agent") return agent_reaction;
    if (profile == "human") return human_reaction;
    throw std::invalid_argument("unknown reaction profile '" + profile + "'");
}

}  // namespace occ
