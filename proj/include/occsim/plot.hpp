#pragma once

#include <string>

#include "occsim/sim.hpp"
#include "occsim/vomas.hpp"

namespace occ {

// Fear display and gap against tick, two polylines on a shared frame.
// Throws std::invalid_argument on an empty trace.
std::string trace_svg(const Trace& trace, const std::string& title = "Fear and gap per tick");

// One agent/human bar pair per speed.
std::string comparison_svg(const ComparisonTable& table, const std::string& title = "Agent vs human sight distance");

}  // namespace occ
