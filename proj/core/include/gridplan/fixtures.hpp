#pragma once

#include <vector>

#include "gridplan/measures.hpp"
#include "gridplan/network.hpp"
#include "gridplan/power_flow.hpp"
#include "gridplan/scenario.hpp"

namespace gridplan::fixtures {

/// Medium-voltage ring: 6 lines, 5 stations modeled as load points, 10
/// load-break switches, slack at 1.02 p.u. In the sectioned variant switch 6
/// (on line 4) is open and the ring runs as two radial feeders; with the ring
/// closed all switches are shut. PV feed-in drives the far stations above the
/// 1.05 p.u. limit in the high feed-in case.
enum class RingState { sectioned, ring_closed };

Network intro_ring(RingState state);
std::vector<LoadCase> intro_cases();

/// Replacement-only planning rules for the ring (all six lines replaceable).
PlanningRules intro_rules_replace_only();
/// Reconfiguration + reinforcement rules (16 measures on the closed ring).
PlanningRules intro_rules_full();

/// Low-voltage feeder behind a 20/0.4 kV transformer: four switching
/// cabinets, four house connections, geometry for cabinet/substation rules.
Network lv_feeder();
std::vector<LoadCase> lv_cases();
PlanningRules lv_rules();
ResScenario lv_scenario_conservative();
ResScenario lv_scenario_progressive();

/// 12-bus topology-optimization fixture: two aged supply lines that must be
/// renewed or abandoned, candidate new trails costed at airline distance
/// times 1.5, and sectioning switches for reconfiguration.
Network trail_grid();
std::vector<LoadCase> trail_cases();
PlanningRules trail_rules();

}
