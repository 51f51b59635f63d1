#pragma once

#include <set>
#include <string>
#include <vector>

#include "gridplan/network.hpp"
#include "gridplan/power_flow.hpp"

namespace gridplan {

/// Violation aggregates over all load cases. The two topology counts are
/// case independent; the three load-flow metrics sum over cases. The id sets
/// are detail used by measure discovery and reporting.
struct ConstraintReport {
    int lp_us = 0;      // unsupplied load points
    int lp_mf = 0;      // load points on meshed feeders
    double tr_ol = 0.0; // percentage points of transformer overload, summed
    double ln_ol = 0.0; // km of overloaded lines, summed over cases
    int lp_vv = 0;      // load points outside the voltage band, summed over cases

    std::set<std::string> voltage_violated_load_points;
    std::set<std::string> overloaded_line_ids;
    bool load_flow_converged = true;

    bool feasible() const {
        return lp_us == 0 && lp_mf == 0 && tr_ol == 0.0 && ln_ol == 0.0 && lp_vv == 0;
    }
};

/// Lexicographic cost: level 5..1 name the violated constraint class
/// (supply, radiality, transformer overload, line overload, voltage), level 0
/// means feasible and the magnitude carries the monetary solution cost.
struct CostTuple {
    int level = 0;
    double magnitude = 0.0;
};

enum class Ordering { less, equal, greater };

Ordering compare(const CostTuple& a, const CostTuple& b);

inline bool operator==(const CostTuple& a, const CostTuple& b) {
    return compare(a, b) == Ordering::equal;
}
inline bool operator<(const CostTuple& a, const CostTuple& b) {
    return compare(a, b) == Ordering::less;
}

/// Evaluates all planning constraints. Topology first: if any load point is
/// unsupplied or meshed the load flow is skipped entirely and the three
/// load-flow metrics stay zero. A non-converged case counts as a line
/// overload over the network's entire line length, so it can never look
/// better than a converged violating plan.
ConstraintReport evaluate(const Network& network, const std::vector<LoadCase>& cases);

/// The extended cost cascade over the report, highest-priority violation
/// first; feasible reports map to (0, solution_cost).
CostTuple extended_cost(const ConstraintReport& report, double solution_cost);

}
