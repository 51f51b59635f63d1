#pragma once

#include <set>
#include <string>
#include <vector>

#include "gridplan/network.hpp"

namespace gridplan {

struct Feeder {
    std::string root_branch_id;        // branch leaving the source bus
    std::vector<std::string> bus_ids;  // members, sorted
    bool meshed = false;
};

struct TopologyReport {
    std::set<std::string> supplied_bus_ids;
    int unsupplied_load_point_count = 0;
    int meshed_load_point_count = 0;
    std::vector<Feeder> feeders;
};

/// Connectivity analysis over the switch-resolved graph: buses reachable from
/// the source through conducting branches are supplied; a load point whose
/// feeder contains a cycle (including cycles closed through the source bus)
/// counts as meshed. Throws TopologyError for structurally invalid networks.
TopologyReport analyze_topology(const Network& network);

/// Ordered branch ids from `bus_id` towards the source bus. Empty for the
/// source bus itself. Throws TopologyError if the bus is unsupplied or its
/// feeder is meshed (no unique path).
std::vector<std::string> path_to_source(const Network& network, const std::string& bus_id);

/// Radial supply tree rooted at the source, shared by the load-flow solver.
/// branch_is_line/branch_index identify the branch between a bus and its
/// parent. Buses not in `order` are unsupplied.
struct SupplyTree {
    std::vector<std::size_t> order;             // bus indices, root first (BFS)
    std::vector<int> parent;                    // parent bus index, -1 for root/unsupplied
    std::vector<bool> branch_is_line;           // per bus
    std::vector<std::size_t> branch_index;      // per bus, into lines/transformers
    std::vector<bool> supplied;                 // per bus
    std::size_t root = 0;
};

/// Builds the radial tree of the supplied subgraph. Throws TopologyError if
/// the supplied subgraph is meshed or any load point is unsupplied.
SupplyTree build_supply_tree(const Network& network, const NetworkIndex& index);

}
