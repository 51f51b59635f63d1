#pragma once

// Independent reference implementations used to verify the library. These
// deliberately take different computational routes than the code under test.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <gridplan/constraints.hpp>
#include <gridplan/measures.hpp>
#include <gridplan/network.hpp>
#include <gridplan/power_flow.hpp>
#include <gridplan/rng.hpp>

namespace oracles {

/// Closed-form receiving-end voltage magnitude of a two-bus feeder: slack at
/// |v1|, series impedance r + jx (per unit), constant PQ consumption p + jq
/// (per unit). Solves the voltage quadratic directly.
std::optional<double> two_bus_voltage(double v1, double r, double x, double p, double q);

/// Direct solution of the full complex nodal system by Gaussian elimination
/// inside a fixed-point loop over the PQ injections.
struct NodalResult {
    std::map<std::string, double> bus_voltage;
    bool converged = false;
};
NodalResult solve_nodal(const gridplan::Network& network, const gridplan::LoadCase& load_case);

/// Reference for the extended cost cascade.
gridplan::CostTuple eq6_reference(const gridplan::ConstraintReport& report, double cost);

/// Brute-force traversal over the switch-resolved graph: supplied set by
/// repeated edge-list scans, meshes by edge counting per feeder component.
struct TraversalResult {
    std::set<std::string> supplied;
    int unsupplied_load_points = 0;
    int meshed_load_points = 0;
};
TraversalResult traverse(const gridplan::Network& network);

/// Unique tree path from a supplied bus to the source by recursive DFS.
std::optional<std::vector<std::string>> tree_path(const gridplan::Network& network,
                                                  const std::string& bus_id);

/// All dependency-satisfying subsets enumerated directly, with an independent
/// dependency filter; returns the lexicographic optimum with the smallest-
/// size / smallest-ids tie break.
struct EnumeratedOptimum {
    gridplan::Solution solution;
    gridplan::CostTuple cost;
    std::size_t admissible_count = 0;
};
EnumeratedOptimum enumerate_optimum(const gridplan::Network& base,
                                    const gridplan::MeasureCatalog& catalog,
                                    const std::vector<gridplan::LoadCase>& cases);

// Random instance generators for property tests.

gridplan::Network random_radial_network(gridplan::Rng& rng, int max_buses);
gridplan::Network random_switched_network(gridplan::Rng& rng, int max_buses);
gridplan::MeasureCatalog random_dependency_catalog(gridplan::Rng& rng, int n_measures);
gridplan::ConstraintReport random_report(gridplan::Rng& rng);

}
