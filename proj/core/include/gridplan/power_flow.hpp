#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gridplan/network.hpp"

namespace gridplan {

/// Worst-case operating snapshot: all load/generation set points are scaled
/// by the case factors and voltages must stay within [v_min, v_max].
struct LoadCase {
    std::string name;
    double load_scale = 1.0;
    double generation_scale = 1.0;
    double v_min = 0.95; // per unit
    double v_max = 1.05; // per unit
};

struct PowerFlowResult {
    std::map<std::string, double> bus_voltage;          // per unit, supplied buses only
    std::map<std::string, double> line_loading;         // percent of type max_current
    std::map<std::string, double> transformer_loading;  // percent of rated power
    bool converged = false;
    int iterations = 0;
};

inline constexpr double kLoadFlowTolerance = 1e-8; // per unit
inline constexpr int kLoadFlowMaxIterations = 100;

/// Backward/forward sweep load flow on the radial supplied subgraph.
/// Loads and generators are constant PQ; generation enters as negative load.
/// Transformers are modeled as an ideal tap-dependent ratio in series with
/// the short-circuit impedance. Throws TopologyError on meshed or
/// load-point-unsupplied networks; reports converged=false instead of
/// throwing when the sweep does not settle within the iteration limit.
PowerFlowResult run_load_flow(const Network& network, const LoadCase& load_case);

/// One result per case, order preserved. Errors are re-thrown tagged with
/// the case name.
std::vector<PowerFlowResult> worst_case_results(const Network& network,
                                                const std::vector<LoadCase>& cases);

/// Process-wide count of run_load_flow invocations. Instrumentation used by
/// tests to prove that constraint screening skips the load flow.
std::uint64_t load_flow_invocation_count();

}
