#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gridplan/constraints.hpp"
#include "gridplan/network.hpp"

namespace gridplan {

enum class MeasureKind {
    replace_line,
    open_switch,
    parallel_line,
    new_cabinet_parallel_line,
    new_substation_split,
    replace_transformer,
    change_tap,
    new_line_trail,
};

const char* to_string(MeasureKind kind);
MeasureKind measure_kind_from_string(const std::string& name);

struct TransformerSpec {
    std::string name;
    double rated_power = 0.0;           // MVA
    double short_circuit_voltage = 0.0; // percent
    double short_circuit_losses = 0.0;  // percent
};

/// One atomic planning action. Only the fields relevant to `kind` are used;
/// everything needed to apply the measure deterministically is stored here at
/// discovery time.
struct Measure {
    std::string id;
    MeasureKind kind = MeasureKind::replace_line;
    double cost = 0.0;

    std::string target;                         // line/switch/transformer/bus id
    std::string std_type;                       // new line type
    std::string from_bus, to_bus;               // added-line endpoints
    double length_km = 0.0;                     // added-line length
    int tap_position = 0;                       // change_tap
    TransformerSpec transformer;                // replace_transformer / substation split
    std::vector<std::string> boundary_line_ids; // lines opened by a substation split
};

/// Candidate measures plus the dependency relations that restrict which
/// subsets are admissible solutions.
struct MeasureCatalog {
    std::vector<Measure> measures;
    std::vector<std::pair<std::string, std::string>> excludes; // unordered pairs
    std::map<std::string, std::set<std::string>> prerequisites; // id -> required ids
    std::vector<std::set<std::string>> at_least_one;

    const Measure* find(const std::string& id) const;
    bool contains(const std::string& id) const { return find(id) != nullptr; }
};

/// Checks the catalog's own invariants (ids resolve, excludes irreflexive).
ValidationReport validate_catalog(const MeasureCatalog& catalog);

/// A solution is a subset of the catalog, stored as sorted unique ids.
struct Solution {
    std::vector<std::string> measure_ids;

    static Solution of(std::vector<std::string> ids);
    bool contains(const std::string& id) const;
    Solution with(const std::string& id) const;
    Solution without(const std::string& id) const;
    bool operator==(const Solution& other) const { return measure_ids == other.measure_ids; }
    std::size_t size() const { return measure_ids.size(); }
    bool empty() const { return measure_ids.empty(); }
};

/// Applies every measure in the solution to a copy of the base network.
/// Application is order independent; measures that cannot compose (two line
/// replacements on the same line) raise MeasureError.
Network apply(const Network& base, const Solution& solution, const MeasureCatalog& catalog);

/// Sum of the member measures' costs.
double solution_cost(const Solution& solution, const MeasureCatalog& catalog);

/// True iff no excludes pair is fully contained, every member's prerequisites
/// are contained and every at-least-one group intersects the solution.
bool satisfies_dependencies(const Solution& solution, const MeasureCatalog& catalog);

/// Cheapest dependency-satisfying starting point: empty when admissible,
/// otherwise greedily covers each at-least-one group. Throws MeasureError if
/// the greedy closure does not satisfy the dependencies.
Solution initial_solution(const MeasureCatalog& catalog);

enum class ReplaceLineScope {
    violated_paths, // only lines on a path from a violated load point to the source
    all_lines,      // every replaceable line (introductory-example style)
};

struct TrailCandidate {
    std::string from_bus;
    std::string to_bus;
    std::string std_type; // empty: rules default type
};

struct TransformerOption {
    TransformerSpec spec;
    double cost = 0.0;
};

/// Discovery configuration: which measure kinds to generate, thresholds and
/// cost parameters. Loaded from JSON, see io.hpp.
struct PlanningRules {
    std::set<MeasureKind> enabled;
    ReplaceLineScope replace_line_scope = ReplaceLineScope::violated_paths;

    double customer_access_min_length_km = 0.05;
    double new_substation_min_distance_km = 0.05;

    double switch_cost = 0.0;
    double tap_change_cost = 0.0;
    double cabinet_cost = 0.0;
    double substation_cost = 0.0;
    double mv_connection_cost_per_km = 0.0;
    double trail_length_factor = 1.5;

    std::string added_line_std_type; // parallel lines and trails; empty: largest type
    std::vector<TrailCandidate> trail_candidates;
    std::vector<TransformerOption> transformer_catalog;
    std::optional<std::vector<int>> tap_positions; // admissible; nullopt: whole range
    std::vector<std::string> must_address_line_ids; // aged lines: replace or switch off
};

/// Generates the measure catalog for a violated network according to the
/// enabled rules. Deterministic: the same inputs produce the same catalog
/// with the same ids in the same order.
MeasureCatalog discover_measures(const Network& network, const ConstraintReport& report,
                                 const PlanningRules& rules);

}
