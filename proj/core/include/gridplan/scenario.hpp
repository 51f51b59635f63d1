#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gridplan/measures.hpp"
#include "gridplan/optimizer.hpp"

namespace gridplan {

enum class PlacementRule { uniform_over_load_points, weighted_by_potential };

/// Probabilistic RES installation scenario: PV units of random size are
/// placed on load-point buses until the total capacity is reached.
struct ResScenario {
    std::string name;
    double total_capacity_mw = 0.0;
    PlacementRule placement = PlacementRule::uniform_over_load_points;
    std::map<std::string, double> bus_potential_mw; // weighted_by_potential only
    double unit_min_mw = 0.005;
    double unit_max_mw = 0.02;
    double power_factor = 1.0;
    double load_scale = 1.0; // uniform load-development hook
};

/// Returns a copy of the network with sampled PV generators installed.
/// Deterministic per seed.
Network sample_res(const Network& base, const ResScenario& scenario, std::uint64_t seed);

struct SampleRecord {
    std::uint64_t sample_index = 0;
    std::uint64_t seed = 0;
    CostTuple final_cost;
    Solution solution;
    std::uint64_t evaluations = 0;
    double wall_time_ms = 0.0; // diagnostics; excluded from reproducible outputs
    bool base_feasible = false;
    bool feasible = false;
    std::string error; // nonempty if the sample failed
};

struct StudySummary {
    std::size_t n = 0;
    double feasibility_rate = 0.0;   // share of samples ending at level 0
    double reinforcement_rate = 0.0; // share of samples that needed measures
    // Cost statistics over the feasible samples' monetary costs.
    double min = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, max = 0.0, mean = 0.0;
};

struct StudyResult {
    std::string study_name;
    std::vector<SampleRecord> records; // ordered by sample index
    StudySummary summary;
};

struct StudyConfig {
    Algorithm algorithm = Algorithm::ils;
    SearchConfig search;
    std::size_t n_samples = 50;
    std::uint64_t master_seed = 0;
    std::size_t workers = 1;
};

/// Runs n independent samples: sample_res -> constraint check -> measure
/// discovery -> search. Per-sample failures are recorded, never aborting the
/// study. Samples run concurrently up to `workers`; results are identical for
/// any worker count.
StudyResult run_study(const Network& base, const ResScenario& scenario,
                      const PlanningRules& rules, const std::vector<LoadCase>& cases,
                      const StudyConfig& config);

/// Summary statistics over an arbitrary value set: min/quartiles/median/max
/// with linear interpolation between order statistics, plus the mean.
StudySummary summarize(std::vector<double> feasible_costs, std::size_t n_total,
                       std::size_t n_feasible, std::size_t n_reinforced);

struct ComparisonRow {
    std::string study;
    StudySummary summary;
};

/// Per-study summary rows for box-plot style comparisons.
std::vector<ComparisonRow> aggregate(const std::vector<StudyResult>& results);

}
