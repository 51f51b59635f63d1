#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gridplan/measures.hpp"
#include "gridplan/optimizer.hpp"
#include "gridplan/power_flow.hpp"
#include "gridplan/scenario.hpp"

namespace gridplan {

// Configuration files. All parsers are strict about unknown keys.

std::vector<LoadCase> load_cases(const std::filesystem::path& path);
std::vector<LoadCase> parse_cases(const std::string& json_text);
std::string cases_to_json(const std::vector<LoadCase>& cases);

PlanningRules load_rules(const std::filesystem::path& path);
PlanningRules parse_rules(const std::string& json_text);
std::string rules_to_json(const PlanningRules& rules);

ResScenario load_scenario(const std::filesystem::path& path);
ResScenario parse_scenario(const std::string& json_text);
std::string scenario_to_json(const ResScenario& scenario);

// Run outputs.

std::string solution_to_json(const Solution& solution, const MeasureCatalog& catalog,
                             const CostTuple& cost);

/// JSON lines, one record per evaluation:
/// {"eval": k, "level": p, "magnitude": v, "event": e}
std::string trace_to_jsonl(const SearchTrace& trace);

std::string constraint_report_to_json(const ConstraintReport& report);
std::string cost_tuple_to_json(const CostTuple& cost);

std::string study_records_to_json(const StudyResult& result);
std::string study_timings_to_json(const StudyResult& result);
std::string summary_to_csv(const std::vector<ComparisonRow>& rows);

std::string search_config_to_json(const SearchConfig& config);
SearchConfig parse_search_config(const std::string& json_text);

/// Everything needed to reproduce a run bit-exactly: the resolved command,
/// embedded input snapshots and the master seed. The created timestamp is the
/// only non-reproducible field and lives here rather than in the outputs.
struct RunManifest {
    std::string command; // validate | plan | compare | study
    std::string tool_version;
    std::string created_utc;
    std::uint64_t master_seed = 0;
    std::string network_json;
    std::string rules_json;
    std::string cases_json;
    std::string scenario_json; // study only
    std::string algorithm;
    std::string search_json; // resolved SearchConfig snapshot
    std::vector<std::string> compare_presets; // compare only
    std::size_t n_samples = 0;
    std::size_t n_seeds = 0;
    std::size_t workers = 1;
};

void save_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest load_manifest(const std::filesystem::path& path);

std::string current_utc_timestamp();

void write_text_file(const std::filesystem::path& path, const std::string& content);

}
