// gridplan command line: validation, single plans, heuristic comparisons and
// probabilistic batch studies on distribution network models.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridplan/error.hpp"
#include "gridplan/fixtures.hpp"
#include "gridplan/io.hpp"
#include "gridplan/network_io.hpp"
#include "gridplan/optimizer.hpp"
#include "gridplan/rng.hpp"
#include "gridplan/scenario.hpp"
#include "gridplan/topology.hpp"
#include "gridplan/version.hpp"

namespace fs = std::filesystem;
using namespace gridplan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitInputError = 2;

std::vector<LoadCase> default_cases() {
    return {{"nominal", 1.0, 1.0, 0.95, 1.05}};
}

std::vector<LoadCase> cases_or_default(const std::string& path) {
    return path.empty() ? default_cases() : load_cases(path);
}

void print_cost(const CostTuple& cost) {
    std::printf("cost tuple: level %d, magnitude %.6g\n", cost.level, cost.magnitude);
}

int cmd_validate(const std::string& network_path, const std::string& cases_path) {
    const Network net = load_network(network_path);
    const ValidationReport validation = validate(net);
    if (!validation.ok()) {
        std::printf("invalid network (%zu violations):\n", validation.violations.size());
        for (const auto& v : validation.violations) {
            std::printf("  %s: %s\n", v.element.c_str(), v.message.c_str());
        }
        return kExitInfeasible;
    }
    std::printf("network '%s': valid\n", net.name.c_str());

    const TopologyReport topology = analyze_topology(net);
    std::printf("topology: %zu supplied buses, %d unsupplied load points, %d meshed load points, "
                "%zu feeders\n",
                topology.supplied_bus_ids.size(), topology.unsupplied_load_point_count,
                topology.meshed_load_point_count, topology.feeders.size());

    const auto cases = cases_or_default(cases_path);
    const ConstraintReport report = evaluate(net, cases);
    std::printf("constraints over %zu cases: lp_us=%d lp_mf=%d tr_ol=%.4g ln_ol=%.4g lp_vv=%d\n",
                cases.size(), report.lp_us, report.lp_mf, report.tr_ol, report.ln_ol,
                report.lp_vv);
    const CostTuple cost = extended_cost(report, 0.0);
    print_cost(cost);
    if (!report.voltage_violated_load_points.empty()) {
        std::printf("voltage violations at:");
        for (const auto& b : report.voltage_violated_load_points) {
            std::printf(" %s", b.c_str());
        }
        std::printf("\n");
    }
    return cost.level == 0 ? kExitOk : kExitInfeasible;
}

struct PlanInputs {
    Network network;
    PlanningRules rules;
    std::vector<LoadCase> cases;
};

int run_plan(const PlanInputs& in, Algorithm algorithm, SearchConfig search,
             std::uint64_t seed, const fs::path& out_dir, RunManifest manifest) {
    const ConstraintReport base_report = evaluate(in.network, in.cases);
    const MeasureCatalog catalog = discover_measures(in.network, base_report, in.rules);
    std::printf("catalog: %zu measures, %zu excludes, %zu requires, %zu at-least-one groups\n",
                catalog.measures.size(), catalog.excludes.size(), catalog.prerequisites.size(),
                catalog.at_least_one.size());

    search.rng_seed = seed;
    const SearchRun run = run_search(algorithm, in.network, catalog, in.cases, search);

    fs::create_directories(out_dir);
    write_text_file(out_dir / "solution.json",
                    solution_to_json(run.best, catalog, run.best_cost));
    write_text_file(out_dir / "trace.jsonl", trace_to_jsonl(run.trace));
    manifest.created_utc = current_utc_timestamp();
    manifest.tool_version = kVersion;
    save_manifest(manifest, out_dir / "manifest.json");

    std::printf("%s finished after %llu evaluations\n", to_string(algorithm),
                static_cast<unsigned long long>(run.trace.evaluations));
    std::printf("solution (%zu measures):", run.best.size());
    for (const auto& id : run.best.measure_ids) {
        std::printf(" %s", id.c_str());
    }
    std::printf("\n");
    print_cost(run.best_cost);
    std::printf("outputs written to %s\n", out_dir.string().c_str());
    return run.best_cost.level == 0 ? kExitOk : kExitInfeasible;
}

int run_compare(const PlanInputs& in, const std::vector<std::string>& preset_names,
                std::size_t n_seeds, std::uint64_t budget, std::uint64_t master_seed,
                const fs::path& out_dir, RunManifest manifest) {
    const ConstraintReport base_report = evaluate(in.network, in.cases);
    const MeasureCatalog catalog = discover_measures(in.network, base_report, in.rules);

    fs::create_directories(out_dir / "traces");
    std::string runs_csv = "config,seed_index,seed,level,magnitude,evaluations\n";
    std::vector<ComparisonRow> rows;
    for (const auto& name : preset_names) {
        NamedSearch preset = named_search(name);
        preset.config.evaluation_budget = budget;
        std::vector<double> feasible_costs;
        std::size_t n_feasible = 0;
        for (std::size_t i = 0; i < n_seeds; ++i) {
            SearchConfig config = preset.config;
            config.rng_seed = derive_seed(master_seed, i);
            const SearchRun run = run_search(preset.algorithm, in.network, catalog, in.cases,
                                             config);
            if (run.best_cost.level == 0) {
                ++n_feasible;
                feasible_costs.push_back(run.best_cost.magnitude);
            }
            char line[160];
            std::snprintf(line, sizeof(line), "%s,%zu,%llu,%d,%.12g,%llu\n", name.c_str(), i,
                          static_cast<unsigned long long>(config.rng_seed), run.best_cost.level,
                          run.best_cost.magnitude,
                          static_cast<unsigned long long>(run.trace.evaluations));
            runs_csv += line;
            write_text_file(out_dir / "traces" / (name + "_" + std::to_string(i) + ".jsonl"),
                            trace_to_jsonl(run.trace));
        }
        rows.push_back({name, summarize(std::move(feasible_costs), n_seeds, n_feasible, 0)});
    }

    write_text_file(out_dir / "runs.csv", runs_csv);
    write_text_file(out_dir / "comparison.csv", summary_to_csv(rows));
    manifest.created_utc = current_utc_timestamp();
    manifest.tool_version = kVersion;
    save_manifest(manifest, out_dir / "manifest.json");

    std::printf("%s", summary_to_csv(rows).c_str());
    std::printf("outputs written to %s\n", out_dir.string().c_str());
    return kExitOk;
}

int run_study_cmd(const PlanInputs& in, const ResScenario& scenario, const StudyConfig& config,
                  const fs::path& out_dir, RunManifest manifest) {
    const StudyResult result = run_study(in.network, scenario, in.rules, in.cases, config);

    fs::create_directories(out_dir);
    write_text_file(out_dir / "records.json", study_records_to_json(result));
    write_text_file(out_dir / "timings.json", study_timings_to_json(result));
    write_text_file(out_dir / "summary.csv", summary_to_csv({{result.study_name, result.summary}}));
    manifest.created_utc = current_utc_timestamp();
    manifest.tool_version = kVersion;
    save_manifest(manifest, out_dir / "manifest.json");

    std::size_t failures = 0;
    for (const auto& r : result.records) {
        if (!r.error.empty()) {
            ++failures;
        }
    }
    std::printf("study '%s': %zu samples, feasibility rate %.3f, reinforcement rate %.3f\n",
                result.study_name.c_str(), result.summary.n, result.summary.feasibility_rate,
                result.summary.reinforcement_rate);
    if (failures > 0) {
        std::printf("warning: %zu samples failed\n", failures);
    }
    std::printf("outputs written to %s\n", out_dir.string().c_str());
    return failures == result.records.size() && !result.records.empty() ? kExitInfeasible
                                                                        : kExitOk;
}

int run_replay(const fs::path& manifest_path, const fs::path& out_dir) {
    const RunManifest m = load_manifest(manifest_path);
    PlanInputs in;
    in.network = parse_network(m.network_json);
    in.rules = m.rules_json.empty() ? PlanningRules{} : parse_rules(m.rules_json);
    in.cases = m.cases_json.empty() ? default_cases() : parse_cases(m.cases_json);
    SearchConfig search = m.search_json.empty() ? SearchConfig{} : parse_search_config(m.search_json);

    if (m.command == "plan") {
        return run_plan(in, algorithm_from_string(m.algorithm), search, m.master_seed, out_dir,
                        m);
    }
    if (m.command == "compare") {
        return run_compare(in, m.compare_presets, m.n_seeds, search.evaluation_budget,
                           m.master_seed, out_dir, m);
    }
    if (m.command == "study") {
        StudyConfig config;
        config.algorithm = algorithm_from_string(m.algorithm);
        config.search = search;
        config.n_samples = m.n_samples;
        config.master_seed = m.master_seed;
        config.workers = m.workers;
        return run_study_cmd(in, parse_scenario(m.scenario_json), config, out_dir, m);
    }
    throw ConfigError("manifest command '" + m.command + "' cannot be replayed");
}

int write_fixture(const std::string& name, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    if (name == "intro-ring") {
        save_network(fixtures::intro_ring(fixtures::RingState::sectioned),
                     out_dir / "network_sectioned.json");
        save_network(fixtures::intro_ring(fixtures::RingState::ring_closed),
                     out_dir / "network_closed.json");
        write_text_file(out_dir / "cases.json", cases_to_json(fixtures::intro_cases()));
        write_text_file(out_dir / "rules_replace_only.json",
                        rules_to_json(fixtures::intro_rules_replace_only()));
        write_text_file(out_dir / "rules_full.json", rules_to_json(fixtures::intro_rules_full()));
    } else if (name == "lv-feeder") {
        save_network(fixtures::lv_feeder(), out_dir / "network.json");
        write_text_file(out_dir / "cases.json", cases_to_json(fixtures::lv_cases()));
        write_text_file(out_dir / "rules.json", rules_to_json(fixtures::lv_rules()));
        write_text_file(out_dir / "scenario_conservative.json",
                        scenario_to_json(fixtures::lv_scenario_conservative()));
        write_text_file(out_dir / "scenario_progressive.json",
                        scenario_to_json(fixtures::lv_scenario_progressive()));
    } else if (name == "trail-grid") {
        save_network(fixtures::trail_grid(), out_dir / "network.json");
        write_text_file(out_dir / "cases.json", cases_to_json(fixtures::trail_cases()));
        write_text_file(out_dir / "rules.json", rules_to_json(fixtures::trail_rules()));
    } else {
        throw ConfigError("unknown fixture '" + name + "' (intro-ring|lv-feeder|trail-grid)");
    }
    std::printf("fixture '%s' written to %s\n", name.c_str(), out_dir.string().c_str());
    return kExitOk;
}

}

int main(int argc, char** argv) {
    CLI::App app{"automated distribution network planning", "gridplan"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::string network_path, rules_path, cases_path, scenario_path, out_dir = "out";
    std::string algorithm_name = "ils";
    std::string configs_arg = "ILS_4_HC,ILS_4_HC_AE,LAHC_50";
    std::string fixture_name, manifest_path;
    std::uint64_t seed = 0;
    std::uint64_t budget = 5000;
    std::size_t samples = 50;
    std::size_t n_seeds = 50;
    std::size_t workers = 1;

    auto* validate_cmd = app.add_subcommand("validate", "check a network file and its constraints");
    validate_cmd->add_option("--network", network_path, "network JSON file")->required();
    validate_cmd->add_option("--cases", cases_path, "load cases JSON file");

    auto* plan_cmd = app.add_subcommand("plan", "search a cost-minimal measure combination");
    plan_cmd->add_option("--network", network_path)->required();
    plan_cmd->add_option("--rules", rules_path)->required();
    plan_cmd->add_option("--cases", cases_path);
    plan_cmd->add_option("--algorithm", algorithm_name, "hc|ils|ils_ae|lahc|exhaustive");
    plan_cmd->add_option("--seed", seed);
    plan_cmd->add_option("--budget", budget);
    plan_cmd->add_option("--out", out_dir);

    auto* compare_cmd = app.add_subcommand("compare", "compare metaheuristics over seed sets");
    compare_cmd->add_option("--network", network_path)->required();
    compare_cmd->add_option("--rules", rules_path)->required();
    compare_cmd->add_option("--cases", cases_path);
    compare_cmd->add_option("--configs", configs_arg, "comma separated presets");
    compare_cmd->add_option("--seeds", n_seeds, "number of runs per config");
    compare_cmd->add_option("--seed", seed, "master seed");
    compare_cmd->add_option("--budget", budget);
    compare_cmd->add_option("--out", out_dir);

    auto* study_cmd = app.add_subcommand("study", "probabilistic RES study");
    study_cmd->add_option("--network", network_path)->required();
    study_cmd->add_option("--scenario", scenario_path)->required();
    study_cmd->add_option("--rules", rules_path)->required();
    study_cmd->add_option("--cases", cases_path);
    study_cmd->add_option("--algorithm", algorithm_name);
    study_cmd->add_option("--budget", budget);
    study_cmd->add_option("--samples", samples);
    study_cmd->add_option("--seed", seed, "master seed");
    study_cmd->add_option("--workers", workers);
    study_cmd->add_option("--out", out_dir);

    auto* replay_cmd = app.add_subcommand("replay", "re-execute a recorded run from its manifest");
    replay_cmd->add_option("--manifest", manifest_path)->required();
    replay_cmd->add_option("--out", out_dir);

    auto* fixture_cmd = app.add_subcommand("fixture", "write bundled example networks");
    fixture_cmd->add_option("name", fixture_name, "intro-ring|lv-feeder|trail-grid")->required();
    fixture_cmd->add_option("--out", out_dir);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) {
            return cmd_validate(network_path, cases_path);
        }
        if (fixture_cmd->parsed()) {
            return write_fixture(fixture_name, out_dir);
        }
        if (replay_cmd->parsed()) {
            return run_replay(manifest_path, out_dir);
        }

        PlanInputs in;
        in.network = load_network(network_path);
        in.rules = load_rules(rules_path);
        in.cases = cases_or_default(cases_path);

        RunManifest manifest;
        manifest.master_seed = seed;
        manifest.network_json = network_to_json(in.network);
        manifest.rules_json = rules_to_json(in.rules);
        manifest.cases_json = cases_to_json(in.cases);
        manifest.workers = workers;

        if (plan_cmd->parsed()) {
            const Algorithm algorithm = algorithm_from_string(algorithm_name);
            SearchConfig search;
            search.evaluation_budget = budget;
            if (algorithm == Algorithm::ils_ae) {
                search.mode.allow_exchange = true;
            }
            manifest.command = "plan";
            manifest.algorithm = algorithm_name;
            manifest.search_json = search_config_to_json(search);
            return run_plan(in, algorithm, search, seed, out_dir, manifest);
        }
        if (compare_cmd->parsed()) {
            std::vector<std::string> presets;
            std::string token;
            for (const char c : configs_arg + ",") {
                if (c == ',') {
                    if (!token.empty()) {
                        presets.push_back(token);
                    }
                    token.clear();
                } else {
                    token += c;
                }
            }
            if (presets.size() < 2) {
                throw ConfigError("compare needs at least two --configs presets");
            }
            SearchConfig search;
            search.evaluation_budget = budget;
            manifest.command = "compare";
            manifest.compare_presets = presets;
            manifest.n_seeds = n_seeds;
            manifest.search_json = search_config_to_json(search);
            return run_compare(in, presets, n_seeds, budget, seed, out_dir, manifest);
        }
        if (study_cmd->parsed()) {
            const ResScenario scenario = load_scenario(scenario_path);
            StudyConfig config;
            config.algorithm = algorithm_from_string(algorithm_name);
            config.search.evaluation_budget = budget;
            if (config.algorithm == Algorithm::ils_ae) {
                config.search.mode.allow_exchange = true;
            }
            config.n_samples = samples;
            config.master_seed = seed;
            config.workers = workers;
            manifest.command = "study";
            manifest.algorithm = algorithm_name;
            manifest.scenario_json = scenario_to_json(scenario);
            manifest.n_samples = samples;
            manifest.search_json = search_config_to_json(config.search);
            return run_study_cmd(in, scenario, config, out_dir, manifest);
        }
    } catch (const ParseError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInputError;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitInputError;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInputError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return kExitInputError;
    }
    return kExitOk;
}
