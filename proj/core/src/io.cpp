#include "gridplan/io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>

#include <json.hpp>

#include "gridplan/error.hpp"
#include "gridplan/version.hpp"

namespace gridplan {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& object, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : object.items()) {
        if (!allowed.count(key)) {
            throw ParseError("unknown key '" + key + "' in " + where);
        }
    }
}

json parse_root(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

std::string slurp(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(std::string("cannot open ") + what + " file '" + path.string() + "'");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}

std::vector<LoadCase> parse_cases(const std::string& text) {
    const json root = parse_root(text, "cases JSON");
    reject_unknown_keys(root, {"cases"}, "cases file");
    std::vector<LoadCase> cases;
    for (const auto& j : root.at("cases")) {
        const std::string where = "case '" + j.value("name", "?") + "'";
        reject_unknown_keys(j, {"name", "load_scale", "generation_scale", "v_min", "v_max"},
                            where);
        LoadCase c;
        c.name = j.at("name").get<std::string>();
        c.load_scale = j.value("load_scale", 1.0);
        c.generation_scale = j.value("generation_scale", 1.0);
        c.v_min = j.value("v_min", 0.95);
        c.v_max = j.value("v_max", 1.05);
        if (!(c.v_min >= 0.0) || !(c.v_min < c.v_max)) {
            throw ConfigError(where + ": need 0 <= v_min < v_max");
        }
        if (c.load_scale < 0.0 || c.generation_scale < 0.0) {
            throw ConfigError(where + ": scales must be >= 0");
        }
        cases.push_back(std::move(c));
    }
    return cases;
}

std::vector<LoadCase> load_cases(const std::filesystem::path& path) {
    return parse_cases(slurp(path, "cases"));
}

std::string cases_to_json(const std::vector<LoadCase>& cases) {
    json arr = json::array();
    for (const auto& c : cases) {
        arr.push_back({{"name", c.name},
                       {"load_scale", c.load_scale},
                       {"generation_scale", c.generation_scale},
                       {"v_min", c.v_min},
                       {"v_max", c.v_max}});
    }
    return json{{"cases", arr}}.dump(2) + "\n";
}

PlanningRules parse_rules(const std::string& text) {
    const json root = parse_root(text, "rules JSON");
    reject_unknown_keys(root,
                        {"enabled", "replace_line_scope", "customer_access_min_length_km",
                         "new_substation_min_distance_km", "switch_cost", "tap_change_cost",
                         "cabinet_cost", "substation_cost", "mv_connection_cost_per_km",
                         "trail_length_factor", "added_line_std_type", "trail_candidates",
                         "transformer_catalog", "tap_positions", "must_address_line_ids"},
                        "rules file");
    PlanningRules rules;
    for (const auto& name : root.value("enabled", json::array())) {
        rules.enabled.insert(measure_kind_from_string(name.get<std::string>()));
    }
    const std::string scope = root.value("replace_line_scope", "violated_paths");
    if (scope == "violated_paths") {
        rules.replace_line_scope = ReplaceLineScope::violated_paths;
    } else if (scope == "all_lines") {
        rules.replace_line_scope = ReplaceLineScope::all_lines;
    } else {
        throw ConfigError("replace_line_scope must be violated_paths or all_lines");
    }
    rules.customer_access_min_length_km = root.value("customer_access_min_length_km", 0.05);
    rules.new_substation_min_distance_km = root.value("new_substation_min_distance_km", 0.05);
    rules.switch_cost = root.value("switch_cost", 0.0);
    rules.tap_change_cost = root.value("tap_change_cost", 0.0);
    rules.cabinet_cost = root.value("cabinet_cost", 0.0);
    rules.substation_cost = root.value("substation_cost", 0.0);
    rules.mv_connection_cost_per_km = root.value("mv_connection_cost_per_km", 0.0);
    rules.trail_length_factor = root.value("trail_length_factor", 1.5);
    rules.added_line_std_type = root.value("added_line_std_type", "");
    if (root.contains("trail_candidates")) {
        for (const auto& j : root.at("trail_candidates")) {
            reject_unknown_keys(j, {"from_bus", "to_bus", "std_type"}, "trail candidate");
            rules.trail_candidates.push_back({j.at("from_bus").get<std::string>(),
                                              j.at("to_bus").get<std::string>(),
                                              j.value("std_type", "")});
        }
    }
    if (root.contains("transformer_catalog")) {
        for (const auto& j : root.at("transformer_catalog")) {
            reject_unknown_keys(
                j, {"name", "rated_power", "short_circuit_voltage", "short_circuit_losses", "cost"},
                "transformer option");
            TransformerOption o;
            o.spec.name = j.at("name").get<std::string>();
            o.spec.rated_power = j.at("rated_power").get<double>();
            o.spec.short_circuit_voltage = j.at("short_circuit_voltage").get<double>();
            o.spec.short_circuit_losses = j.at("short_circuit_losses").get<double>();
            o.cost = j.value("cost", 0.0);
            rules.transformer_catalog.push_back(std::move(o));
        }
    }
    if (root.contains("tap_positions")) {
        std::vector<int> positions;
        for (const auto& p : root.at("tap_positions")) {
            positions.push_back(p.get<int>());
        }
        rules.tap_positions = std::move(positions);
    }
    if (root.contains("must_address_line_ids")) {
        for (const auto& id : root.at("must_address_line_ids")) {
            rules.must_address_line_ids.push_back(id.get<std::string>());
        }
    }
    return rules;
}

PlanningRules load_rules(const std::filesystem::path& path) {
    return parse_rules(slurp(path, "rules"));
}

std::string rules_to_json(const PlanningRules& rules) {
    json root;
    json enabled = json::array();
    for (const auto kind : rules.enabled) {
        enabled.push_back(to_string(kind));
    }
    root["enabled"] = std::move(enabled);
    root["replace_line_scope"] =
        rules.replace_line_scope == ReplaceLineScope::all_lines ? "all_lines" : "violated_paths";
    root["customer_access_min_length_km"] = rules.customer_access_min_length_km;
    root["new_substation_min_distance_km"] = rules.new_substation_min_distance_km;
    root["switch_cost"] = rules.switch_cost;
    root["tap_change_cost"] = rules.tap_change_cost;
    root["cabinet_cost"] = rules.cabinet_cost;
    root["substation_cost"] = rules.substation_cost;
    root["mv_connection_cost_per_km"] = rules.mv_connection_cost_per_km;
    root["trail_length_factor"] = rules.trail_length_factor;
    if (!rules.added_line_std_type.empty()) {
        root["added_line_std_type"] = rules.added_line_std_type;
    }
    if (!rules.trail_candidates.empty()) {
        json arr = json::array();
        for (const auto& t : rules.trail_candidates) {
            json j{{"from_bus", t.from_bus}, {"to_bus", t.to_bus}};
            if (!t.std_type.empty()) {
                j["std_type"] = t.std_type;
            }
            arr.push_back(std::move(j));
        }
        root["trail_candidates"] = std::move(arr);
    }
    if (!rules.transformer_catalog.empty()) {
        json arr = json::array();
        for (const auto& o : rules.transformer_catalog) {
            arr.push_back({{"name", o.spec.name},
                           {"rated_power", o.spec.rated_power},
                           {"short_circuit_voltage", o.spec.short_circuit_voltage},
                           {"short_circuit_losses", o.spec.short_circuit_losses},
                           {"cost", o.cost}});
        }
        root["transformer_catalog"] = std::move(arr);
    }
    if (rules.tap_positions.has_value()) {
        root["tap_positions"] = *rules.tap_positions;
    }
    if (!rules.must_address_line_ids.empty()) {
        root["must_address_line_ids"] = rules.must_address_line_ids;
    }
    return root.dump(2) + "\n";
}

ResScenario parse_scenario(const std::string& text) {
    const json root = parse_root(text, "scenario JSON");
    reject_unknown_keys(root,
                        {"name", "total_capacity_mw", "placement_rule", "bus_potential_mw",
                         "unit_size_range_mw", "power_factor", "load_scale"},
                        "scenario file");
    ResScenario s;
    s.name = root.at("name").get<std::string>();
    s.total_capacity_mw = root.at("total_capacity_mw").get<double>();
    const std::string placement = root.value("placement_rule", "uniform_over_load_points");
    if (placement == "uniform_over_load_points") {
        s.placement = PlacementRule::uniform_over_load_points;
    } else if (placement == "weighted_by_potential") {
        s.placement = PlacementRule::weighted_by_potential;
    } else {
        throw ConfigError("unknown placement_rule '" + placement + "'");
    }
    if (root.contains("bus_potential_mw")) {
        for (const auto& [bus, potential] : root.at("bus_potential_mw").items()) {
            s.bus_potential_mw[bus] = potential.get<double>();
        }
    }
    if (root.contains("unit_size_range_mw")) {
        const auto& r = root.at("unit_size_range_mw");
        if (!r.is_array() || r.size() != 2) {
            throw ParseError("unit_size_range_mw must be [min, max]");
        }
        s.unit_min_mw = r[0].get<double>();
        s.unit_max_mw = r[1].get<double>();
    }
    s.power_factor = root.value("power_factor", 1.0);
    s.load_scale = root.value("load_scale", 1.0);
    return s;
}

ResScenario load_scenario(const std::filesystem::path& path) {
    return parse_scenario(slurp(path, "scenario"));
}

std::string scenario_to_json(const ResScenario& s) {
    json root;
    root["name"] = s.name;
    root["total_capacity_mw"] = s.total_capacity_mw;
    root["placement_rule"] = s.placement == PlacementRule::weighted_by_potential
                                 ? "weighted_by_potential"
                                 : "uniform_over_load_points";
    if (!s.bus_potential_mw.empty()) {
        root["bus_potential_mw"] = s.bus_potential_mw;
    }
    root["unit_size_range_mw"] = {s.unit_min_mw, s.unit_max_mw};
    root["power_factor"] = s.power_factor;
    root["load_scale"] = s.load_scale;
    return root.dump(2) + "\n";
}

std::string solution_to_json(const Solution& solution, const MeasureCatalog& catalog,
                             const CostTuple& cost) {
    json measures = json::array();
    for (const auto& id : solution.measure_ids) {
        const Measure* m = catalog.find(id);
        json j{{"id", id}};
        if (m != nullptr) {
            j["kind"] = to_string(m->kind);
            j["cost"] = m->cost;
            if (!m->target.empty()) {
                j["target"] = m->target;
            }
            if (!m->std_type.empty()) {
                j["std_type"] = m->std_type;
            }
            if (!m->from_bus.empty()) {
                j["from_bus"] = m->from_bus;
                j["to_bus"] = m->to_bus;
                j["length_km"] = m->length_km;
            }
            if (m->kind == MeasureKind::change_tap) {
                j["tap_position"] = m->tap_position;
            }
        }
        measures.push_back(std::move(j));
    }
    json root{{"measures", std::move(measures)},
              {"total_cost", solution_cost(solution, catalog)},
              {"final_cost", {{"level", cost.level}, {"magnitude", cost.magnitude}}}};
    return root.dump(2) + "\n";
}

std::string trace_to_jsonl(const SearchTrace& trace) {
    std::string out;
    for (const auto& r : trace.records) {
        json j{{"eval", r.eval},
               {"level", r.cost.level},
               {"magnitude", r.cost.magnitude},
               {"event", to_string(r.event)}};
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string cost_tuple_to_json(const CostTuple& cost) {
    return json{{"level", cost.level}, {"magnitude", cost.magnitude}}.dump();
}

std::string constraint_report_to_json(const ConstraintReport& report) {
    json root{{"lp_us", report.lp_us},
              {"lp_mf", report.lp_mf},
              {"tr_ol", report.tr_ol},
              {"ln_ol", report.ln_ol},
              {"lp_vv", report.lp_vv},
              {"load_flow_converged", report.load_flow_converged}};
    root["voltage_violated_load_points"] = report.voltage_violated_load_points;
    root["overloaded_lines"] = report.overloaded_line_ids;
    return root.dump(2) + "\n";
}

std::string study_records_to_json(const StudyResult& result) {
    json records = json::array();
    for (const auto& r : result.records) {
        json j{{"sample", r.sample_index},
               {"seed", r.seed},
               {"level", r.final_cost.level},
               {"magnitude", r.final_cost.magnitude},
               {"feasible", r.feasible},
               {"base_feasible", r.base_feasible},
               {"evaluations", r.evaluations},
               {"solution", r.solution.measure_ids}};
        if (!r.error.empty()) {
            j["error"] = r.error;
        }
        records.push_back(std::move(j));
    }
    json root{{"study", result.study_name},
              {"records", std::move(records)},
              {"summary",
               {{"n", result.summary.n},
                {"feasibility_rate", result.summary.feasibility_rate},
                {"reinforcement_rate", result.summary.reinforcement_rate},
                {"min", result.summary.min},
                {"q25", result.summary.q25},
                {"median", result.summary.median},
                {"q75", result.summary.q75},
                {"max", result.summary.max},
                {"mean", result.summary.mean}}}};
    return root.dump(2) + "\n";
}

std::string study_timings_to_json(const StudyResult& result) {
    json arr = json::array();
    for (const auto& r : result.records) {
        arr.push_back({{"sample", r.sample_index}, {"wall_time_ms", r.wall_time_ms}});
    }
    return json{{"study", result.study_name}, {"timings", std::move(arr)}}.dump(2) + "\n";
}

std::string summary_to_csv(const std::vector<ComparisonRow>& rows) {
    std::string out = "study,n,feasibility_rate,min,q25,median,q75,max,mean\n";
    for (const auto& row : rows) {
        const auto& s = row.summary;
        out += row.study + ',' + std::to_string(s.n) + ',' + fmt_double(s.feasibility_rate) +
               ',' + fmt_double(s.min) + ',' + fmt_double(s.q25) + ',' + fmt_double(s.median) +
               ',' + fmt_double(s.q75) + ',' + fmt_double(s.max) + ',' + fmt_double(s.mean) +
               '\n';
    }
    return out;
}

std::string search_config_to_json(const SearchConfig& c) {
    json root{{"allow_add", c.mode.allow_add},
              {"allow_remove", c.mode.allow_remove},
              {"allow_exchange", c.mode.allow_exchange},
              {"evaluation_budget", c.evaluation_budget},
              {"stop_after_no_improvement", c.stop_after_no_improvement},
              {"perturbation_strength", c.perturbation_strength},
              {"lahc_history_length", c.lahc_history_length},
              {"rng_seed", c.rng_seed}};
    return root.dump();
}

SearchConfig parse_search_config(const std::string& text) {
    const json root = parse_root(text, "search config JSON");
    reject_unknown_keys(root,
                        {"allow_add", "allow_remove", "allow_exchange", "evaluation_budget",
                         "stop_after_no_improvement", "perturbation_strength",
                         "lahc_history_length", "rng_seed"},
                        "search config");
    SearchConfig c;
    c.mode.allow_add = root.value("allow_add", true);
    c.mode.allow_remove = root.value("allow_remove", true);
    c.mode.allow_exchange = root.value("allow_exchange", false);
    c.evaluation_budget = root.value("evaluation_budget", 5000ULL);
    c.stop_after_no_improvement = root.value("stop_after_no_improvement", 0ULL);
    c.perturbation_strength = root.value("perturbation_strength", 4);
    c.lahc_history_length = root.value("lahc_history_length", std::size_t{50});
    c.rng_seed = root.value("rng_seed", 0ULL);
    return c;
}

void save_manifest(const RunManifest& m, const std::filesystem::path& path) {
    json root{{"tool", "gridplan"},
              {"tool_version", m.tool_version},
              {"command", m.command},
              {"created_utc", m.created_utc},
              {"master_seed", m.master_seed},
              {"algorithm", m.algorithm},
              {"n_samples", m.n_samples},
              {"n_seeds", m.n_seeds},
              {"workers", m.workers}};
    if (!m.search_json.empty()) {
        root["search"] = json::parse(m.search_json);
    }
    if (!m.network_json.empty()) {
        root["network"] = json::parse(m.network_json);
    }
    if (!m.rules_json.empty()) {
        root["rules"] = json::parse(m.rules_json);
    }
    if (!m.cases_json.empty()) {
        root["cases"] = json::parse(m.cases_json);
    }
    if (!m.scenario_json.empty()) {
        root["scenario"] = json::parse(m.scenario_json);
    }
    if (!m.compare_presets.empty()) {
        root["compare_presets"] = m.compare_presets;
    }
    write_text_file(path, root.dump(2) + "\n");
}

RunManifest load_manifest(const std::filesystem::path& path) {
    const json root = parse_root(slurp(path, "manifest"), "manifest JSON");
    RunManifest m;
    m.command = root.at("command").get<std::string>();
    m.tool_version = root.value("tool_version", "");
    m.created_utc = root.value("created_utc", "");
    m.master_seed = root.value("master_seed", 0ULL);
    m.algorithm = root.value("algorithm", "");
    if (root.contains("search")) {
        m.search_json = root.at("search").dump();
    }
    m.n_samples = root.value("n_samples", std::size_t{0});
    m.n_seeds = root.value("n_seeds", std::size_t{0});
    m.workers = root.value("workers", std::size_t{1});
    if (root.contains("network")) {
        m.network_json = root.at("network").dump();
    }
    if (root.contains("rules")) {
        m.rules_json = root.at("rules").dump();
    }
    if (root.contains("cases")) {
        m.cases_json = root.at("cases").dump();
    }
    if (root.contains("scenario")) {
        m.scenario_json = root.at("scenario").dump();
    }
    if (root.contains("compare_presets")) {
        for (const auto& p : root.at("compare_presets")) {
            m.compare_presets.push_back(p.get<std::string>());
        }
    }
    return m;
}

std::string current_utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write file '" + path.string() + "'");
    }
    out << content;
}

}
