#include "gridplan/measures.hpp"

#include <algorithm>

#include "gridplan/error.hpp"

namespace gridplan {

const char* to_string(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::replace_line: return "replace_line";
        case MeasureKind::open_switch: return "open_switch";
        case MeasureKind::parallel_line: return "parallel_line";
        case MeasureKind::new_cabinet_parallel_line: return "new_cabinet_parallel_line";
        case MeasureKind::new_substation_split: return "new_substation_split";
        case MeasureKind::replace_transformer: return "replace_transformer";
        case MeasureKind::change_tap: return "change_tap";
        case MeasureKind::new_line_trail: return "new_line_trail";
    }
    return "?";
}

MeasureKind measure_kind_from_string(const std::string& name) {
    static const std::map<std::string, MeasureKind> table = {
        {"replace_line", MeasureKind::replace_line},
        {"open_switch", MeasureKind::open_switch},
        {"parallel_line", MeasureKind::parallel_line},
        {"new_cabinet_parallel_line", MeasureKind::new_cabinet_parallel_line},
        {"new_substation_split", MeasureKind::new_substation_split},
        {"replace_transformer", MeasureKind::replace_transformer},
        {"change_tap", MeasureKind::change_tap},
        {"new_line_trail", MeasureKind::new_line_trail},
    };
    const auto it = table.find(name);
    if (it == table.end()) {
        throw ConfigError("unknown measure kind '" + name + "'");
    }
    return it->second;
}

const Measure* MeasureCatalog::find(const std::string& id) const {
    const auto it = std::find_if(measures.begin(), measures.end(),
                                 [&](const Measure& m) { return m.id == id; });
    return it == measures.end() ? nullptr : &*it;
}

ValidationReport validate_catalog(const MeasureCatalog& catalog) {
    ValidationReport report;
    std::set<std::string> ids;
    for (const auto& m : catalog.measures) {
        if (!ids.insert(m.id).second) {
            report.violations.push_back({"measure " + m.id, "duplicate measure id"});
        }
        if (m.cost < 0.0) {
            report.violations.push_back({"measure " + m.id, "cost must be >= 0"});
        }
    }
    for (const auto& [a, b] : catalog.excludes) {
        if (a == b) {
            report.violations.push_back({"excludes", "pair (" + a + ", " + b + ") is reflexive"});
        }
        if (!ids.count(a) || !ids.count(b)) {
            report.violations.push_back(
                {"excludes", "pair (" + a + ", " + b + ") references unknown measure"});
        }
    }
    for (const auto& [id, required] : catalog.prerequisites) {
        if (!ids.count(id)) {
            report.violations.push_back({"requires", "unknown measure '" + id + "'"});
        }
        for (const auto& r : required) {
            if (!ids.count(r)) {
                report.violations.push_back(
                    {"requires", "measure '" + id + "' requires unknown measure '" + r + "'"});
            }
        }
    }
    for (const auto& group : catalog.at_least_one) {
        if (group.empty()) {
            report.violations.push_back({"at_least_one", "empty group"});
        }
        for (const auto& id : group) {
            if (!ids.count(id)) {
                report.violations.push_back({"at_least_one", "unknown measure '" + id + "'"});
            }
        }
    }
    return report;
}

Solution Solution::of(std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return Solution{std::move(ids)};
}

bool Solution::contains(const std::string& id) const {
    return std::binary_search(measure_ids.begin(), measure_ids.end(), id);
}

Solution Solution::with(const std::string& id) const {
    Solution s = *this;
    const auto it = std::lower_bound(s.measure_ids.begin(), s.measure_ids.end(), id);
    if (it == s.measure_ids.end() || *it != id) {
        s.measure_ids.insert(it, id);
    }
    return s;
}

Solution Solution::without(const std::string& id) const {
    Solution s = *this;
    const auto it = std::lower_bound(s.measure_ids.begin(), s.measure_ids.end(), id);
    if (it != s.measure_ids.end() && *it == id) {
        s.measure_ids.erase(it);
    }
    return s;
}

namespace {

const Measure& member(const MeasureCatalog& catalog, const std::string& id) {
    const Measure* m = catalog.find(id);
    if (m == nullptr) {
        throw MeasureError("measure '" + id + "' is not in the catalog");
    }
    return *m;
}

void apply_one(Network& net, const NetworkIndex& idx, const Measure& m) {
    switch (m.kind) {
        case MeasureKind::replace_line: {
            net.lines[idx.line.at(m.target)].std_type = m.std_type;
            break;
        }
        case MeasureKind::open_switch: {
            net.switches[idx.switch_by_id.at(m.target)].closed = false;
            break;
        }
        case MeasureKind::new_cabinet_parallel_line:
            net.buses[idx.bus.at(m.to_bus)].is_switching_cabinet = true;
            [[fallthrough]];
        case MeasureKind::parallel_line:
        case MeasureKind::new_line_trail: {
            Line line;
            line.id = m.id;
            line.from_bus = m.from_bus;
            line.to_bus = m.to_bus;
            line.length = m.length_km;
            line.std_type = m.std_type;
            net.lines.push_back(std::move(line));
            break;
        }
        case MeasureKind::new_substation_split: {
            Transformer t;
            t.id = m.id;
            t.hv_bus = net.source.bus_id;
            t.lv_bus = m.target;
            t.rated_power = m.transformer.rated_power;
            t.short_circuit_voltage = m.transformer.short_circuit_voltage;
            t.short_circuit_losses = m.transformer.short_circuit_losses;
            net.transformers.push_back(std::move(t));
            for (const auto& line_id : m.boundary_line_ids) {
                net.lines[idx.line.at(line_id)].in_service = false;
            }
            break;
        }
        case MeasureKind::replace_transformer: {
            Transformer& t = net.transformers[idx.transformer.at(m.target)];
            t.rated_power = m.transformer.rated_power;
            t.short_circuit_voltage = m.transformer.short_circuit_voltage;
            t.short_circuit_losses = m.transformer.short_circuit_losses;
            break;
        }
        case MeasureKind::change_tap: {
            net.transformers[idx.transformer.at(m.target)].tap_position = m.tap_position;
            break;
        }
    }
}

}

Network apply(const Network& base, const Solution& solution, const MeasureCatalog& catalog) {
    Network net = base;
    const auto idx = NetworkIndex::build(base);

    // Composition conflicts the catalog should have excluded.
    std::set<std::pair<MeasureKind, std::string>> touched;
    for (const auto& id : solution.measure_ids) {
        const Measure& m = member(catalog, id);
        if (m.kind == MeasureKind::replace_line || m.kind == MeasureKind::change_tap ||
            m.kind == MeasureKind::replace_transformer) {
            if (!touched.insert({m.kind, m.target}).second) {
                throw MeasureError("conflicting measures of kind " + std::string(to_string(m.kind)) +
                                   " on target '" + m.target + "'");
            }
        }
    }

    for (const auto& id : solution.measure_ids) {
        apply_one(net, idx, member(catalog, id));
    }
    return net;
}

double solution_cost(const Solution& solution, const MeasureCatalog& catalog) {
    double total = 0.0;
    for (const auto& id : solution.measure_ids) {
        total += member(catalog, id).cost;
    }
    return total;
}

bool satisfies_dependencies(const Solution& solution, const MeasureCatalog& catalog) {
    for (const auto& [a, b] : catalog.excludes) {
        if (solution.contains(a) && solution.contains(b)) {
            return false;
        }
    }
    for (const auto& id : solution.measure_ids) {
        const auto it = catalog.prerequisites.find(id);
        if (it == catalog.prerequisites.end()) {
            continue;
        }
        for (const auto& required : it->second) {
            if (!solution.contains(required)) {
                return false;
            }
        }
    }
    for (const auto& group : catalog.at_least_one) {
        const bool hit = std::any_of(group.begin(), group.end(),
                                     [&](const std::string& id) { return solution.contains(id); });
        if (!hit) {
            return false;
        }
    }
    return true;
}

Solution initial_solution(const MeasureCatalog& catalog) {
    Solution s;
    if (satisfies_dependencies(s, catalog)) {
        return s;
    }
    for (const auto& group : catalog.at_least_one) {
        const bool hit = std::any_of(group.begin(), group.end(),
                                     [&](const std::string& id) { return s.contains(id); });
        if (hit) {
            continue;
        }
        // Cheapest member, ties by id for determinism.
        const Measure* best = nullptr;
        for (const auto& id : group) {
            const Measure& m = member(catalog, id);
            if (best == nullptr || m.cost < best->cost || (m.cost == best->cost && m.id < best->id)) {
                best = &m;
            }
        }
        s = s.with(best->id);
        // Pull in prerequisites transitively.
        std::vector<std::string> pending{best->id};
        while (!pending.empty()) {
            const auto id = pending.back();
            pending.pop_back();
            const auto it = catalog.prerequisites.find(id);
            if (it == catalog.prerequisites.end()) {
                continue;
            }
            for (const auto& required : it->second) {
                if (!s.contains(required)) {
                    s = s.with(required);
                    pending.push_back(required);
                }
            }
        }
    }
    if (!satisfies_dependencies(s, catalog)) {
        throw MeasureError(
            "no dependency-satisfying initial solution found; supply one explicitly");
    }
    return s;
}

}
