#include "gridplan/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gridplan {

namespace {

template <typename T, typename GetId>
void check_unique_ids(const std::vector<T>& items, const char* element_class, GetId get_id,
                      std::vector<Violation>& out) {
    std::set<std::string> seen;
    for (const auto& item : items) {
        if (!seen.insert(get_id(item)).second) {
            out.push_back({std::string(element_class) + " " + get_id(item),
                           std::string("duplicate ") + element_class + " id '" + get_id(item) + "'"});
        }
    }
}

}

ValidationReport validate(const Network& net) {
    ValidationReport report;
    auto& v = report.violations;

    std::set<std::string> bus_ids;
    for (const auto& b : net.buses) {
        bus_ids.insert(b.id);
    }
    auto bus_exists = [&](const std::string& id) { return bus_ids.count(id) > 0; };

    check_unique_ids(net.buses, "bus", [](const Bus& b) { return b.id; }, v);
    check_unique_ids(net.lines, "line", [](const Line& l) { return l.id; }, v);
    check_unique_ids(net.transformers, "transformer", [](const Transformer& t) { return t.id; }, v);
    check_unique_ids(net.switches, "switch", [](const Switch& s) { return s.id; }, v);
    check_unique_ids(net.loads, "load", [](const Load& l) { return l.id; }, v);
    check_unique_ids(net.generators, "generator", [](const Generator& g) { return g.id; }, v);
    check_unique_ids(net.line_type_catalog, "line_type", [](const LineStandardType& t) { return t.name; }, v);

    for (const auto& b : net.buses) {
        if (!(b.nominal_voltage > 0.0)) {
            v.push_back({"bus " + b.id, "nominal_voltage must be > 0"});
        }
    }

    if (!bus_exists(net.source.bus_id)) {
        v.push_back({"source", "source bus '" + net.source.bus_id + "' does not exist"});
    }
    if (!(net.source.voltage_set_point > 0.0)) {
        v.push_back({"source", "voltage_set_point must be > 0"});
    }

    std::set<std::string> type_names;
    std::set<int> ranks;
    for (const auto& t : net.line_type_catalog) {
        type_names.insert(t.name);
        if (t.r_per_km < 0.0 || t.x_per_km < 0.0) {
            v.push_back({"line_type " + t.name, "impedance per km must be >= 0"});
        }
        if (!(t.max_current > 0.0)) {
            v.push_back({"line_type " + t.name, "max_current must be > 0"});
        }
        if (!ranks.insert(t.diameter_rank).second) {
            v.push_back({"line_type " + t.name,
                         "diameter_rank " + std::to_string(t.diameter_rank) +
                             " is not unique; the catalog must be strictly ordered"});
        }
    }

    std::set<std::string> line_ids;
    for (const auto& l : net.lines) {
        line_ids.insert(l.id);
        if (!bus_exists(l.from_bus)) {
            v.push_back({"line " + l.id, "from_bus '" + l.from_bus + "' does not exist"});
        }
        if (!bus_exists(l.to_bus)) {
            v.push_back({"line " + l.id, "to_bus '" + l.to_bus + "' does not exist"});
        }
        if (l.from_bus == l.to_bus) {
            v.push_back({"line " + l.id, "from_bus and to_bus must differ"});
        }
        if (!(l.length > 0.0)) {
            v.push_back({"line " + l.id, "length must be > 0"});
        }
        if (!(l.max_loading > 0.0)) {
            v.push_back({"line " + l.id, "max_loading must be > 0"});
        }
        if (!type_names.count(l.std_type)) {
            v.push_back({"line " + l.id, "std_type '" + l.std_type + "' not in line type catalog"});
        }
    }

    for (const auto& t : net.transformers) {
        if (!bus_exists(t.hv_bus)) {
            v.push_back({"transformer " + t.id, "hv_bus '" + t.hv_bus + "' does not exist"});
        }
        if (!bus_exists(t.lv_bus)) {
            v.push_back({"transformer " + t.id, "lv_bus '" + t.lv_bus + "' does not exist"});
        }
        if (!(t.rated_power > 0.0)) {
            v.push_back({"transformer " + t.id, "rated_power must be > 0"});
        }
        if (t.tap_position < t.tap_min || t.tap_position > t.tap_max) {
            v.push_back({"transformer " + t.id, "tap_position outside [tap_min, tap_max]"});
        }
        if (!(t.max_loading > 0.0)) {
            v.push_back({"transformer " + t.id, "max_loading must be > 0"});
        }
    }

    for (const auto& s : net.switches) {
        if (!line_ids.count(s.line_id)) {
            v.push_back({"switch " + s.id, "line '" + s.line_id + "' does not exist"});
            continue;
        }
        if (!bus_exists(s.bus_id)) {
            v.push_back({"switch " + s.id, "bus '" + s.bus_id + "' does not exist"});
            continue;
        }
        const auto it = std::find_if(net.lines.begin(), net.lines.end(),
                                     [&](const Line& l) { return l.id == s.line_id; });
        if (it != net.lines.end() && it->from_bus != s.bus_id && it->to_bus != s.bus_id) {
            v.push_back({"switch " + s.id,
                         "bus '" + s.bus_id + "' is not an endpoint of line '" + s.line_id + "'"});
        }
    }

    for (const auto& l : net.loads) {
        if (!bus_exists(l.bus)) {
            v.push_back({"load " + l.id, "bus '" + l.bus + "' does not exist"});
        }
    }
    for (const auto& g : net.generators) {
        if (!bus_exists(g.bus)) {
            v.push_back({"generator " + g.id, "bus '" + g.bus + "' does not exist"});
        }
    }

    return report;
}

NetworkIndex NetworkIndex::build(const Network& net) {
    NetworkIndex idx;
    for (std::size_t i = 0; i < net.buses.size(); ++i) {
        idx.bus.emplace(net.buses[i].id, i);
    }
    for (std::size_t i = 0; i < net.lines.size(); ++i) {
        idx.line.emplace(net.lines[i].id, i);
    }
    for (std::size_t i = 0; i < net.transformers.size(); ++i) {
        idx.transformer.emplace(net.transformers[i].id, i);
    }
    for (std::size_t i = 0; i < net.switches.size(); ++i) {
        idx.switch_by_id.emplace(net.switches[i].id, i);
        idx.switches_on_line[net.switches[i].line_id].push_back(i);
    }
    for (std::size_t i = 0; i < net.line_type_catalog.size(); ++i) {
        idx.line_type.emplace(net.line_type_catalog[i].name, i);
    }
    for (std::size_t i = 0; i < net.loads.size(); ++i) {
        idx.loads_on_bus[net.loads[i].bus].push_back(i);
    }
    for (std::size_t i = 0; i < net.generators.size(); ++i) {
        idx.generators_on_bus[net.generators[i].bus].push_back(i);
    }
    return idx;
}

bool line_conducting(const Network& net, const NetworkIndex& idx, const Line& line) {
    if (!line.in_service) {
        return false;
    }
    const auto it = idx.switches_on_line.find(line.id);
    if (it == idx.switches_on_line.end()) {
        return true;
    }
    return std::all_of(it->second.begin(), it->second.end(),
                       [&](std::size_t si) { return net.switches[si].closed; });
}

std::vector<std::string> load_point_buses(const Network& net) {
    std::set<std::string> seen;
    std::vector<std::string> out;
    for (const auto& l : net.loads) {
        if (seen.insert(l.bus).second) {
            out.push_back(l.bus);
        }
    }
    return out;
}

double airline_distance_km(const Bus& a, const Bus& b) {
    const auto& pa = a.position.value();
    const auto& pb = b.position.value();
    const double dx = pa[0] - pb[0];
    const double dy = pa[1] - pb[1];
    return std::sqrt(dx * dx + dy * dy) / 1000.0;
}

}
