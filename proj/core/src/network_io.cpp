#include "gridplan/network_io.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "gridplan/error.hpp"

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

const json& require(const json& object, const char* key, const std::string& where) {
    const auto it = object.find(key);
    if (it == object.end()) {
        throw ParseError("missing key '" + std::string(key) + "' in " + where);
    }
    return *it;
}

double number(const json& object, const char* key, const std::string& where) {
    const json& v = require(object, key, where);
    if (!v.is_number()) {
        throw ParseError("key '" + std::string(key) + "' in " + where + " must be a number");
    }
    return v.get<double>();
}

double number_or(const json& object, const char* key, double fallback) {
    const auto it = object.find(key);
    return it == object.end() ? fallback : it->get<double>();
}

std::string text(const json& object, const char* key, const std::string& where) {
    const json& v = require(object, key, where);
    if (!v.is_string()) {
        throw ParseError("key '" + std::string(key) + "' in " + where + " must be a string");
    }
    return v.get<std::string>();
}

bool flag_or(const json& object, const char* key, bool fallback) {
    const auto it = object.find(key);
    return it == object.end() ? fallback : it->get<bool>();
}

InjectionKind injection_kind(const std::string& name, const std::string& where) {
    if (name == "load") return InjectionKind::load;
    if (name == "pv") return InjectionKind::pv;
    if (name == "wind") return InjectionKind::wind;
    if (name == "other") return InjectionKind::other;
    throw ParseError("unknown kind '" + name + "' in " + where);
}

const char* to_string(InjectionKind kind) {
    switch (kind) {
        case InjectionKind::load: return "load";
        case InjectionKind::pv: return "pv";
        case InjectionKind::wind: return "wind";
        case InjectionKind::other: return "other";
    }
    return "?";
}

Network parse(const json& root) {
    Network net;
    reject_unknown_keys(root,
                        {"name", "buses", "lines", "line_types", "transformers", "switches",
                         "loads", "generators", "source"},
                        "network");
    net.name = root.value("name", "");

    for (const auto& j : require(root, "buses", "network")) {
        const std::string where = "bus '" + j.value("id", "?") + "'";
        reject_unknown_keys(j, {"id", "nominal_voltage", "is_switching_cabinet", "position"},
                            where);
        Bus b;
        b.id = text(j, "id", where);
        b.nominal_voltage = number(j, "nominal_voltage", where);
        b.is_switching_cabinet = flag_or(j, "is_switching_cabinet", false);
        if (j.contains("position")) {
            const auto& p = j.at("position");
            if (!p.is_array() || p.size() != 2) {
                throw ParseError("position of " + where + " must be [x, y]");
            }
            b.position = Position{p[0].get<double>(), p[1].get<double>()};
        }
        net.buses.push_back(std::move(b));
    }

    for (const auto& j : require(root, "line_types", "network")) {
        const std::string where = "line_type '" + j.value("name", "?") + "'";
        reject_unknown_keys(
            j, {"name", "r_per_km", "x_per_km", "max_current", "cost_per_km", "diameter_rank"},
            where);
        LineStandardType t;
        t.name = text(j, "name", where);
        t.r_per_km = number(j, "r_per_km", where);
        t.x_per_km = number(j, "x_per_km", where);
        t.max_current = number(j, "max_current", where);
        t.cost_per_km = number_or(j, "cost_per_km", 0.0);
        t.diameter_rank = static_cast<int>(number(j, "diameter_rank", where));
        net.line_type_catalog.push_back(std::move(t));
    }

    for (const auto& j : require(root, "lines", "network")) {
        const std::string where = "line '" + j.value("id", "?") + "'";
        reject_unknown_keys(j,
                            {"id", "from_bus", "to_bus", "length", "std_type", "max_loading",
                             "in_service", "is_customer_access"},
                            where);
        Line l;
        l.id = text(j, "id", where);
        l.from_bus = text(j, "from_bus", where);
        l.to_bus = text(j, "to_bus", where);
        l.length = number(j, "length", where);
        l.std_type = text(j, "std_type", where);
        l.max_loading = number_or(j, "max_loading", 100.0);
        l.in_service = flag_or(j, "in_service", true);
        l.is_customer_access = flag_or(j, "is_customer_access", false);
        net.lines.push_back(std::move(l));
    }

    if (root.contains("transformers")) {
        for (const auto& j : root.at("transformers")) {
            const std::string where = "transformer '" + j.value("id", "?") + "'";
            reject_unknown_keys(j,
                                {"id", "hv_bus", "lv_bus", "rated_power", "short_circuit_voltage",
                                 "short_circuit_losses", "tap_position", "tap_range", "tap_step",
                                 "max_loading"},
                                where);
            Transformer t;
            t.id = text(j, "id", where);
            t.hv_bus = text(j, "hv_bus", where);
            t.lv_bus = text(j, "lv_bus", where);
            t.rated_power = number(j, "rated_power", where);
            t.short_circuit_voltage = number(j, "short_circuit_voltage", where);
            t.short_circuit_losses = number(j, "short_circuit_losses", where);
            t.tap_position = static_cast<int>(number_or(j, "tap_position", 0.0));
            if (j.contains("tap_range")) {
                const auto& r = j.at("tap_range");
                if (!r.is_array() || r.size() != 2) {
                    throw ParseError("tap_range of " + where + " must be [min, max]");
                }
                t.tap_min = r[0].get<int>();
                t.tap_max = r[1].get<int>();
            }
            t.tap_step = number_or(j, "tap_step", 0.0);
            t.max_loading = number_or(j, "max_loading", 100.0);
            net.transformers.push_back(std::move(t));
        }
    }

    if (root.contains("switches")) {
        for (const auto& j : root.at("switches")) {
            const std::string where = "switch '" + j.value("id", "?") + "'";
            reject_unknown_keys(j, {"id", "line_id", "bus_id", "closed"}, where);
            Switch s;
            s.id = text(j, "id", where);
            s.line_id = text(j, "line_id", where);
            s.bus_id = text(j, "bus_id", where);
            s.closed = flag_or(j, "closed", true);
            net.switches.push_back(std::move(s));
        }
    }

    if (root.contains("loads")) {
        for (const auto& j : root.at("loads")) {
            const std::string where = "load '" + j.value("id", "?") + "'";
            reject_unknown_keys(j, {"id", "bus", "active_power", "reactive_power", "kind"}, where);
            Load l;
            l.id = text(j, "id", where);
            l.bus = text(j, "bus", where);
            l.active_power = number(j, "active_power", where);
            l.reactive_power = number_or(j, "reactive_power", 0.0);
            l.kind = injection_kind(j.value("kind", "load"), where);
            net.loads.push_back(std::move(l));
        }
    }

    if (root.contains("generators")) {
        for (const auto& j : root.at("generators")) {
            const std::string where = "generator '" + j.value("id", "?") + "'";
            reject_unknown_keys(j, {"id", "bus", "active_power", "reactive_power", "kind"}, where);
            Generator g;
            g.id = text(j, "id", where);
            g.bus = text(j, "bus", where);
            g.active_power = number(j, "active_power", where);
            g.reactive_power = number_or(j, "reactive_power", 0.0);
            g.kind = injection_kind(j.value("kind", "pv"), where);
            net.generators.push_back(std::move(g));
        }
    }

    const json& src = require(root, "source", "network");
    reject_unknown_keys(src, {"bus_id", "voltage_set_point"}, "source");
    net.source.bus_id = text(src, "bus_id", "source");
    net.source.voltage_set_point = number(src, "voltage_set_point", "source");

    return net;
}

json dump(const Network& net) {
    json root;
    root["name"] = net.name;
    root["source"] = {{"bus_id", net.source.bus_id},
                      {"voltage_set_point", net.source.voltage_set_point}};
    root["buses"] = json::array();
    for (const auto& b : net.buses) {
        json j{{"id", b.id},
               {"nominal_voltage", b.nominal_voltage},
               {"is_switching_cabinet", b.is_switching_cabinet}};
        if (b.position) {
            j["position"] = {(*b.position)[0], (*b.position)[1]};
        }
        root["buses"].push_back(std::move(j));
    }
    root["line_types"] = json::array();
    for (const auto& t : net.line_type_catalog) {
        root["line_types"].push_back({{"name", t.name},
                                      {"r_per_km", t.r_per_km},
                                      {"x_per_km", t.x_per_km},
                                      {"max_current", t.max_current},
                                      {"cost_per_km", t.cost_per_km},
                                      {"diameter_rank", t.diameter_rank}});
    }
    root["lines"] = json::array();
    for (const auto& l : net.lines) {
        root["lines"].push_back({{"id", l.id},
                                 {"from_bus", l.from_bus},
                                 {"to_bus", l.to_bus},
                                 {"length", l.length},
                                 {"std_type", l.std_type},
                                 {"max_loading", l.max_loading},
                                 {"in_service", l.in_service},
                                 {"is_customer_access", l.is_customer_access}});
    }
    root["transformers"] = json::array();
    for (const auto& t : net.transformers) {
        root["transformers"].push_back({{"id", t.id},
                                        {"hv_bus", t.hv_bus},
                                        {"lv_bus", t.lv_bus},
                                        {"rated_power", t.rated_power},
                                        {"short_circuit_voltage", t.short_circuit_voltage},
                                        {"short_circuit_losses", t.short_circuit_losses},
                                        {"tap_position", t.tap_position},
                                        {"tap_range", {t.tap_min, t.tap_max}},
                                        {"tap_step", t.tap_step},
                                        {"max_loading", t.max_loading}});
    }
    root["switches"] = json::array();
    for (const auto& s : net.switches) {
        root["switches"].push_back(
            {{"id", s.id}, {"line_id", s.line_id}, {"bus_id", s.bus_id}, {"closed", s.closed}});
    }
    root["loads"] = json::array();
    for (const auto& l : net.loads) {
        root["loads"].push_back({{"id", l.id},
                                 {"bus", l.bus},
                                 {"active_power", l.active_power},
                                 {"reactive_power", l.reactive_power},
                                 {"kind", to_string(l.kind)}});
    }
    root["generators"] = json::array();
    for (const auto& g : net.generators) {
        root["generators"].push_back({{"id", g.id},
                                      {"bus", g.bus},
                                      {"active_power", g.active_power},
                                      {"reactive_power", g.reactive_power},
                                      {"kind", to_string(g.kind)}});
    }
    return root;
}

}

Network parse_network(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("network JSON: ") + e.what());
    }
    try {
        return parse(root);
    } catch (const json::exception& e) {
        throw ParseError(std::string("network JSON: ") + e.what());
    }
}

Network load_network(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open network file '" + path.string() + "'");
    }
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_network(content);
}

std::string network_to_json(const Network& net) {
    return dump(net).dump(2) + "\n";
}

void save_network(const Network& net, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot write network file '" + path.string() + "'");
    }
    out << network_to_json(net);
}

}
