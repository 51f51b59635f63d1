#include <algorithm>
#include <limits>
#include <map>
#include <queue>

#include "gridplan/error.hpp"
#include "gridplan/measures.hpp"
#include "gridplan/topology.hpp"

namespace gridplan {

namespace {

struct DiscoveryContext {
    const Network& net;
    const ConstraintReport& report;
    const PlanningRules& rules;
    NetworkIndex idx;
    MeasureCatalog catalog;

    // Lines on some path from a violated load point to the source, plus the
    // node sequences of those paths (bus ids ordered from the load point
    // towards the source).
    std::set<std::string> relevant_lines;
    std::vector<std::vector<std::string>> violated_paths;

    std::map<std::string, std::vector<std::string>> replace_ids_by_line;
};

bool enabled(const DiscoveryContext& ctx, MeasureKind kind) {
    return ctx.rules.enabled.count(kind) > 0;
}

void add_exclude(MeasureCatalog& catalog, const std::string& a, const std::string& b) {
    auto pair = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    if (std::find(catalog.excludes.begin(), catalog.excludes.end(), pair) ==
        catalog.excludes.end()) {
        catalog.excludes.push_back(std::move(pair));
    }
}

const LineStandardType& type_of(const DiscoveryContext& ctx, const Line& line) {
    return ctx.net.line_type_catalog[ctx.idx.line_type.at(line.std_type)];
}

/// Catalog types strictly larger than the line's current type, ordered by rank.
std::vector<const LineStandardType*> higher_types(const DiscoveryContext& ctx, const Line& line) {
    const int current = type_of(ctx, line).diameter_rank;
    std::vector<const LineStandardType*> out;
    for (const auto& t : ctx.net.line_type_catalog) {
        if (t.diameter_rank > current) {
            out.push_back(&t);
        }
    }
    std::sort(out.begin(), out.end(), [](const LineStandardType* a, const LineStandardType* b) {
        return a->diameter_rank < b->diameter_rank;
    });
    return out;
}

const LineStandardType& largest_type(const DiscoveryContext& ctx) {
    return *std::max_element(ctx.net.line_type_catalog.begin(), ctx.net.line_type_catalog.end(),
                             [](const LineStandardType& a, const LineStandardType& b) {
                                 return a.diameter_rank < b.diameter_rank;
                             });
}

const LineStandardType& added_line_type(const DiscoveryContext& ctx) {
    if (ctx.rules.added_line_std_type.empty()) {
        return largest_type(ctx);
    }
    const auto it = ctx.idx.line_type.find(ctx.rules.added_line_std_type);
    if (it == ctx.idx.line_type.end()) {
        throw ConfigError("added_line_std_type '" + ctx.rules.added_line_std_type +
                          "' not in the line type catalog");
    }
    return ctx.net.line_type_catalog[it->second];
}

const Bus& positioned_bus(const DiscoveryContext& ctx, const std::string& bus_id,
                          const char* rule_name) {
    const Bus& bus = ctx.net.buses[ctx.idx.bus.at(bus_id)];
    if (!bus.position.has_value()) {
        throw ConfigError(std::string("rule '") + rule_name + "' needs a position for bus '" +
                          bus_id + "'");
    }
    return bus;
}

void collect_violated_paths(DiscoveryContext& ctx) {
    for (const auto& lp : ctx.report.voltage_violated_load_points) {
        const auto branch_ids = path_to_source(ctx.net, lp);
        std::vector<std::string> nodes{lp};
        // path_to_source returns branch ids from the bus towards the source;
        // rebuild the bus sequence alongside.
        std::string at = lp;
        for (const auto& branch : branch_ids) {
            const auto line_it = ctx.idx.line.find(branch);
            if (line_it != ctx.idx.line.end()) {
                const Line& l = ctx.net.lines[line_it->second];
                ctx.relevant_lines.insert(l.id);
                at = (l.from_bus == at) ? l.to_bus : l.from_bus;
            } else {
                const Transformer& t = ctx.net.transformers[ctx.idx.transformer.at(branch)];
                at = (t.lv_bus == at) ? t.hv_bus : t.lv_bus;
            }
            nodes.push_back(at);
        }
        ctx.violated_paths.push_back(std::move(nodes));
    }
    for (const auto& line_id : ctx.report.overloaded_line_ids) {
        ctx.relevant_lines.insert(line_id);
    }
}

bool replace_candidate(const DiscoveryContext& ctx, const Line& line, bool forced) {
    if (forced) {
        return true;
    }
    if (line.is_customer_access && line.length <= ctx.rules.customer_access_min_length_km) {
        return false;
    }
    if (ctx.rules.replace_line_scope == ReplaceLineScope::all_lines) {
        return true;
    }
    return ctx.relevant_lines.count(line.id) > 0;
}

void discover_replace_line(DiscoveryContext& ctx) {
    const bool rule_on = enabled(ctx, MeasureKind::replace_line);
    const std::set<std::string> forced(ctx.rules.must_address_line_ids.begin(),
                                       ctx.rules.must_address_line_ids.end());
    if (!rule_on && forced.empty()) {
        return;
    }
    for (const auto& line : ctx.net.lines) {
        const bool is_forced = forced.count(line.id) > 0;
        if (!rule_on && !is_forced) {
            continue;
        }
        if (!replace_candidate(ctx, line, is_forced)) {
            continue;
        }
        const auto types = higher_types(ctx, line);
        std::vector<std::string> ids;
        for (const auto* t : types) {
            Measure m;
            m.kind = MeasureKind::replace_line;
            m.target = line.id;
            m.std_type = t->name;
            m.length_km = line.length;
            m.cost = line.length * t->cost_per_km;
            m.id = types.size() == 1
                       ? "REPLACE_LINE_" + line.id
                       : "REPLACE_LINE_" + line.id + "_R" + std::to_string(t->diameter_rank);
            ids.push_back(m.id);
            ctx.catalog.measures.push_back(std::move(m));
        }
        for (std::size_t i = 0; i < ids.size(); ++i) {
            for (std::size_t j = i + 1; j < ids.size(); ++j) {
                add_exclude(ctx.catalog, ids[i], ids[j]);
            }
        }
        if (!ids.empty()) {
            ctx.replace_ids_by_line[line.id] = std::move(ids);
        }
    }
}

/// True if removing the line disconnects some load point from the source in
/// the "potential" graph: every in-service line regardless of switch state,
/// all transformers, and the configured trail candidates.
bool line_is_stub_bridge(const DiscoveryContext& ctx, const std::string& removed_line_id) {
    std::map<std::string, std::vector<std::string>> adjacency;
    auto add = [&](const std::string& a, const std::string& b) {
        adjacency[a].push_back(b);
        adjacency[b].push_back(a);
    };
    for (const auto& line : ctx.net.lines) {
        if (line.in_service && line.id != removed_line_id) {
            add(line.from_bus, line.to_bus);
        }
    }
    for (const auto& t : ctx.net.transformers) {
        add(t.hv_bus, t.lv_bus);
    }
    if (enabled(ctx, MeasureKind::new_line_trail)) {
        for (const auto& trail : ctx.rules.trail_candidates) {
            add(trail.from_bus, trail.to_bus);
        }
    }

    std::set<std::string> reached;
    std::vector<std::string> stack{ctx.net.source.bus_id};
    reached.insert(ctx.net.source.bus_id);
    while (!stack.empty()) {
        const auto u = stack.back();
        stack.pop_back();
        for (const auto& w : adjacency[u]) {
            if (reached.insert(w).second) {
                stack.push_back(w);
            }
        }
    }
    for (const auto& lp : load_point_buses(ctx.net)) {
        if (!reached.count(lp)) {
            return true;
        }
    }
    return false;
}

void discover_open_switch(DiscoveryContext& ctx) {
    if (!enabled(ctx, MeasureKind::open_switch)) {
        return;
    }
    std::map<std::string, std::vector<std::string>> ids_by_line;
    std::set<std::string> stub_lines;
    std::set<std::string> checked;
    for (const auto& sw : ctx.net.switches) {
        if (!sw.closed) {
            continue;
        }
        if (checked.insert(sw.line_id).second && line_is_stub_bridge(ctx, sw.line_id)) {
            stub_lines.insert(sw.line_id);
        }
        if (stub_lines.count(sw.line_id)) {
            continue; // switches on stubs can never be opened
        }
        Measure m;
        m.kind = MeasureKind::open_switch;
        m.target = sw.id;
        m.cost = ctx.rules.switch_cost;
        m.id = "OPEN_SWITCH_" + sw.id;
        ids_by_line[sw.line_id].push_back(m.id);
        ctx.catalog.measures.push_back(std::move(m));
    }
    // At most one open switch per line section.
    for (const auto& [line_id, ids] : ids_by_line) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
            for (std::size_t j = i + 1; j < ids.size(); ++j) {
                add_exclude(ctx.catalog, ids[i], ids[j]);
            }
        }
    }
}

bool is_cabinet(const DiscoveryContext& ctx, const std::string& bus_id) {
    return ctx.net.buses[ctx.idx.bus.at(bus_id)].is_switching_cabinet;
}

/// Lines of the sub-path between two consecutive path nodes.
const Line* connecting_line(const DiscoveryContext& ctx, const std::string& a,
                            const std::string& b) {
    for (const auto& line : ctx.net.lines) {
        if ((line.from_bus == a && line.to_bus == b) || (line.from_bus == b && line.to_bus == a)) {
            return &line;
        }
    }
    return nullptr;
}

struct Span {
    std::string from; // endpoint nearer the source
    std::string to;   // endpoint nearer the violated load point
    std::vector<const Line*> lines;
    double length = 0.0;
};

/// Walks a violated path and cuts it into spans between admissible anchor
/// buses. `anchor` decides which buses may serve as span endpoints.
template <typename AnchorFn>
std::vector<Span> spans_along_paths(const DiscoveryContext& ctx, AnchorFn anchor) {
    std::vector<Span> spans;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& path : ctx.violated_paths) {
        std::optional<std::size_t> last_anchor;
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (!anchor(path[i])) {
                continue;
            }
            if (last_anchor.has_value()) {
                Span span;
                span.to = path[*last_anchor];
                span.from = path[i];
                bool ok = true;
                for (std::size_t k = *last_anchor; k < i; ++k) {
                    const Line* line = connecting_line(ctx, path[k], path[k + 1]);
                    if (line == nullptr) {
                        ok = false; // transformer on the sub-path
                        break;
                    }
                    span.lines.push_back(line);
                    span.length += line->length;
                }
                if (ok && seen.insert({span.from, span.to}).second) {
                    spans.push_back(std::move(span));
                }
            }
            last_anchor = i;
        }
    }
    return spans;
}

/// Prerequisites of a span line: parallels demand the covered lines already
/// at maximal diameter. Returns false if a needed replacement measure is not
/// in the catalog, in which case the span measure is not generated.
bool span_prerequisites(const DiscoveryContext& ctx, const Span& span,
                        std::set<std::string>& out) {
    const int max_rank = largest_type(ctx).diameter_rank;
    for (const Line* line : span.lines) {
        if (type_of(ctx, *line).diameter_rank == max_rank) {
            continue;
        }
        const auto it = ctx.replace_ids_by_line.find(line->id);
        if (it == ctx.replace_ids_by_line.end()) {
            return false;
        }
        // The replacement with the largest rank is listed last.
        out.insert(it->second.back());
    }
    return true;
}

void discover_parallel_lines(DiscoveryContext& ctx) {
    if (!enabled(ctx, MeasureKind::parallel_line)) {
        return;
    }
    const auto& type = added_line_type(ctx);
    const auto spans = spans_along_paths(
        ctx, [&](const std::string& bus) { return is_cabinet(ctx, bus); });
    for (const auto& span : spans) {
        std::set<std::string> needs;
        if (!span_prerequisites(ctx, span, needs)) {
            continue;
        }
        Measure m;
        m.kind = MeasureKind::parallel_line;
        m.from_bus = span.from;
        m.to_bus = span.to;
        m.std_type = type.name;
        m.length_km = span.length;
        m.cost = span.length * type.cost_per_km;
        m.id = "PARALLEL_LINE_" + span.from + "_" + span.to;
        if (!needs.empty()) {
            ctx.catalog.prerequisites[m.id] = std::move(needs);
        }
        ctx.catalog.measures.push_back(std::move(m));
    }
}

void discover_new_cabinet_lines(DiscoveryContext& ctx) {
    if (!enabled(ctx, MeasureKind::new_cabinet_parallel_line)) {
        return;
    }
    const auto& type = added_line_type(ctx);
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& path : ctx.violated_paths) {
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (is_cabinet(ctx, path[i]) || path[i] == ctx.net.source.bus_id) {
                continue;
            }
            // New cabinet at path[i], paralleled to the nearest cabinet
            // towards the source.
            Span span;
            span.to = path[i];
            bool ok = false;
            for (std::size_t j = i; j + 1 < path.size(); ++j) {
                const Line* line = connecting_line(ctx, path[j], path[j + 1]);
                if (line == nullptr) {
                    break; // transformer in between
                }
                span.lines.push_back(line);
                span.length += line->length;
                if (is_cabinet(ctx, path[j + 1])) {
                    span.from = path[j + 1];
                    ok = true;
                    break;
                }
            }
            if (!ok || !seen.insert({span.from, span.to}).second) {
                continue;
            }
            std::set<std::string> needs;
            if (!span_prerequisites(ctx, span, needs)) {
                continue;
            }
            Measure m;
            m.kind = MeasureKind::new_cabinet_parallel_line;
            m.from_bus = span.from;
            m.to_bus = span.to; // gains the cabinet
            m.std_type = type.name;
            m.length_km = span.length;
            m.cost = span.length * type.cost_per_km + ctx.rules.cabinet_cost;
            m.id = "NEW_CABINET_LINE_" + span.from + "_" + span.to;
            if (!needs.empty()) {
                ctx.catalog.prerequisites[m.id] = std::move(needs);
            }
            ctx.catalog.measures.push_back(std::move(m));
        }
    }
}

/// Shortest network distances in km from `start`, over conducting branches
/// (transformers count as zero length).
std::map<std::string, double> network_distances(const DiscoveryContext& ctx,
                                                const std::string& start) {
    std::map<std::string, std::vector<std::pair<std::string, double>>> adjacency;
    for (const auto& line : ctx.net.lines) {
        if (!line_conducting(ctx.net, ctx.idx, line)) {
            continue;
        }
        adjacency[line.from_bus].push_back({line.to_bus, line.length});
        adjacency[line.to_bus].push_back({line.from_bus, line.length});
    }
    for (const auto& t : ctx.net.transformers) {
        adjacency[t.hv_bus].push_back({t.lv_bus, 0.0});
        adjacency[t.lv_bus].push_back({t.hv_bus, 0.0});
    }
    std::map<std::string, double> dist;
    using Item = std::pair<double, std::string>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[start] = 0.0;
    queue.push({0.0, start});
    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (d > dist.at(u)) {
            continue;
        }
        for (const auto& [w, len] : adjacency[u]) {
            const double nd = d + len;
            const auto it = dist.find(w);
            if (it == dist.end() || nd < it->second) {
                dist[w] = nd;
                queue.push({nd, w});
            }
        }
    }
    return dist;
}

void discover_substation_splits(DiscoveryContext& ctx) {
    if (!enabled(ctx, MeasureKind::new_substation_split)) {
        return;
    }
    if (ctx.rules.transformer_catalog.empty()) {
        throw ConfigError("rule 'new_substation_split' needs a transformer_catalog entry");
    }
    // Reference point: the existing substation (LV bus of the first
    // transformer), or the source bus in transformerless networks.
    const std::string reference_id =
        ctx.net.transformers.empty() ? ctx.net.source.bus_id : ctx.net.transformers.front().lv_bus;
    const Bus& reference = positioned_bus(ctx, reference_id, "new_substation_split");

    const auto dist_source = network_distances(ctx, reference_id);
    const auto& option = ctx.rules.transformer_catalog.front();

    for (const auto& bus : ctx.net.buses) {
        if (!bus.is_switching_cabinet || bus.id == reference_id) {
            continue;
        }
        const Bus& site = positioned_bus(ctx, bus.id, "new_substation_split");
        if (airline_distance_km(site, reference) <= ctx.rules.new_substation_min_distance_km) {
            continue;
        }
        const auto dist_site = network_distances(ctx, bus.id);

        // Nearest-by-network-distance assignment; the boundary lines to open
        // are stored on the measure so application is deterministic.
        std::set<std::string> site_side;
        for (const auto& other : ctx.net.buses) {
            const auto ds = dist_site.find(other.id);
            const auto dr = dist_source.find(other.id);
            if (ds == dist_site.end()) {
                continue;
            }
            if (dr == dist_source.end() || ds->second < dr->second) {
                site_side.insert(other.id);
            }
        }
        site_side.insert(bus.id);

        std::vector<std::string> boundary;
        bool boundary_ok = true;
        for (const auto& line : ctx.net.lines) {
            if (!line_conducting(ctx.net, ctx.idx, line)) {
                continue;
            }
            if (site_side.count(line.from_bus) != site_side.count(line.to_bus)) {
                boundary.push_back(line.id);
            }
        }
        for (const auto& t : ctx.net.transformers) {
            if (site_side.count(t.hv_bus) != site_side.count(t.lv_bus)) {
                boundary_ok = false; // cannot open a transformer
            }
        }
        if (!boundary_ok || boundary.empty()) {
            continue;
        }

        Measure m;
        m.kind = MeasureKind::new_substation_split;
        m.target = bus.id;
        m.transformer = option.spec;
        m.boundary_line_ids = std::move(boundary);
        m.cost = ctx.rules.substation_cost +
                 airline_distance_km(site, reference) * ctx.rules.trail_length_factor *
                     ctx.rules.mv_connection_cost_per_km +
                 option.cost;
        m.id = "NEW_SUBSTATION_" + bus.id;
        ctx.catalog.measures.push_back(std::move(m));
    }
}

void discover_transformer_measures(DiscoveryContext& ctx) {
    if (enabled(ctx, MeasureKind::replace_transformer)) {
        for (const auto& t : ctx.net.transformers) {
            std::vector<std::string> ids;
            for (const auto& option : ctx.rules.transformer_catalog) {
                if (option.spec.rated_power <= t.rated_power) {
                    continue;
                }
                Measure m;
                m.kind = MeasureKind::replace_transformer;
                m.target = t.id;
                m.transformer = option.spec;
                m.cost = option.cost;
                m.id = "REPLACE_TRAFO_" + t.id + "_" + option.spec.name;
                ids.push_back(m.id);
                ctx.catalog.measures.push_back(std::move(m));
            }
            for (std::size_t i = 0; i < ids.size(); ++i) {
                for (std::size_t j = i + 1; j < ids.size(); ++j) {
                    add_exclude(ctx.catalog, ids[i], ids[j]);
                }
            }
        }
    }
    if (enabled(ctx, MeasureKind::change_tap)) {
        for (const auto& t : ctx.net.transformers) {
            std::vector<std::string> ids;
            std::vector<int> positions;
            if (ctx.rules.tap_positions.has_value()) {
                positions = *ctx.rules.tap_positions;
            } else {
                for (int p = t.tap_min; p <= t.tap_max; ++p) {
                    positions.push_back(p);
                }
            }
            for (const int pos : positions) {
                if (pos == t.tap_position || pos < t.tap_min || pos > t.tap_max) {
                    continue;
                }
                Measure m;
                m.kind = MeasureKind::change_tap;
                m.target = t.id;
                m.tap_position = pos;
                m.cost = ctx.rules.tap_change_cost;
                m.id = "SET_TAP_" + t.id + "_" + std::to_string(pos);
                ids.push_back(m.id);
                ctx.catalog.measures.push_back(std::move(m));
            }
            for (std::size_t i = 0; i < ids.size(); ++i) {
                for (std::size_t j = i + 1; j < ids.size(); ++j) {
                    add_exclude(ctx.catalog, ids[i], ids[j]);
                }
            }
        }
    }
}

void discover_line_trails(DiscoveryContext& ctx) {
    if (!enabled(ctx, MeasureKind::new_line_trail)) {
        return;
    }
    for (const auto& trail : ctx.rules.trail_candidates) {
        const Bus& a = positioned_bus(ctx, trail.from_bus, "new_line_trail");
        const Bus& b = positioned_bus(ctx, trail.to_bus, "new_line_trail");
        const LineStandardType& type =
            trail.std_type.empty()
                ? added_line_type(ctx)
                : ctx.net.line_type_catalog[ctx.idx.line_type.at(trail.std_type)];
        Measure m;
        m.kind = MeasureKind::new_line_trail;
        m.from_bus = trail.from_bus;
        m.to_bus = trail.to_bus;
        m.std_type = type.name;
        m.length_km = airline_distance_km(a, b) * ctx.rules.trail_length_factor;
        m.cost = m.length_km * type.cost_per_km;
        m.id = "NEW_TRAIL_" + trail.from_bus + "_" + trail.to_bus;
        ctx.catalog.measures.push_back(std::move(m));
    }
}

void add_must_address_groups(DiscoveryContext& ctx) {
    for (const auto& line_id : ctx.rules.must_address_line_ids) {
        if (ctx.idx.line.find(line_id) == ctx.idx.line.end()) {
            throw ConfigError("must_address_line_ids: line '" + line_id + "' does not exist");
        }
        std::set<std::string> group;
        const auto it = ctx.replace_ids_by_line.find(line_id);
        if (it != ctx.replace_ids_by_line.end()) {
            group.insert(it->second.begin(), it->second.end());
        }
        for (const auto& m : ctx.catalog.measures) {
            if (m.kind != MeasureKind::open_switch) {
                continue;
            }
            const auto& sw = ctx.net.switches[ctx.idx.switch_by_id.at(m.target)];
            if (sw.line_id == line_id) {
                group.insert(m.id);
            }
        }
        if (group.empty()) {
            throw ConfigError("line '" + line_id +
                              "' must be addressed but no replacement or switch measure exists");
        }
        ctx.catalog.at_least_one.push_back(std::move(group));
    }
}

}

MeasureCatalog discover_measures(const Network& net, const ConstraintReport& report,
                                 const PlanningRules& rules) {
    DiscoveryContext ctx{net, report, rules, NetworkIndex::build(net), {}, {}, {}, {}};

    collect_violated_paths(ctx);
    discover_replace_line(ctx);
    discover_open_switch(ctx);
    discover_parallel_lines(ctx);
    discover_new_cabinet_lines(ctx);
    discover_substation_splits(ctx);
    discover_transformer_measures(ctx);
    discover_line_trails(ctx);
    add_must_address_groups(ctx);

    return std::move(ctx.catalog);
}

}
