#include "gridplan/topology.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "gridplan/error.hpp"

namespace gridplan {

namespace {

struct Edge {
    std::size_t from;
    std::size_t to;
    bool is_line;
    std::size_t element_index;
    std::string_view id;
};

struct Graph {
    std::vector<Edge> edges;                            // conducting branches only
    std::vector<std::vector<std::size_t>> adjacency;    // bus index -> edge indices
    std::size_t source_bus = 0;
};

Graph build_graph(const Network& net, const NetworkIndex& idx) {
    Graph g;
    g.adjacency.resize(net.buses.size());
    auto add_edge = [&](std::size_t from, std::size_t to, bool is_line, std::size_t ei,
                        std::string_view id) {
        const std::size_t e = g.edges.size();
        g.edges.push_back({from, to, is_line, ei, id});
        g.adjacency[from].push_back(e);
        g.adjacency[to].push_back(e);
    };
    for (std::size_t i = 0; i < net.lines.size(); ++i) {
        const auto& l = net.lines[i];
        if (!line_conducting(net, idx, l)) {
            continue;
        }
        add_edge(idx.bus.at(l.from_bus), idx.bus.at(l.to_bus), true, i, l.id);
    }
    for (std::size_t i = 0; i < net.transformers.size(); ++i) {
        const auto& t = net.transformers[i];
        add_edge(idx.bus.at(t.hv_bus), idx.bus.at(t.lv_bus), false, i, t.id);
    }
    g.source_bus = idx.bus.at(net.source.bus_id);
    return g;
}

void require_valid(const Network& net) {
    const auto report = validate(net);
    if (!report.ok()) {
        throw TopologyError("invalid network: " + report.violations.front().element + ": " +
                            report.violations.front().message);
    }
}

}

TopologyReport analyze_topology(const Network& net) {
    require_valid(net);
    const auto idx = NetworkIndex::build(net);
    const Graph g = build_graph(net, idx);

    TopologyReport report;

    // Supplied set: DFS from the source over conducting branches.
    std::vector<bool> supplied(net.buses.size(), false);
    std::vector<std::size_t> stack{g.source_bus};
    supplied[g.source_bus] = true;
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (const std::size_t ei : g.adjacency[u]) {
            const auto& e = g.edges[ei];
            const std::size_t w = (e.from == u) ? e.to : e.from;
            if (!supplied[w]) {
                supplied[w] = true;
                stack.push_back(w);
            }
        }
    }
    for (std::size_t b = 0; b < net.buses.size(); ++b) {
        if (supplied[b]) {
            report.supplied_bus_ids.insert(net.buses[b].id);
        }
    }

    // Feeders: connected components of the supplied subgraph minus the source
    // bus. A feeder is meshed if it hangs on the source through more than one
    // branch or contains an internal cycle (detected as a DFS back edge).
    std::vector<int> component(net.buses.size(), -1);
    std::vector<Feeder> feeders;
    std::vector<bool> feeder_meshed;
    for (std::size_t start = 0; start < net.buses.size(); ++start) {
        if (!supplied[start] || start == g.source_bus || component[start] != -1) {
            continue;
        }
        const int comp = static_cast<int>(feeders.size());
        std::vector<std::string> members;
        std::vector<std::string> source_links;
        bool cycle = false;

        // Iterative DFS carrying the edge used to enter each bus.
        std::vector<std::pair<std::size_t, std::size_t>> dfs{{start, SIZE_MAX}};
        component[start] = comp;
        std::vector<bool> edge_seen(g.edges.size(), false);
        while (!dfs.empty()) {
            const auto [u, via] = dfs.back();
            dfs.pop_back();
            members.push_back(net.buses[u].id);
            for (const std::size_t ei : g.adjacency[u]) {
                if (ei == via || edge_seen[ei]) {
                    continue;
                }
                const auto& e = g.edges[ei];
                const std::size_t w = (e.from == u) ? e.to : e.from;
                if (w == g.source_bus) {
                    edge_seen[ei] = true;
                    source_links.emplace_back(e.id);
                    continue;
                }
                edge_seen[ei] = true;
                if (component[w] == comp) {
                    cycle = true; // back edge within the component
                    continue;
                }
                component[w] = comp;
                dfs.push_back({w, ei});
            }
        }

        std::sort(members.begin(), members.end());
        std::sort(source_links.begin(), source_links.end());
        Feeder f;
        f.bus_ids = std::move(members);
        f.root_branch_id = source_links.empty() ? std::string{} : source_links.front();
        f.meshed = cycle || source_links.size() > 1;
        feeder_meshed.push_back(f.meshed);
        feeders.push_back(std::move(f));
    }
    std::sort(feeders.begin(), feeders.end(),
              [](const Feeder& a, const Feeder& b) { return a.root_branch_id < b.root_branch_id; });
    report.feeders = feeders;

    for (const auto& lp : load_point_buses(net)) {
        const std::size_t b = idx.bus.at(lp);
        if (!supplied[b]) {
            ++report.unsupplied_load_point_count;
        } else if (b != g.source_bus && component[b] >= 0 && feeder_meshed[component[b]]) {
            ++report.meshed_load_point_count;
        }
    }

    return report;
}

SupplyTree build_supply_tree(const Network& net, const NetworkIndex& idx) {
    const Graph g = build_graph(net, idx);
    SupplyTree tree;
    const std::size_t n = net.buses.size();
    tree.parent.assign(n, -1);
    tree.branch_is_line.assign(n, false);
    tree.branch_index.assign(n, 0);
    tree.supplied.assign(n, false);
    tree.root = g.source_bus;

    std::deque<std::size_t> queue{g.source_bus};
    std::vector<std::size_t> entry_edge(n, SIZE_MAX);
    tree.supplied[g.source_bus] = true;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        tree.order.push_back(u);
        for (const std::size_t ei : g.adjacency[u]) {
            if (ei == entry_edge[u]) {
                continue;
            }
            const auto& e = g.edges[ei];
            const std::size_t w = (e.from == u) ? e.to : e.from;
            if (tree.supplied[w]) {
                throw TopologyError("network is meshed: cycle through branch '" + std::string(e.id) +
                                    "'");
            }
            tree.supplied[w] = true;
            entry_edge[w] = ei;
            tree.parent[w] = static_cast<int>(u);
            tree.branch_is_line[w] = e.is_line;
            tree.branch_index[w] = e.element_index;
            queue.push_back(w);
        }
    }

    for (const auto& lp : load_point_buses(net)) {
        if (!tree.supplied[idx.bus.at(lp)]) {
            throw TopologyError("load point '" + lp + "' is not supplied");
        }
    }
    return tree;
}

std::vector<std::string> path_to_source(const Network& net, const std::string& bus_id) {
    require_valid(net);
    const auto idx = NetworkIndex::build(net);
    const auto it = idx.bus.find(bus_id);
    if (it == idx.bus.end()) {
        throw TopologyError("bus '" + bus_id + "' does not exist");
    }

    const auto report = analyze_topology(net);
    if (!report.supplied_bus_ids.count(bus_id)) {
        throw TopologyError("bus '" + bus_id + "' is not supplied");
    }
    for (const auto& feeder : report.feeders) {
        if (feeder.meshed &&
            std::binary_search(feeder.bus_ids.begin(), feeder.bus_ids.end(), bus_id)) {
            throw TopologyError("bus '" + bus_id + "' lies on a meshed feeder; path not unique");
        }
    }

    // The bus's own feeder is radial, so a plain BFS from the source yields
    // the unique path; meshes on other feeders do not matter here.
    const Graph g = build_graph(net, idx);
    const std::size_t n = net.buses.size();
    std::vector<int> parent(n, -1);
    std::vector<std::string_view> branch_to_parent(n);
    std::vector<bool> visited(n, false);
    std::deque<std::size_t> queue{g.source_bus};
    visited[g.source_bus] = true;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (const std::size_t ei : g.adjacency[u]) {
            const auto& e = g.edges[ei];
            const std::size_t w = (e.from == u) ? e.to : e.from;
            if (visited[w]) {
                continue;
            }
            visited[w] = true;
            parent[w] = static_cast<int>(u);
            branch_to_parent[w] = e.id;
            queue.push_back(w);
        }
    }

    std::vector<std::string> path;
    std::size_t u = it->second;
    while (u != g.source_bus) {
        path.emplace_back(branch_to_parent[u]);
        u = static_cast<std::size_t>(parent[u]);
    }
    return path;
}

}
