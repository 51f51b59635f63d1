#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#include <gridplan/optimizer.hpp>

namespace oracles {

using gridplan::Bus;
using gridplan::ConstraintReport;
using gridplan::CostTuple;
using gridplan::Generator;
using gridplan::Line;
using gridplan::LineStandardType;
using gridplan::Load;
using gridplan::MeasureCatalog;
using gridplan::Network;
using gridplan::Rng;
using gridplan::Solution;
using gridplan::Switch;
using gridplan::Transformer;

std::optional<double> two_bus_voltage(double v1, double r, double x, double p, double q) {
    // From V2 = V1 - z*conj(S)/conj(V2):  u^2 + u*(2(rp+xq) - v1^2) + |z|^2|S|^2 = 0
    // with u = |V2|^2.
    const double a = r * p + x * q;
    const double b = x * p - r * q;
    const double coeff = 2.0 * a - v1 * v1;
    const double disc = coeff * coeff - 4.0 * (a * a + b * b);
    if (disc < 0.0) {
        return std::nullopt; // no physical solution (voltage collapse)
    }
    const double u = (-coeff + std::sqrt(disc)) / 2.0;
    return std::sqrt(u);
}

namespace {

using Complex = std::complex<double>;

struct BranchStamp {
    std::size_t from; // tap side for transformers
    std::size_t to;
    Complex y;
    double ratio; // V_to = ratio * V_from at no load
};

bool oracle_line_conducting(const Network& net, const Line& line) {
    if (!line.in_service) {
        return false;
    }
    for (const auto& sw : net.switches) {
        if (sw.line_id == line.id && !sw.closed) {
            return false;
        }
    }
    return true;
}

/// Gaussian elimination with partial pivoting; A is modified in place.
std::vector<Complex> solve_linear(std::vector<std::vector<Complex>> a, std::vector<Complex> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) {
                pivot = row;
            }
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const Complex factor = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    std::vector<Complex> x(n);
    for (std::size_t row = n; row-- > 0;) {
        Complex sum = b[row];
        for (std::size_t k = row + 1; k < n; ++k) {
            sum -= a[row][k] * x[k];
        }
        x[row] = sum / a[row][row];
    }
    return x;
}

}

NodalResult solve_nodal(const Network& net, const gridplan::LoadCase& load_case) {
    NodalResult result;
    const auto supplied = traverse(net).supplied;

    std::vector<std::string> ids;
    std::map<std::string, std::size_t> index;
    for (const auto& bus : net.buses) {
        if (supplied.count(bus.id)) {
            index[bus.id] = ids.size();
            ids.push_back(bus.id);
        }
    }
    const std::size_t n = ids.size();
    const std::size_t slack = index.at(net.source.bus_id);

    std::map<std::string, double> nominal;
    for (const auto& bus : net.buses) {
        nominal[bus.id] = bus.nominal_voltage;
    }
    std::map<std::string, const LineStandardType*> types;
    for (const auto& t : net.line_type_catalog) {
        types[t.name] = &t;
    }

    std::vector<std::vector<Complex>> y(n, std::vector<Complex>(n, Complex(0, 0)));
    for (const auto& line : net.lines) {
        if (!oracle_line_conducting(net, line) || !supplied.count(line.from_bus)) {
            continue;
        }
        const auto* t = types.at(line.std_type);
        const double v_base = nominal.at(line.to_bus);
        const Complex z = Complex(t->r_per_km, t->x_per_km) * line.length / (v_base * v_base);
        const Complex adm = 1.0 / z;
        const std::size_t a = index.at(line.from_bus);
        const std::size_t b = index.at(line.to_bus);
        y[a][a] += adm;
        y[b][b] += adm;
        y[a][b] -= adm;
        y[b][a] -= adm;
    }
    for (const auto& tr : net.transformers) {
        if (!supplied.count(tr.hv_bus)) {
            continue;
        }
        const double z_mag = tr.short_circuit_voltage / 100.0;
        const double r = tr.short_circuit_losses / 100.0;
        const double x = std::sqrt(std::max(0.0, z_mag * z_mag - r * r));
        const Complex z = Complex(r, x) / tr.rated_power;
        const Complex adm = 1.0 / z;
        const double m = 1.0 + tr.tap_position * tr.tap_step / 100.0;
        const std::size_t hv = index.at(tr.hv_bus);
        const std::size_t lv = index.at(tr.lv_bus);
        y[hv][hv] += m * m * adm;
        y[hv][lv] -= m * adm;
        y[lv][lv] += adm;
        y[lv][hv] -= m * adm;
    }

    std::vector<Complex> consumption(n, Complex(0, 0));
    for (const auto& load : net.loads) {
        if (supplied.count(load.bus)) {
            consumption[index.at(load.bus)] +=
                Complex(load.active_power, load.reactive_power) * load_case.load_scale;
        }
    }
    for (const auto& gen : net.generators) {
        if (supplied.count(gen.bus)) {
            consumption[index.at(gen.bus)] -=
                Complex(gen.active_power, gen.reactive_power) * load_case.generation_scale;
        }
    }

    // Unknowns: every supplied bus except the slack.
    std::vector<std::size_t> unknowns;
    for (std::size_t i = 0; i < n; ++i) {
        if (i != slack) {
            unknowns.push_back(i);
        }
    }
    const Complex v_slack(net.source.voltage_set_point, 0.0);
    std::vector<Complex> voltage(n, v_slack);

    bool converged = false;
    for (int iteration = 0; iteration < 300; ++iteration) {
        std::vector<std::vector<Complex>> a(unknowns.size(),
                                            std::vector<Complex>(unknowns.size()));
        std::vector<Complex> rhs(unknowns.size());
        for (std::size_t row = 0; row < unknowns.size(); ++row) {
            const std::size_t i = unknowns[row];
            const Complex injected = -std::conj(consumption[i] / voltage[i]);
            rhs[row] = injected - y[i][slack] * v_slack;
            for (std::size_t col = 0; col < unknowns.size(); ++col) {
                a[row][col] = y[i][unknowns[col]];
            }
        }
        const auto solution = solve_linear(std::move(a), std::move(rhs));
        double max_delta = 0.0;
        for (std::size_t row = 0; row < unknowns.size(); ++row) {
            max_delta = std::max(max_delta, std::abs(solution[row] - voltage[unknowns[row]]));
            voltage[unknowns[row]] = solution[row];
        }
        if (max_delta < 1e-10) {
            converged = true;
            break;
        }
    }

    result.converged = converged;
    for (std::size_t i = 0; i < n; ++i) {
        result.bus_voltage[ids[i]] = std::abs(voltage[i]);
    }
    return result;
}

CostTuple eq6_reference(const ConstraintReport& r, double cost) {
    const struct {
        int level;
        double value;
    } cascade[] = {{5, static_cast<double>(r.lp_us)},
                   {4, static_cast<double>(r.lp_mf)},
                   {3, r.tr_ol},
                   {2, r.ln_ol},
                   {1, static_cast<double>(r.lp_vv)}};
    for (const auto& entry : cascade) {
        if (entry.value > 0.0) {
            return {entry.level, entry.value};
        }
    }
    return {0, cost};
}

TraversalResult traverse(const Network& net) {
    TraversalResult result;

    // Supplied: repeated full scans over the branch list until fixpoint.
    result.supplied.insert(net.source.bus_id);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& line : net.lines) {
            if (!oracle_line_conducting(net, line)) {
                continue;
            }
            const bool has_from = result.supplied.count(line.from_bus) > 0;
            const bool has_to = result.supplied.count(line.to_bus) > 0;
            if (has_from != has_to) {
                result.supplied.insert(has_from ? line.to_bus : line.from_bus);
                changed = true;
            }
        }
        for (const auto& tr : net.transformers) {
            const bool has_hv = result.supplied.count(tr.hv_bus) > 0;
            const bool has_lv = result.supplied.count(tr.lv_bus) > 0;
            if (has_hv != has_lv) {
                result.supplied.insert(has_hv ? tr.lv_bus : tr.hv_bus);
                changed = true;
            }
        }
    }

    // Feeder components of the supplied subgraph without the source bus;
    // a component with E internal edges and S source attachments is meshed
    // iff E + S >= |component| + 1.
    std::map<std::string, int> component;
    int n_components = 0;
    for (const auto& bus : net.buses) {
        if (!result.supplied.count(bus.id) || bus.id == net.source.bus_id ||
            component.count(bus.id)) {
            continue;
        }
        const int comp = n_components++;
        component[bus.id] = comp;
        bool grew = true;
        while (grew) {
            grew = false;
            auto try_edge = [&](const std::string& a, const std::string& b) {
                if (a == net.source.bus_id || b == net.source.bus_id) {
                    return;
                }
                const auto ia = component.find(a);
                const auto ib = component.find(b);
                if (ia != component.end() && ia->second == comp && ib == component.end()) {
                    component[b] = comp;
                    grew = true;
                } else if (ib != component.end() && ib->second == comp &&
                           ia == component.end()) {
                    component[a] = comp;
                    grew = true;
                }
            };
            for (const auto& line : net.lines) {
                if (oracle_line_conducting(net, line)) {
                    try_edge(line.from_bus, line.to_bus);
                }
            }
            for (const auto& tr : net.transformers) {
                try_edge(tr.hv_bus, tr.lv_bus);
            }
        }
    }

    std::vector<int> internal_edges(n_components, 0);
    std::vector<int> source_links(n_components, 0);
    std::vector<int> members(n_components, 0);
    for (const auto& [bus, comp] : component) {
        ++members[comp];
    }
    auto count_edge = [&](const std::string& a, const std::string& b) {
        const bool a_src = a == net.source.bus_id;
        const bool b_src = b == net.source.bus_id;
        if (a_src && b_src) {
            return;
        }
        if (a_src || b_src) {
            const auto& other = a_src ? b : a;
            const auto it = component.find(other);
            if (it != component.end()) {
                ++source_links[it->second];
            }
            return;
        }
        const auto ia = component.find(a);
        const auto ib = component.find(b);
        if (ia != component.end() && ib != component.end() && ia->second == ib->second) {
            ++internal_edges[ia->second];
        }
    };
    for (const auto& line : net.lines) {
        if (oracle_line_conducting(net, line)) {
            count_edge(line.from_bus, line.to_bus);
        }
    }
    for (const auto& tr : net.transformers) {
        count_edge(tr.hv_bus, tr.lv_bus);
    }

    std::vector<bool> meshed(n_components, false);
    for (int c = 0; c < n_components; ++c) {
        meshed[c] = internal_edges[c] + source_links[c] >= members[c] + 1;
    }

    std::set<std::string> load_points;
    for (const auto& load : net.loads) {
        load_points.insert(load.bus);
    }
    for (const auto& lp : load_points) {
        if (!result.supplied.count(lp)) {
            ++result.unsupplied_load_points;
        } else if (lp != net.source.bus_id && meshed[component.at(lp)]) {
            ++result.meshed_load_points;
        }
    }
    return result;
}

namespace {

bool dfs_path(const Network& net, const std::string& at, const std::string& target,
              std::set<std::string>& visited, std::vector<std::string>& path) {
    if (at == target) {
        return true;
    }
    visited.insert(at);
    for (const auto& line : net.lines) {
        if (!oracle_line_conducting(net, line)) {
            continue;
        }
        std::string next;
        if (line.from_bus == at) {
            next = line.to_bus;
        } else if (line.to_bus == at) {
            next = line.from_bus;
        } else {
            continue;
        }
        if (visited.count(next)) {
            continue;
        }
        path.push_back(line.id);
        if (dfs_path(net, next, target, visited, path)) {
            return true;
        }
        path.pop_back();
    }
    for (const auto& tr : net.transformers) {
        std::string next;
        if (tr.hv_bus == at) {
            next = tr.lv_bus;
        } else if (tr.lv_bus == at) {
            next = tr.hv_bus;
        } else {
            continue;
        }
        if (visited.count(next)) {
            continue;
        }
        path.push_back(tr.id);
        if (dfs_path(net, next, target, visited, path)) {
            return true;
        }
        path.pop_back();
    }
    return false;
}

}

std::optional<std::vector<std::string>> tree_path(const Network& net, const std::string& bus_id) {
    std::set<std::string> visited;
    std::vector<std::string> path;
    if (!dfs_path(net, net.source.bus_id, bus_id, visited, path)) {
        return std::nullopt;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

namespace {

bool oracle_satisfies(const std::vector<std::string>& sorted_ids, const MeasureCatalog& catalog) {
    auto has = [&](const std::string& id) {
        return std::binary_search(sorted_ids.begin(), sorted_ids.end(), id);
    };
    for (const auto& [a, b] : catalog.excludes) {
        if (has(a) && has(b)) {
            return false;
        }
    }
    for (const auto& id : sorted_ids) {
        const auto it = catalog.prerequisites.find(id);
        if (it == catalog.prerequisites.end()) {
            continue;
        }
        for (const auto& need : it->second) {
            if (!has(need)) {
                return false;
            }
        }
    }
    for (const auto& group : catalog.at_least_one) {
        bool hit = false;
        for (const auto& id : group) {
            if (has(id)) {
                hit = true;
                break;
            }
        }
        if (!hit) {
            return false;
        }
    }
    return true;
}

}

EnumeratedOptimum enumerate_optimum(const Network& base, const MeasureCatalog& catalog,
                                    const std::vector<gridplan::LoadCase>& cases) {
    const std::size_t n = catalog.measures.size();
    EnumeratedOptimum best;
    bool have_best = false;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        std::vector<std::string> ids;
        for (std::size_t bit = 0; bit < n; ++bit) {
            if (mask & (1ULL << bit)) {
                ids.push_back(catalog.measures[bit].id);
            }
        }
        std::sort(ids.begin(), ids.end());
        if (!oracle_satisfies(ids, catalog)) {
            continue;
        }
        ++best.admissible_count;
        const Solution candidate{ids};
        const CostTuple cost = gridplan::evaluate_solution(base, candidate, catalog, cases);
        bool take = !have_best;
        if (have_best) {
            const auto ordering = gridplan::compare(cost, best.cost);
            take = ordering == gridplan::Ordering::less ||
                   (ordering == gridplan::Ordering::equal &&
                    (candidate.size() < best.solution.size() ||
                     (candidate.size() == best.solution.size() &&
                      candidate.measure_ids < best.solution.measure_ids)));
        }
        if (take) {
            best.solution = candidate;
            best.cost = cost;
            have_best = true;
        }
    }
    return best;
}

Network random_radial_network(Rng& rng, int max_buses) {
    Network net;
    net.name = "random_radial";
    const int n = 2 + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(max_buses - 1)));
    const bool with_transformer = n >= 3 && rng.uniform01() < 0.4;

    const int n_types = 1 + static_cast<int>(rng.uniform_index(2));
    for (int t = 0; t < n_types; ++t) {
        LineStandardType type;
        type.name = "type" + std::to_string(t);
        type.r_per_km = rng.uniform(0.1, 0.7);
        type.x_per_km = rng.uniform(0.05, 0.15);
        type.max_current = rng.uniform(0.1, 0.5);
        type.cost_per_km = rng.uniform(0.5, 2.0);
        type.diameter_rank = t + 1;
        net.line_type_catalog.push_back(std::move(type));
    }

    const double hv = 20.0;
    const double lv = 0.4;
    net.buses.push_back({"B0", hv, false, std::nullopt});
    const double feeder_voltage = with_transformer ? lv : hv;
    for (int i = 1; i < n; ++i) {
        net.buses.push_back({"B" + std::to_string(i), feeder_voltage, false, std::nullopt});
    }
    net.source = {"B0", rng.uniform(0.98, 1.05)};

    if (with_transformer) {
        Transformer t;
        t.id = "T0";
        t.hv_bus = "B0";
        t.lv_bus = "B1";
        t.rated_power = rng.uniform(0.16, 0.63);
        t.short_circuit_voltage = rng.uniform(3.5, 6.0);
        t.short_circuit_losses = rng.uniform(0.8, 1.5);
        t.tap_min = -2;
        t.tap_max = 2;
        t.tap_position = rng.uniform_int(-2, 2);
        t.tap_step = 2.5;
        net.transformers.push_back(std::move(t));
    }

    const int first_line_bus = with_transformer ? 2 : 1;
    for (int i = first_line_bus; i < n; ++i) {
        Line l;
        l.id = "L" + std::to_string(i);
        const int parent_lo = with_transformer ? 1 : 0;
        const int parent =
            parent_lo + static_cast<int>(rng.uniform_index(
                            static_cast<std::size_t>(i - parent_lo)));
        l.from_bus = "B" + std::to_string(parent);
        l.to_bus = "B" + std::to_string(i);
        l.length = rng.uniform(0.02, feeder_voltage > 1.0 ? 2.0 : 0.15);
        l.std_type = net.line_type_catalog[rng.uniform_index(net.line_type_catalog.size())].name;
        net.lines.push_back(std::move(l));
    }

    const double p_max = feeder_voltage > 1.0 ? 1.5 : 0.04;
    for (int i = 1; i < n; ++i) {
        if (rng.uniform01() < 0.7) {
            const double p = rng.uniform(0.0, p_max);
            net.loads.push_back({"LOAD_B" + std::to_string(i), "B" + std::to_string(i), p,
                                 0.33 * p, gridplan::InjectionKind::load});
        }
        if (rng.uniform01() < 0.5) {
            net.generators.push_back({"PV_B" + std::to_string(i), "B" + std::to_string(i),
                                      rng.uniform(0.0, p_max), 0.0,
                                      gridplan::InjectionKind::pv});
        }
    }
    return net;
}

Network random_switched_network(Rng& rng, int max_buses) {
    Network net;
    net.name = "random_switched";
    const int n = 2 + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(max_buses - 1)));
    net.line_type_catalog.push_back({"t0", 0.3, 0.1, 0.3, 1.0, 1});
    for (int i = 0; i < n; ++i) {
        net.buses.push_back({"B" + std::to_string(i), 20.0, false, std::nullopt});
    }
    net.source = {"B0", 1.02};

    const int m = n - 1 + static_cast<int>(rng.uniform_index(5));
    for (int e = 0; e < m; ++e) {
        const int a = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(n)));
        int b = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(n)));
        if (a == b) {
            b = (b + 1) % n;
        }
        Line l;
        l.id = "L" + std::to_string(e);
        l.from_bus = "B" + std::to_string(a);
        l.to_bus = "B" + std::to_string(b);
        l.length = rng.uniform(0.1, 2.0);
        l.std_type = "t0";
        l.in_service = rng.uniform01() < 0.95;
        net.lines.push_back(std::move(l));
        if (rng.uniform01() < 0.5) {
            Switch s;
            s.id = "SW" + std::to_string(e);
            s.line_id = l.id;
            s.bus_id = rng.uniform01() < 0.5 ? l.from_bus : l.to_bus;
            s.closed = rng.uniform01() < 0.7;
            net.switches.push_back(std::move(s));
        }
    }
    for (int i = 0; i < n; ++i) {
        if (rng.uniform01() < 0.5) {
            net.loads.push_back({"LOAD_B" + std::to_string(i), "B" + std::to_string(i),
                                 rng.uniform(0.1, 1.0), 0.0, gridplan::InjectionKind::load});
        }
    }
    return net;
}

MeasureCatalog random_dependency_catalog(Rng& rng, int n_measures) {
    MeasureCatalog catalog;
    for (int i = 0; i < n_measures; ++i) {
        gridplan::Measure m;
        m.id = "M" + std::to_string(i);
        m.kind = gridplan::MeasureKind::open_switch;
        m.cost = rng.uniform(0.0, 10.0);
        catalog.measures.push_back(std::move(m));
    }
    auto random_id = [&] {
        return "M" + std::to_string(rng.uniform_index(static_cast<std::size_t>(n_measures)));
    };
    const int n_excludes = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(n_measures)));
    for (int i = 0; i < n_excludes; ++i) {
        const std::string a = random_id();
        const std::string b = random_id();
        if (a != b) {
            catalog.excludes.push_back(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
        }
    }
    const int n_requires = static_cast<int>(rng.uniform_index(std::size_t{4}));
    for (int i = 0; i < n_requires; ++i) {
        const std::string id = random_id();
        std::set<std::string> needs;
        const int k = 1 + static_cast<int>(rng.uniform_index(2));
        for (int j = 0; j < k; ++j) {
            const std::string need = random_id();
            if (need != id) {
                needs.insert(need);
            }
        }
        if (!needs.empty()) {
            catalog.prerequisites[id] = std::move(needs);
        }
    }
    const int n_groups = static_cast<int>(rng.uniform_index(std::size_t{3}));
    for (int i = 0; i < n_groups; ++i) {
        std::set<std::string> group;
        const int k = 1 + static_cast<int>(rng.uniform_index(3));
        for (int j = 0; j < k; ++j) {
            group.insert(random_id());
        }
        catalog.at_least_one.push_back(std::move(group));
    }
    return catalog;
}

ConstraintReport random_report(Rng& rng) {
    ConstraintReport r;
    r.lp_us = rng.uniform01() < 0.5 ? 0 : static_cast<int>(rng.uniform_index(5));
    r.lp_mf = rng.uniform01() < 0.5 ? 0 : static_cast<int>(rng.uniform_index(5));
    r.tr_ol = rng.uniform01() < 0.5 ? 0.0 : rng.uniform(0.0, 50.0);
    r.ln_ol = rng.uniform01() < 0.5 ? 0.0 : rng.uniform(0.0, 30.0);
    r.lp_vv = rng.uniform01() < 0.5 ? 0 : static_cast<int>(rng.uniform_index(8));
    return r;
}

}
