#include "gridplan/power_flow.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <numbers>

#include "gridplan/error.hpp"
#include "gridplan/topology.hpp"

namespace gridplan {

namespace {

using Complex = std::complex<double>;

constexpr double kBasePowerMva = 1.0;

std::atomic<std::uint64_t> g_load_flow_calls{0};

/// No-load voltage ratio from parent to child across a branch, and the
/// branch series impedance in per unit on the child-side voltage base.
struct BranchModel {
    Complex z;            // per unit series impedance
    double ratio = 1.0;   // V_child = ratio * V_parent at no load
};

double transformer_ratio(const Transformer& t) {
    return 1.0 + t.tap_position * t.tap_step / 100.0;
}

BranchModel branch_model(const Network& net, const SupplyTree& tree, std::size_t bus,
                         const NetworkIndex& idx) {
    BranchModel m;
    if (tree.branch_is_line[bus]) {
        const Line& line = net.lines[tree.branch_index[bus]];
        const LineStandardType& type = net.line_type_catalog[idx.line_type.at(line.std_type)];
        const double v_base = net.buses[bus].nominal_voltage; // kV
        const double z_base = v_base * v_base / kBasePowerMva; // ohm
        m.z = Complex(type.r_per_km, type.x_per_km) * line.length / z_base;
        m.ratio = 1.0;
    } else {
        const Transformer& t = net.transformers[tree.branch_index[bus]];
        // Short-circuit impedance in per unit on the transformer's own rating,
        // rebased to the system base. uk/ukr are percentages of rated values.
        const double z_rated = t.short_circuit_voltage / 100.0;
        const double r_rated = t.short_circuit_losses / 100.0;
        const double x_rated = std::sqrt(std::max(0.0, z_rated * z_rated - r_rated * r_rated));
        m.z = Complex(r_rated, x_rated) * (kBasePowerMva / t.rated_power);
        const bool child_is_lv = net.transformers[tree.branch_index[bus]].lv_bus == net.buses[bus].id;
        const double r = transformer_ratio(t);
        m.ratio = child_is_lv ? r : 1.0 / r;
    }
    return m;
}

}

PowerFlowResult run_load_flow(const Network& net, const LoadCase& load_case) {
    g_load_flow_calls.fetch_add(1, std::memory_order_relaxed);

    const auto idx = NetworkIndex::build(net);
    const SupplyTree tree = build_supply_tree(net, idx);
    const std::size_t n = net.buses.size();

    // Net complex consumption per bus in per unit (S_base = 1 MVA).
    std::vector<Complex> consumption(n, Complex(0.0, 0.0));
    for (const auto& load : net.loads) {
        consumption[idx.bus.at(load.bus)] +=
            Complex(load.active_power, load.reactive_power) * load_case.load_scale;
    }
    for (const auto& gen : net.generators) {
        consumption[idx.bus.at(gen.bus)] -=
            Complex(gen.active_power, gen.reactive_power) * load_case.generation_scale;
    }

    std::vector<BranchModel> branch(n);
    for (const std::size_t b : tree.order) {
        if (b != tree.root) {
            branch[b] = branch_model(net, tree, b, idx);
        }
    }

    const Complex v_slack(net.source.voltage_set_point, 0.0);
    std::vector<Complex> voltage(n, v_slack);
    // Flat start adjusted by the no-load ratios along each path.
    for (const std::size_t b : tree.order) {
        if (b != tree.root) {
            voltage[b] = voltage[static_cast<std::size_t>(tree.parent[b])] * branch[b].ratio;
        }
    }

    std::vector<Complex> current_child_side(n, Complex(0.0, 0.0));
    PowerFlowResult result;
    result.converged = false;

    int iteration = 0;
    for (; iteration < kLoadFlowMaxIterations; ++iteration) {
        // Backward sweep: accumulate branch currents from the leaves up.
        // current_child_side[b] is the current through b's parent branch on
        // the child (b) side; across an ideal ratio the parent-side current
        // is ratio * child current.
        std::vector<Complex> injection(n);
        for (std::size_t b = 0; b < n; ++b) {
            if (!tree.supplied[b]) {
                continue;
            }
            injection[b] = (consumption[b] == Complex(0.0, 0.0))
                               ? Complex(0.0, 0.0)
                               : std::conj(consumption[b] / voltage[b]);
        }
        std::fill(current_child_side.begin(), current_child_side.end(), Complex(0.0, 0.0));
        for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
            const std::size_t b = *it;
            if (b == tree.root) {
                continue;
            }
            current_child_side[b] += injection[b];
            const std::size_t p = static_cast<std::size_t>(tree.parent[b]);
            if (p != tree.root) {
                current_child_side[p] += current_child_side[b] * branch[b].ratio;
            }
        }

        // Forward sweep: update voltages from the root down.
        double max_delta = 0.0;
        for (const std::size_t b : tree.order) {
            if (b == tree.root) {
                continue;
            }
            const std::size_t p = static_cast<std::size_t>(tree.parent[b]);
            const Complex v_new =
                voltage[p] * branch[b].ratio - branch[b].z * current_child_side[b];
            max_delta = std::max(max_delta, std::abs(v_new - voltage[b]));
            voltage[b] = v_new;
        }

        if (max_delta < kLoadFlowTolerance) {
            result.converged = true;
            ++iteration;
            break;
        }
    }
    result.iterations = iteration;

    for (const std::size_t b : tree.order) {
        result.bus_voltage[net.buses[b].id] = std::abs(voltage[b]);
    }

    // Loadings from the final branch currents. Branches outside the supply
    // tree carry no current.
    for (const auto& line : net.lines) {
        result.line_loading[line.id] = 0.0;
    }
    for (const auto& t : net.transformers) {
        result.transformer_loading[t.id] = 0.0;
    }
    for (const std::size_t b : tree.order) {
        if (b == tree.root) {
            continue;
        }
        if (tree.branch_is_line[b]) {
            const Line& line = net.lines[tree.branch_index[b]];
            const LineStandardType& type = net.line_type_catalog[idx.line_type.at(line.std_type)];
            const double v_base = net.buses[b].nominal_voltage;
            const double i_base_ka = kBasePowerMva / (std::numbers::sqrt3 * v_base); // kA
            const double i_ka = std::abs(current_child_side[b]) * i_base_ka;
            result.line_loading[line.id] = i_ka / type.max_current * 100.0;
        } else {
            const Transformer& t = net.transformers[tree.branch_index[b]];
            const std::size_t p = static_cast<std::size_t>(tree.parent[b]);
            // Apparent power at the parent side equals the child-side branch
            // flow transported through the ideal ratio (lossless).
            const Complex v_internal = voltage[p] * branch[b].ratio;
            const double s_mva = std::abs(v_internal * std::conj(current_child_side[b])) * kBasePowerMva;
            result.transformer_loading[t.id] = s_mva / t.rated_power * 100.0;
        }
    }

    return result;
}

std::vector<PowerFlowResult> worst_case_results(const Network& net,
                                                const std::vector<LoadCase>& cases) {
    std::vector<PowerFlowResult> results;
    results.reserve(cases.size());
    for (const auto& c : cases) {
        try {
            results.push_back(run_load_flow(net, c));
        } catch (const Error& e) {
            throw TopologyError("load case '" + c.name + "': " + e.what());
        }
    }
    return results;
}

std::uint64_t load_flow_invocation_count() {
    return g_load_flow_calls.load(std::memory_order_relaxed);
}

}
