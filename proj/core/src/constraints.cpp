#include "gridplan/constraints.hpp"

#include <algorithm>

#include "gridplan/error.hpp"
#include "gridplan/topology.hpp"

namespace gridplan {

Ordering compare(const CostTuple& a, const CostTuple& b) {
    if (a.level != b.level) {
        return a.level < b.level ? Ordering::less : Ordering::greater;
    }
    if (a.magnitude != b.magnitude) {
        return a.magnitude < b.magnitude ? Ordering::less : Ordering::greater;
    }
    return Ordering::equal;
}

ConstraintReport evaluate(const Network& net, const std::vector<LoadCase>& cases) {
    ConstraintReport report;

    const auto topology = analyze_topology(net);
    report.lp_us = topology.unsupplied_load_point_count;
    report.lp_mf = topology.meshed_load_point_count;
    if (report.lp_us > 0 || report.lp_mf > 0) {
        return report; // screened: no load flow on topologically broken plans
    }

    double total_line_length = 0.0;
    for (const auto& line : net.lines) {
        total_line_length += line.length;
    }

    const auto load_points = load_point_buses(net);
    const auto results = worst_case_results(net, cases);
    for (std::size_t c = 0; c < cases.size(); ++c) {
        const auto& result = results[c];
        if (!result.converged) {
            report.load_flow_converged = false;
            report.ln_ol += total_line_length;
            continue;
        }
        for (const auto& lp : load_points) {
            const auto it = result.bus_voltage.find(lp);
            if (it == result.bus_voltage.end()) {
                continue;
            }
            if (it->second < cases[c].v_min || it->second > cases[c].v_max) {
                ++report.lp_vv;
                report.voltage_violated_load_points.insert(lp);
            }
        }
        for (const auto& line : net.lines) {
            const double loading = result.line_loading.at(line.id);
            if (loading > line.max_loading) {
                report.ln_ol += line.length;
                report.overloaded_line_ids.insert(line.id);
            }
        }
        for (const auto& t : net.transformers) {
            const double loading = result.transformer_loading.at(t.id);
            if (loading > t.max_loading) {
                report.tr_ol += loading - t.max_loading;
            }
        }
    }

    return report;
}

CostTuple extended_cost(const ConstraintReport& r, double solution_cost) {
    if (r.lp_us > 0) {
        return {5, static_cast<double>(r.lp_us)};
    }
    if (r.lp_mf > 0) {
        return {4, static_cast<double>(r.lp_mf)};
    }
    if (r.tr_ol > 0.0) {
        return {3, r.tr_ol};
    }
    if (r.ln_ol > 0.0) {
        return {2, r.ln_ol};
    }
    if (r.lp_vv > 0) {
        return {1, static_cast<double>(r.lp_vv)};
    }
    return {0, solution_cost};
}

}
