#include "gridplan/fixtures.hpp"

namespace gridplan::fixtures {

namespace {

constexpr const char* kMvSmall = "NA2XS2Y 1x150";
constexpr const char* kMvLarge = "NA2XS2Y 1x300";

// Station feed-in calibrated so that on the sectioned ring only REPLACE_LINE_2
// restores the voltage band at minimal cost, and on the closed ring moving the
// sectioning point to line 3 plus reinforcing line 6 is optimal.
constexpr double kRingPv = 2.65;     // MW at stations 2..5
constexpr double kRingPvFirst = 0.5 * kRingPv;
constexpr double kRingLoadP = 0.5;   // MW
constexpr double kRingLoadQ = 0.164; // MVar

std::vector<LineStandardType> mv_types() {
    return {
        {kMvSmall, 0.206, 0.116, 0.319, 1.0, 1},
        {kMvLarge, 0.100, 0.102, 0.466, 1.0, 2},
    };
}

}

Network intro_ring(RingState state) {
    Network net;
    net.name = state == RingState::sectioned ? "intro_ring_sectioned" : "intro_ring_closed";
    net.line_type_catalog = mv_types();
    net.source = {"SRC", 1.02};

    net.buses.push_back({"SRC", 20.0, false, Position{0.0, 0.0}});
    const double station_x[] = {900.0, 2300.0, 3400.0, 2300.0, 900.0};
    const double station_y[] = {800.0, 900.0, 0.0, -900.0, -800.0};
    for (int i = 0; i < 5; ++i) {
        net.buses.push_back(
            {"LP" + std::to_string(i + 1), 20.0, true, Position{station_x[i], station_y[i]}});
    }

    const double lengths[] = {3.0, 7.0, 7.0, 6.0, 5.0, 4.0};
    const char* ends[][2] = {{"SRC", "LP1"}, {"LP1", "LP2"}, {"LP2", "LP3"},
                             {"LP3", "LP4"}, {"LP4", "LP5"}, {"LP5", "SRC"}};
    for (int i = 0; i < 6; ++i) {
        Line l;
        l.id = std::to_string(i + 1);
        l.from_bus = ends[i][0];
        l.to_bus = ends[i][1];
        l.length = lengths[i];
        l.std_type = kMvSmall;
        net.lines.push_back(std::move(l));
    }

    // Two load-break switches per station, one on each incident ring line.
    const struct {
        const char* line;
        const char* bus;
    } switch_sites[] = {{"1", "LP1"}, {"2", "LP1"}, {"2", "LP2"}, {"3", "LP2"}, {"3", "LP3"},
                        {"4", "LP3"}, {"4", "LP4"}, {"5", "LP4"}, {"5", "LP5"}, {"6", "LP5"}};
    for (int i = 0; i < 10; ++i) {
        Switch s;
        s.id = std::to_string(i + 1);
        s.line_id = switch_sites[i].line;
        s.bus_id = switch_sites[i].bus;
        s.closed = !(state == RingState::sectioned && i + 1 == 6);
        net.switches.push_back(std::move(s));
    }

    for (int i = 1; i <= 5; ++i) {
        const std::string lp = "LP" + std::to_string(i);
        net.loads.push_back({"LOAD_" + lp, lp, kRingLoadP, kRingLoadQ, InjectionKind::load});
        net.generators.push_back(
            {"PV_" + lp, lp, i == 1 ? kRingPvFirst : kRingPv, 0.0, InjectionKind::pv});
    }
    return net;
}

std::vector<LoadCase> intro_cases() {
    return {
        {"high_feed_in", 0.1, 1.0, 0.95, 1.05},
        {"high_load", 1.0, 0.0, 0.95, 1.05},
    };
}

PlanningRules intro_rules_replace_only() {
    PlanningRules rules;
    rules.enabled = {MeasureKind::replace_line};
    rules.replace_line_scope = ReplaceLineScope::all_lines;
    return rules;
}

PlanningRules intro_rules_full() {
    PlanningRules rules;
    rules.enabled = {MeasureKind::replace_line, MeasureKind::open_switch};
    rules.replace_line_scope = ReplaceLineScope::all_lines;
    return rules;
}

Network lv_feeder() {
    Network net;
    net.name = "lv_feeder";
    net.line_type_catalog = {
        {"NAYY 4x50", 0.642, 0.083, 0.142, 40.0, 1},
        {"NAYY 4x95", 0.320, 0.082, 0.215, 50.0, 2},
        {"NAYY 4x150", 0.208, 0.080, 0.270, 60.0, 3},
    };
    net.source = {"MV", 1.02};

    net.buses.push_back({"MV", 20.0, false, Position{0.0, 0.0}});
    net.buses.push_back({"LVB", 0.4, true, Position{5.0, 0.0}});
    const double cab_x[] = {40.0, 75.0, 110.0, 145.0};
    for (int i = 0; i < 4; ++i) {
        net.buses.push_back({"C" + std::to_string(i + 1), 0.4, true, Position{cab_x[i], 0.0}});
        net.buses.push_back(
            {"H" + std::to_string(i + 1), 0.4, false, Position{cab_x[i], 25.0}});
    }

    Transformer t;
    t.id = "T1";
    t.hv_bus = "MV";
    t.lv_bus = "LVB";
    t.rated_power = 0.25;
    t.short_circuit_voltage = 4.0;
    t.short_circuit_losses = 1.1;
    t.tap_position = 0;
    t.tap_min = -2;
    t.tap_max = 2;
    t.tap_step = 2.5;
    net.transformers.push_back(std::move(t));

    auto main_line = [&](const std::string& id, const std::string& a, const std::string& b) {
        Line l;
        l.id = id;
        l.from_bus = a;
        l.to_bus = b;
        l.length = 0.035;
        l.std_type = "NAYY 4x95";
        net.lines.push_back(std::move(l));
    };
    main_line("M0", "LVB", "C1");
    main_line("M1", "C1", "C2");
    main_line("M2", "C2", "C3");
    main_line("M3", "C3", "C4");

    for (int i = 0; i < 4; ++i) {
        Line l;
        l.id = "H" + std::to_string(i + 1);
        l.from_bus = "C" + std::to_string(i + 1);
        l.to_bus = "H" + std::to_string(i + 1);
        l.length = 0.06; // above the 50 m customer-access threshold
        l.std_type = "NAYY 4x50";
        l.is_customer_access = true;
        net.lines.push_back(std::move(l));
    }

    // Radial network: any sectioning switch sits on a stub here.
    net.switches.push_back({"SW_M2", "M2", "C2", true});

    for (int i = 1; i <= 4; ++i) {
        const std::string house = "H" + std::to_string(i);
        net.loads.push_back({"LOAD_" + house, house, 0.012, 0.004, InjectionKind::load});
    }
    return net;
}

std::vector<LoadCase> lv_cases() {
    return {
        {"high_feed_in", 0.1, 1.0, 0.95, 1.05},
        {"high_load", 1.0, 0.0, 0.95, 1.05},
    };
}

PlanningRules lv_rules() {
    PlanningRules rules;
    rules.enabled = {MeasureKind::replace_line,     MeasureKind::parallel_line,
                     MeasureKind::new_cabinet_parallel_line,
                     MeasureKind::new_substation_split,
                     MeasureKind::replace_transformer,
                     MeasureKind::change_tap};
    rules.replace_line_scope = ReplaceLineScope::violated_paths;
    rules.added_line_std_type = "NAYY 4x150";
    rules.cabinet_cost = 5.0;
    rules.substation_cost = 50.0;
    rules.mv_connection_cost_per_km = 80.0;
    rules.tap_change_cost = 0.5;
    rules.transformer_catalog = {
        {{"0.4 MVA", 0.4, 4.0, 1.2}, 15.0},
        {{"0.63 MVA", 0.63, 4.0, 1.3}, 20.0},
    };
    return rules;
}

ResScenario lv_scenario_conservative() {
    ResScenario s;
    s.name = "conservative";
    s.total_capacity_mw = 0.06;
    s.unit_min_mw = 0.005;
    s.unit_max_mw = 0.02;
    return s;
}

ResScenario lv_scenario_progressive() {
    ResScenario s;
    s.name = "progressive";
    s.total_capacity_mw = 0.20;
    s.unit_min_mw = 0.01;
    s.unit_max_mw = 0.04;
    return s;
}

Network trail_grid() {
    Network net;
    net.name = "trail_grid";
    net.line_type_catalog = mv_types();
    net.source = {"SRC", 1.02};

    net.buses.push_back({"SRC", 20.0, false, Position{0.0, 0.0}});
    const struct {
        const char* id;
        double x, y;
    } sites[] = {{"A1", 0, 800},    {"A2", 0, 1600},    {"A3", 0, 2400},    {"A4", 0, 3200},
                 {"B1", 700, 800},  {"B2", 700, 1600},  {"B3", 700, 2400},  {"B4", 700, 3200},
                 {"C1", 1400, 800}, {"C2", 1400, 1600}, {"C3", 1400, 2400}};
    for (const auto& s : sites) {
        net.buses.push_back({s.id, 20.0, true, Position{s.x, s.y}});
        net.loads.push_back({std::string("LOAD_") + s.id, s.id, 0.8, 0.26, InjectionKind::load});
    }

    auto line = [&](const std::string& id, const std::string& a, const std::string& b,
                    double length, const char* type) {
        Line l;
        l.id = id;
        l.from_bus = a;
        l.to_bus = b;
        l.length = length;
        l.std_type = type;
        net.lines.push_back(std::move(l));
    };
    line("L_A1", "SRC", "A1", 0.9, kMvLarge);
    line("L_A2", "A1", "A2", 0.9, kMvLarge);
    line("L_A3", "A2", "A3", 0.9, kMvLarge);
    line("L_A4", "A3", "A4", 0.9, kMvLarge);
    line("OLD_B", "SRC", "B1", 2.4, kMvSmall); // aged trail, meanders
    line("L_B2", "B1", "B2", 0.9, kMvLarge);
    line("L_B3", "B2", "B3", 0.9, kMvLarge);
    line("L_B4", "B3", "B4", 0.9, kMvLarge);
    line("OLD_C", "SRC", "C1", 3.0, kMvSmall); // aged trail
    line("L_C2", "C1", "C2", 0.9, kMvLarge);
    line("L_C3", "C2", "C3", 0.9, kMvLarge);

    net.switches.push_back({"SW_A1", "L_A1", "SRC", true});
    net.switches.push_back({"SW_A2", "L_A2", "A1", true});
    net.switches.push_back({"SW_B0", "OLD_B", "SRC", true});
    net.switches.push_back({"SW_B2", "L_B2", "B1", true});
    net.switches.push_back({"SW_C0", "OLD_C", "SRC", true});
    net.switches.push_back({"SW_C2", "L_C2", "C1", true});

    return net;
}

std::vector<LoadCase> trail_cases() {
    return {{"high_load", 1.0, 0.0, 0.95, 1.05}};
}

PlanningRules trail_rules() {
    PlanningRules rules;
    rules.enabled = {MeasureKind::replace_line, MeasureKind::open_switch,
                     MeasureKind::new_line_trail};
    rules.replace_line_scope = ReplaceLineScope::violated_paths;
    rules.must_address_line_ids = {"OLD_B", "OLD_C"};
    rules.trail_length_factor = 1.5;
    rules.trail_candidates = {
        {"A1", "B1", ""}, {"A2", "B2", ""}, {"B1", "C1", ""}, {"B2", "C2", ""}};
    return rules;
}

}
