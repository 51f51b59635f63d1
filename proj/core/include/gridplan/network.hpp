#pragma once

#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace gridplan {

/// Position in meters, used by geometry-dependent planning rules
/// (new cabinets, network splits, new line trails).
using Position = std::array<double, 2>;

struct Bus {
    std::string id;
    double nominal_voltage = 0.0;  // kV, line-to-line
    bool is_switching_cabinet = false;
    std::optional<Position> position;
};

/// Cable/overhead-line catalog entry. diameter_rank orders the catalog by
/// conductor size so that "replace with a higher diameter" is machine
/// checkable without parsing type names.
struct LineStandardType {
    std::string name;
    double r_per_km = 0.0;    // ohm/km
    double x_per_km = 0.0;    // ohm/km
    double max_current = 0.0; // kA
    double cost_per_km = 0.0; // currency/km
    int diameter_rank = 0;
};

struct Line {
    std::string id;
    std::string from_bus;
    std::string to_bus;
    double length = 0.0;        // km
    std::string std_type;
    double max_loading = 100.0; // percent
    bool in_service = true;
    bool is_customer_access = false;
};

/// Two-winding transformer. Tap positions are relative to the neutral
/// position 0; each step shifts the no-load LV voltage by tap_step percent.
struct Transformer {
    std::string id;
    std::string hv_bus;
    std::string lv_bus;
    double rated_power = 0.0;           // MVA
    double short_circuit_voltage = 0.0; // percent (uk)
    double short_circuit_losses = 0.0;  // percent (ukr)
    int tap_position = 0;
    int tap_min = 0;
    int tap_max = 0;
    double tap_step = 0.0;              // percent voltage per step
    double max_loading = 100.0;         // percent
};

/// Load-break switch sectioning one end of a line. A line conducts only if
/// it is in service and every switch attached to it is closed.
struct Switch {
    std::string id;
    std::string line_id;
    std::string bus_id;
    bool closed = true;
};

enum class InjectionKind { load, pv, wind, other };

struct Load {
    std::string id;
    std::string bus;
    double active_power = 0.0;   // MW consumed
    double reactive_power = 0.0; // MVar consumed
    InjectionKind kind = InjectionKind::load;
};

struct Generator {
    std::string id;
    std::string bus;
    double active_power = 0.0;   // MW injected
    double reactive_power = 0.0; // MVar injected
    InjectionKind kind = InjectionKind::pv;
};

/// The single slack of the network: an external grid connection with a
/// fixed voltage set point.
struct SourceRef {
    std::string bus_id;
    double voltage_set_point = 1.0; // per unit
};

struct Network {
    std::string name;
    std::vector<Bus> buses;
    std::vector<Line> lines;
    std::vector<Transformer> transformers;
    std::vector<Switch> switches;
    std::vector<Load> loads;
    std::vector<Generator> generators;
    SourceRef source;
    std::vector<LineStandardType> line_type_catalog;
};

struct Violation {
    std::string element; // e.g. "line 4"
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Collects every invariant violation in the network. An empty report means
/// the network is structurally valid. Never mutates the input.
ValidationReport validate(const Network& network);

/// Id -> element index lookup built once per analysis pass. Valid as long as
/// the network it was built from is alive and unmodified.
struct NetworkIndex {
    std::unordered_map<std::string, std::size_t> bus;
    std::unordered_map<std::string, std::size_t> line;
    std::unordered_map<std::string, std::size_t> transformer;
    std::unordered_map<std::string, std::size_t> switch_by_id;
    std::unordered_map<std::string, std::size_t> line_type;
    std::unordered_map<std::string, std::vector<std::size_t>> switches_on_line;
    std::unordered_map<std::string, std::vector<std::size_t>> loads_on_bus;
    std::unordered_map<std::string, std::vector<std::size_t>> generators_on_bus;

    static NetworkIndex build(const Network& network);
};

/// True if the line currently conducts: in service and all its switches closed.
bool line_conducting(const Network& network, const NetworkIndex& index, const Line& line);

/// Buses carrying at least one load element ("load points").
std::vector<std::string> load_point_buses(const Network& network);

/// Euclidean distance in km between two positioned buses.
double airline_distance_km(const Bus& a, const Bus& b);

}
