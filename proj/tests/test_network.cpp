#include <doctest.h>

#include <gridplan/error.hpp>
#include <gridplan/fixtures.hpp>
#include <gridplan/network.hpp>
#include <gridplan/network_io.hpp>

using namespace gridplan;

TEST_CASE("valid ring fixture passes validation") {
    const auto net = fixtures::intro_ring(fixtures::RingState::sectioned);
    CHECK(validate(net).ok());
}

TEST_CASE("validation catches broken references and duplicates") {
    auto net = fixtures::intro_ring(fixtures::RingState::sectioned);

    SUBCASE("line referencing a missing bus") {
        net.lines[2].to_bus = "NOPE";
        const auto report = validate(net);
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0].element == "line 3");
        CHECK(report.violations[0].message.find("NOPE") != std::string::npos);
    }
    SUBCASE("duplicate line id") {
        net.lines[1].id = net.lines[0].id;
        const auto report = validate(net);
        REQUIRE_FALSE(report.ok());
        CHECK(report.violations[0].message.find("duplicate") != std::string::npos);
    }
    SUBCASE("switch bus must be a line endpoint") {
        net.switches[0].bus_id = "LP3"; // switch 1 sits on line 1 (SRC-LP1)
        CHECK_FALSE(validate(net).ok());
    }
    SUBCASE("unknown std_type") {
        net.lines[0].std_type = "imaginary cable";
        CHECK_FALSE(validate(net).ok());
    }
    SUBCASE("non-positive nominal voltage") {
        net.buses[1].nominal_voltage = 0.0;
        CHECK_FALSE(validate(net).ok());
    }
    SUBCASE("duplicate diameter rank") {
        net.line_type_catalog[1].diameter_rank = net.line_type_catalog[0].diameter_rank;
        CHECK_FALSE(validate(net).ok());
    }
    SUBCASE("tap position outside range") {
        Transformer t;
        t.id = "T";
        t.hv_bus = "SRC";
        t.lv_bus = "LP1";
        t.rated_power = 1.0;
        t.tap_min = -2;
        t.tap_max = 2;
        t.tap_position = 5;
        net.transformers.push_back(t);
        CHECK_FALSE(validate(net).ok());
    }
}

TEST_CASE("network json round trip preserves everything") {
    const auto net = fixtures::intro_ring(fixtures::RingState::ring_closed);
    const std::string text = network_to_json(net);
    const Network parsed = parse_network(text);
    CHECK(network_to_json(parsed) == text);
    CHECK(validate(parsed).ok());
    CHECK(parsed.lines.size() == 6);
    CHECK(parsed.switches.size() == 10);
}

TEST_CASE("unknown keys are rejected with the key name") {
    const auto net = fixtures::intro_ring(fixtures::RingState::sectioned);
    std::string text = network_to_json(net);

    SUBCASE("top level") {
        text.insert(text.find('{') + 1, "\"frequency\": 50,");
        CHECK_THROWS_WITH_AS(parse_network(text), doctest::Contains("frequency"), ParseError);
    }
    SUBCASE("nested element") {
        const auto pos = text.find("\"nominal_voltage\"");
        std::string patched = text;
        patched.insert(pos, "\"color\": \"red\", ");
        CHECK_THROWS_WITH_AS(parse_network(patched), doctest::Contains("color"), ParseError);
    }
}

TEST_CASE("malformed json raises ParseError") {
    CHECK_THROWS_AS(parse_network("{ not json"), ParseError);
    CHECK_THROWS_AS(parse_network("{}"), ParseError); // missing required keys
}

TEST_CASE("airline distance uses positions in meters") {
    Bus a{"a", 1.0, false, Position{0.0, 0.0}};
    Bus b{"b", 1.0, false, Position{300.0, 400.0}};
    CHECK(airline_distance_km(a, b) == doctest::Approx(0.5));
}

TEST_CASE("load points are buses carrying loads") {
    const auto net = fixtures::intro_ring(fixtures::RingState::sectioned);
    const auto lps = load_point_buses(net);
    CHECK(lps.size() == 5);
}
