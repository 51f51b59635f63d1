#include <doctest.h>

#include <gridplan/error.hpp>
#include <gridplan/fixtures.hpp>
#include <gridplan/network_io.hpp>
#include <gridplan/topology.hpp>

#include "oracles.hpp"

using namespace gridplan;

namespace {

void open_switch(Network& net, const std::string& switch_id) {
    for (auto& sw : net.switches) {
        if (sw.id == switch_id) {
            sw.closed = false;
            return;
        }
    }
    FAIL("no such switch");
}

}

TEST_CASE("sectioned ring is radial and fully supplied") {
    const auto net = fixtures::intro_ring(fixtures::RingState::sectioned);
    const auto report = analyze_topology(net);
    CHECK(report.unsupplied_load_point_count == 0);
    CHECK(report.meshed_load_point_count == 0);
    CHECK(report.supplied_bus_ids.size() == 6);
    CHECK(report.feeders.size() == 2);
}

TEST_CASE("closed ring puts all five load points on a meshed feeder") {
    const auto net = fixtures::intro_ring(fixtures::RingState::ring_closed);
    const auto report = analyze_topology(net);
    CHECK(report.unsupplied_load_point_count == 0);
    CHECK(report.meshed_load_point_count == 5);
    REQUIRE(report.feeders.size() == 1);
    CHECK(report.feeders[0].meshed);
}

TEST_CASE("opening switches 3 and 7 cuts two stations from supply") {
    auto net = fixtures::intro_ring(fixtures::RingState::ring_closed);
    open_switch(net, "3"); // line 2
    open_switch(net, "7"); // line 4
    const auto report = analyze_topology(net);
    CHECK(report.unsupplied_load_point_count == 2);
    CHECK(report.meshed_load_point_count == 0);
    CHECK_FALSE(report.supplied_bus_ids.count("LP2"));
    CHECK_FALSE(report.supplied_bus_ids.count("LP3"));
}

TEST_CASE("path_to_source") {
    const auto net = fixtures::intro_ring(fixtures::RingState::sectioned);

    SUBCASE("source bus maps to the empty path") {
        CHECK(path_to_source(net, "SRC").empty());
    }
    SUBCASE("first station connects through line 1") {
        CHECK(path_to_source(net, "LP1") == std::vector<std::string>{"1"});
    }
    SUBCASE("far station walks the feeder in order") {
        CHECK(path_to_source(net, "LP3") == std::vector<std::string>{"3", "2", "1"});
    }
    SUBCASE("unsupplied bus raises") {
        auto cut = net;
        open_switch(cut, "1");
        open_switch(cut, "3");
        CHECK_THROWS_AS(path_to_source(cut, "LP1"), TopologyError);
    }
    SUBCASE("meshed feeder raises") {
        const auto closed = fixtures::intro_ring(fixtures::RingState::ring_closed);
        CHECK_THROWS_AS(path_to_source(closed, "LP2"), TopologyError);
    }
    SUBCASE("agrees with the recursive tree-path oracle") {
        for (const auto& lp : {"LP1", "LP2", "LP3", "LP4", "LP5"}) {
            const auto expected = oracles::tree_path(net, lp);
            REQUIRE(expected.has_value());
            CHECK(path_to_source(net, lp) == *expected);
        }
    }
}

TEST_CASE("analyze_topology matches the traversal oracle on random networks") {
    Rng rng(20240817);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto net = oracles::random_switched_network(rng, 20);
        CAPTURE(trial);
        const auto expected = oracles::traverse(net);
        const auto actual = analyze_topology(net);
        CHECK(actual.supplied_bus_ids == expected.supplied);
        CHECK(actual.unsupplied_load_point_count == expected.unsupplied_load_points);
        CHECK(actual.meshed_load_point_count == expected.meshed_load_points);
    }
}

TEST_CASE("analysis operations never mutate the network") {
    const auto net = fixtures::intro_ring(fixtures::RingState::sectioned);
    const std::string before = network_to_json(net);
    (void)validate(net);
    (void)analyze_topology(net);
    (void)validate(net);
    CHECK(network_to_json(net) == before);
}

TEST_CASE("invalid network raises a structured error") {
    auto net = fixtures::intro_ring(fixtures::RingState::sectioned);
    net.lines[0].to_bus = "GHOST";
    CHECK_THROWS_AS(analyze_topology(net), TopologyError);
}
