#include <set>

#include "doctest.h"
#include "skyhw/config.hpp"
#include "skyhw/scenarios.hpp"

using namespace skyhw;

TEST_CASE("paper_flight uses the lab coordinates") {
  const Scenario s = paper_flight();
  const Network net = build_network(s.network);
  CHECK(net.nodes().size() == 8);
  const std::vector<std::pair<int, Vec3>> expect{{1, {-1, 2.8, 1}},  {2, {1.4, 2.8, 1}},   {3, {-1, 0, 1}},
                                                 {4, {1.4, 0, 1}},   {5, {-1, -2.8, 1}},  {6, {1.4, -2.8, 1}},
                                                 {7, {-1, 2.8, 0}},  {8, {1.4, -2.8, 0}}};
  for (const auto& [id, c] : expect) {
    const Vec3 got = net.node_by_id(id).spec.center;
    CHECK(got.x == c.x);
    CHECK(got.y == c.y);
    CHECK(got.z == c.z);
  }
  CHECK(net.node_by_id(3).spec.kind == NodeKind::Hub);
  CHECK(net.node_by_id(4).spec.kind == NodeKind::Hub);
  CHECK(net.node_by_id(7).spec.kind == NodeKind::Termination);
  CHECK(s.uavs.size() == 6);
  CHECK(validate_network(net).all_pass());
  CHECK_NOTHROW(check_scenario(s, net));
}

TEST_CASE("paper_sim uses the simulation parameters") {
  const Scenario s = paper_sim();
  CHECK(s.network.params.r_a == 3.0);
  CHECK(s.network.params.r_aw == 9.0);
  CHECK(s.network.params.h_aw == 9.0);
  CHECK(s.network.params.r_is == 4.0);
  CHECK(s.uavs.size() == 80);
  const Network net = build_network(s.network);
  int hubs = 0, connections = 0, airports = 0;
  for (const auto& n : net.nodes()) {
    hubs += n.spec.kind == NodeKind::Hub;
    connections += n.spec.kind == NodeKind::Connection;
    airports += n.spec.kind == NodeKind::Termination;
  }
  CHECK(hubs == 12);
  CHECK(connections == 4);
  CHECK(airports == 8);
  const ValidationReport rep = validate_network(net);
  INFO(rep.to_text());
  CHECK(rep.all_pass());
  CHECK_NOTHROW(check_scenario(s, net));
}

TEST_CASE("random scenarios are reproducible and valid") {
  CHECK(format_scenario(random_scenario(7)) == format_scenario(random_scenario(7)));
  CHECK(format_scenario(random_scenario(7)) != format_scenario(random_scenario(8)));
  for (std::uint64_t seed : {1u, 2u, 7u, 99u}) {
    for (RandomOptions opt : {RandomOptions{3, 3, 10}, RandomOptions{4, 5, 40}, RandomOptions{6, 3, 5}}) {
      const Scenario s = random_scenario(seed, opt);
      const Network net = build_network(s.network);
      INFO("seed " << seed << " rows " << opt.rows << " cols " << opt.cols);
      CHECK(validate_network(net).all_pass());
      CHECK_NOTHROW(check_scenario(s, net));
      CHECK(static_cast<int>(s.uavs.size()) == opt.uavs);
    }
  }
  CHECK_THROWS_AS(random_scenario(1, {2, 3, 5}), ScenarioError);
  CHECK_THROWS_AS(random_scenario(1, {3, 3, -1}), ScenarioError);
}

TEST_CASE("scenario cross-checks") {
  Scenario s = paper_flight();
  const Network net = build_network(s.network);
  SUBCASE("duplicate uav") {
    s.uavs.push_back(s.uavs.front());
    CHECK_THROWS_WITH_AS(check_scenario(s, net), doctest::Contains("duplicate uav"), ScenarioError);
  }
  SUBCASE("missing route") {
    s.routes.pop_back();
    CHECK_THROWS_WITH_AS(check_scenario(s, net), doctest::Contains("no route"), ScenarioError);
  }
  SUBCASE("broken route") {
    s.routes[0].nodes = {7, 1, 4, 6, 8};
    CHECK_THROWS_AS(check_scenario(s, net), ScenarioError);
  }
  SUBCASE("priority out of range") {
    s.uavs[0].priority = 8;
    CHECK_THROWS_AS(check_scenario(s, net), ScenarioError);
  }
}
