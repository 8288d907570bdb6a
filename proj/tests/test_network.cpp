#include <cmath>
#include <numbers>

#include "doctest.h"
#include "skyhw/network.hpp"

using namespace skyhw;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

GlobalParams flight_params() { return GlobalParams{0.4, 0.6, 0.6, 0.6, 0.2}; }

NetworkConfig lattice_six() {
  NetworkConfig c;
  c.params = flight_params();
  auto node = [&](int id, NodeKind k, double x, double y, double z) { c.nodes.push_back({id, k, {x, y, z}, {}, {}}); };
  node(1, NodeKind::Connection, -1, 2.8, 1);
  node(2, NodeKind::Connection, 1.4, 2.8, 1);
  node(3, NodeKind::Hub, -1, 0, 1);
  node(4, NodeKind::Hub, 1.4, 0, 1);
  node(5, NodeKind::Connection, -1, -2.8, 1);
  node(6, NodeKind::Connection, 1.4, -2.8, 1);
  node(7, NodeKind::Termination, -1, 2.8, 0);
  node(8, NodeKind::Termination, 1.4, -2.8, 0);
  int id = 1;
  for (auto [a, b] : {std::pair{1, 2}, {1, 3}, {2, 4}, {3, 4}, {3, 5}, {4, 6}, {5, 6}, {7, 1}, {8, 6}}) {
    c.airways.push_back({id++, a, b});
  }
  return c;
}

// Hub with three arms; each arm bends by 60 degrees at a connection and ends at
// a level airport.
NetworkConfig tri_hub(const GlobalParams& gp) {
  NetworkConfig c;
  c.params = gp;
  c.nodes.push_back({1, NodeKind::Hub, {0, 0, 30}, {}, {}});
  for (int k = 0; k < 3; ++k) {
    const double a = 120.0 * k * kDeg;
    const Vec3 arm{std::cos(a), std::sin(a), 0.0};
    const Vec3 bend{std::cos(a + 60 * kDeg), std::sin(a + 60 * kDeg), 0.0};
    const Vec3 conn = Vec3{0, 0, 30} + arm * 100.0;
    c.nodes.push_back({10 + k, NodeKind::Connection, conn, {}, {}});
    c.nodes.push_back({20 + k, NodeKind::Termination, conn + bend * 100.0, {}, {}});
    c.airways.push_back({100 + k, 1, 10 + k});
    c.airways.push_back({200 + k, 10 + k, 20 + k});
  }
  return c;
}

const ValidationRecord* find(const ValidationReport& r, const std::string& id) {
  for (const auto& rec : r.records) {
    if (rec.id == id) return &rec;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("six-node lattice with two airports builds and validates") {
  const Network net = build_network(lattice_six());
  CHECK(net.nodes().size() == 8);
  CHECK(net.airways().size() == 9);
  CHECK(net.airways()[net.airway_index(8)].riser);
  CHECK(net.airways()[net.airway_index(9)].riser);
  CHECK_FALSE(net.airways()[net.airway_index(1)].riser);
  const auto rep = validate_network(net);
  INFO(rep.to_text());
  CHECK(rep.all_pass());
  CHECK(find(rep, "prop1") != nullptr);
  CHECK(find(rep, "prop3:3") != nullptr);
  CHECK(find(rep, "prop4:1") != nullptr);
  CHECK(find(rep, "prop4:3") == nullptr);
}

TEST_CASE("two nodes and one airway form a valid network") {
  NetworkConfig c;
  c.nodes.push_back({1, NodeKind::Termination, {0, 0, 30}, {}, {}});
  c.nodes.push_back({2, NodeKind::Termination, {200, 0, 30}, {}, {}});
  c.airways.push_back({1, 1, 2});
  const Network net = build_network(c);
  const auto rep = validate_network(net);
  CHECK(rep.all_pass());
  CHECK(validate_route(net, {1, {1, 2}}).pass);
  CHECK(net.finishing_line(0, Travel::Forward).t == doctest::Approx(200.0));
}

TEST_CASE("build errors") {
  NetworkConfig c;
  c.nodes.push_back({1, NodeKind::Termination, {0, 0, 30}, {}, {}});
  c.nodes.push_back({2, NodeKind::Termination, {200, 0, 30}, {}, {}});
  SUBCASE("dangling reference") {
    c.airways.push_back({1, 1, 3});
    CHECK_THROWS_WITH_AS(build_network(c), doctest::Contains("unknown node 3"), NetworkError);
  }
  SUBCASE("duplicate node id") {
    c.nodes.push_back({2, NodeKind::Hub, {5, 5, 30}, {}, {}});
    CHECK_THROWS_WITH_AS(build_network(c), doctest::Contains("duplicate node id"), NetworkError);
  }
  SUBCASE("duplicate airway id") {
    c.nodes.push_back({3, NodeKind::Hub, {5, 500, 30}, {}, {}});
    c.airways.push_back({1, 1, 2});
    c.airways.push_back({1, 2, 3});
    CHECK_THROWS_WITH_AS(build_network(c), doctest::Contains("duplicate airway id"), NetworkError);
  }
  SUBCASE("duplicate pair") {
    c.airways.push_back({1, 1, 2});
    c.airways.push_back({2, 2, 1});
    CHECK_THROWS_AS(build_network(c), NetworkError);
  }
  SUBCASE("zero length") {
    c.nodes.push_back({3, NodeKind::Hub, {0, 0, 30}, {}, {}});
    c.airways.push_back({1, 1, 3});
    CHECK_THROWS_WITH_AS(build_network(c), doctest::Contains("zero length"), NetworkError);
  }
  SUBCASE("bad params") {
    c.params.r_a = -1;
    CHECK_THROWS_AS(build_network(c), NetworkError);
  }
}

TEST_CASE("hub with a 10 degree pair builds but fails the angle minimum") {
  NetworkConfig c;
  c.nodes.push_back({1, NodeKind::Hub, {0, 0, 30}, {}, {}});
  int id = 2;
  for (double deg : {0.0, 10.0, 180.0}) {
    c.nodes.push_back({id, NodeKind::Termination, {300 * std::cos(deg * kDeg), 300 * std::sin(deg * kDeg), 30}, {}, {}});
    c.airways.push_back({id, 1, id});
    ++id;
  }
  const Network net = build_network(c);
  const auto rep = validate_network(net);
  CHECK_FALSE(rep.all_pass());
  const auto* p3 = find(rep, "prop3:1");
  REQUIRE(p3 != nullptr);
  CHECK_FALSE(p3->pass);
  CHECK(p3->note == "angle too small");
}

TEST_CASE("simulation-scale network with auto radii passes every check") {
  const Network net = build_network(tri_hub(GlobalParams{}));
  const auto rep = validate_network(net);
  INFO(rep.to_text());
  CHECK(rep.all_pass());
  CHECK(find(rep, "prop2:100:201") != nullptr);
  CHECK(find(rep, "prop2:100:101") == nullptr);  // share the hub

  SUBCASE("narrow strip fails the first check") {
    GlobalParams gp;
    gp.r_is = 2;
    const auto bad = validate_network(build_network(tri_hub(gp)));
    CHECK_FALSE(find(bad, "prop1")->pass);
  }
}

TEST_CASE("parallel airways 10 m apart fail the pair check") {
  NetworkConfig c;
  c.nodes.push_back({1, NodeKind::Termination, {0, 0, 30}, {}, {}});
  c.nodes.push_back({2, NodeKind::Termination, {200, 0, 30}, {}, {}});
  c.nodes.push_back({3, NodeKind::Termination, {0, 10, 30}, {}, {}});
  c.nodes.push_back({4, NodeKind::Termination, {200, 10, 30}, {}, {}});
  c.airways.push_back({1, 1, 2});
  c.airways.push_back({2, 3, 4});
  const auto rep = validate_network(build_network(c));
  const auto* p2 = find(rep, "prop2:1:2");
  REQUIRE(p2 != nullptr);
  CHECK_FALSE(p2->pass);
  CHECK(p2->value == doctest::Approx(10.0));
  CHECK(p2->threshold == doctest::Approx(26.769728648009426));
}

TEST_CASE("routes") {
  const Network net = build_network(lattice_six());
  CHECK(validate_route(net, {1, {8, 6, 4, 3, 1, 7}}).pass);
  CHECK_FALSE(validate_route(net, {1, {8, 6, 3, 1, 7}}).pass);
  CHECK_FALSE(validate_route(net, {1, {8}}).pass);
  CHECK_FALSE(validate_route(net, {1, {8, 6, 4}}).pass);
  CHECK_FALSE(validate_route(net, {1, {8, 6, 99, 1, 7}}).pass);
}

TEST_CASE("eastbound finishing line spans the south carriageway at the east end") {
  NetworkConfig c;
  c.nodes.push_back({1, NodeKind::Termination, {0, 0, 30}, {}, {}});
  c.nodes.push_back({2, NodeKind::Termination, {200, 0, 30}, {}, {}});
  c.airways.push_back({7, 1, 2});
  const Network net = build_network(c);
  const auto& line = finishing_line(net, 7, Travel::Forward, Side::Right);
  CHECK(line.a.x == doctest::Approx(200.0));
  CHECK(line.b.x == doctest::Approx(200.0));
  CHECK(line.a.y < 0.0);
  CHECK(line.b.y < line.a.y);
  CHECK(line.a.z == doctest::Approx(30.0));
  CHECK(std::abs((line.b - line.a).dot(line.direction)) < 1e-12);
  CHECK_THROWS_AS(finishing_line(net, 7, Travel::Forward, Side::Left), NetworkError);
  const auto& west = finishing_line(net, 7, Travel::Backward, Side::Left);
  CHECK(west.a.x == doctest::Approx(0.0));
  CHECK(west.a.y > 0.0);
}

TEST_CASE("finishing lines lie strictly inside their carriageway cross-section") {
  for (const auto& cfg : {lattice_six(), tri_hub(GlobalParams{})}) {
    const Network net = build_network(cfg);
    for (std::size_t a = 0; a < net.airways().size(); ++a) {
      for (Travel tr : {Travel::Forward, Travel::Backward}) {
        const auto g = net.travel_geometry(a, tr);
        const auto& gp = net.params();
        for (const auto* line : {&net.finishing_line(a, tr), &net.entry_line(a, tr)}) {
          for (const Vec3& p : {line->a, line->b}) {
            const auto l = g.frame().to_local(p);
            CHECK(l.lat > 0.5 * gp.r_is);
            CHECK(l.lat < 0.5 * gp.r_is + gp.r_aw);
            CHECK(std::abs(l.vert) < 0.5 * gp.h_aw);
            CHECK(l.t >= -1e-9);
            CHECK(l.t <= g.length() + 1e-9);
          }
        }
      }
    }
  }
}

TEST_CASE("hub exit gate covers the carriageway mouth") {
  const Network net = build_network(tri_hub(GlobalParams{}));
  const auto gate = exit_gate(net, 1, 101);
  const auto& hub = net.node_by_id(1);
  const auto& gp = net.params();
  CHECK(gate.half_arc == doctest::Approx(std::asin(0.5 * gp.r_aw / hub.radius) + 2.0 * kDeg));
  CHECK(distance(gate.point, hub.spec.center) == doctest::Approx(hub.radius));
  // Gate point is on the lane center of the outgoing (right) carriageway.
  const auto g = net.travel_geometry(net.airway_index(101), Travel::Forward);
  CHECK(g.frame().to_local(gate.point).lat == doctest::Approx(gp.lane_offset()));
  // Strip-side lane edge on the wall falls inside the arc.
  const double lat = 0.5 * gp.r_is;
  const Vec3 edge = g.frame().to_world(std::sqrt(hub.radius * hub.radius - lat * lat), lat, 0.0) - hub.spec.center;
  CHECK(gate.covers(std::atan2(edge.y, edge.x)));
  CHECK_FALSE(gate.covers(gate.center_angle + gate.half_arc + 0.01));
  CHECK(gate.covers(gate.center_angle - gate.half_arc + 0.001));
  CHECK_THROWS_AS(exit_gate(net, 10, 101), NetworkError);
}

TEST_CASE("auto radii satisfy the radius condition and fail when reduced by 20%") {
  for (const auto& cfg : {lattice_six(), tri_hub(GlobalParams{})}) {
    const Network net = build_network(cfg);
    for (const auto& n : net.nodes()) {
      if (!n.is_intersection()) continue;
      CHECK(n.auto_radius);
      auto rec = find(validate_network(net), "prop3:" + std::to_string(n.spec.id));
      REQUIRE(rec != nullptr);
      CHECK(rec->pass);
      CHECK(rec->value > rec->threshold);
    }
    for (std::size_t i = 0; i < net.nodes().size(); ++i) {
      const auto& n = net.nodes()[i];
      if (!n.is_intersection()) continue;
      NetworkConfig shrunk = cfg;
      shrunk.nodes[i].radius = 0.8 * n.radius;
      const auto rep = validate_network(build_network(shrunk));
      CHECK_FALSE(find(rep, "prop3:" + std::to_string(n.spec.id))->pass);
    }
  }
}

TEST_CASE("adjacency is symmetric") {
  const Network net = build_network(lattice_six());
  for (std::size_t i = 0; i < net.nodes().size(); ++i) {
    for (const auto& [nb, aw] : net.adjacency(i)) {
      bool back = false;
      for (const auto& [nb2, aw2] : net.adjacency(nb)) back |= (nb2 == i && aw2 == aw);
      CHECK(back);
    }
  }
}

TEST_CASE("containment distance") {
  const Network net = build_network(lattice_six());
  CHECK(net.distance_outside({-1, 1.4, 1}) == 0.0);
  CHECK(net.distance_outside({0.2, 0, 1}) == 0.0);
  CHECK(net.distance_outside({3.6, 1.4, 1}) > 0.0);
  CHECK(net.intersection_containing({-1, 0, 1}) == net.node_index(3));
  CHECK_FALSE(net.intersection_containing({3.6, 1.4, 1}));
}

TEST_CASE("report renders as text and json") {
  const auto rep = validate_network(build_network(lattice_six()));
  CHECK(rep.to_text().find("all checks passed") != std::string::npos);
  CHECK(rep.to_json().find("\"prop1\"") != std::string::npos);
}
