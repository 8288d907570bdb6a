#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "skyhw/engine.hpp"
#include "skyhw/scenarios.hpp"

using namespace skyhw;

namespace {

const GlobalParams kSim{};

// Two level airports 200 m apart: one airway, nothing else.
Network straight() {
  NetworkConfig c;
  c.nodes.push_back({1, NodeKind::Termination, {0, 0, 30}, {}, {}});
  c.nodes.push_back({2, NodeKind::Termination, {200, 0, 30}, {}, {}});
  c.airways.push_back({1, 1, 2});
  return build_network(c);
}

ControlParams sim_params() {
  ControlParams cp;
  cp.v_cruise = 4.0;
  cp.v_max = 6.0;
  cp.a_max = 8.0;
  return cp.resolve(kSim);
}

UavState on_lane(const Network& net, double t, double lat, int id) {
  UavState s;
  s.id = id;
  s.mode = FlightMode::Highway;
  s.airway = 0;
  s.travel = Travel::Forward;
  s.cursor = 1;
  s.position = net.travel_geometry(0, Travel::Forward).frame().to_world(t, lat, 0.0);
  return s;
}

std::vector<const UavState*> ptrs(const std::vector<UavState>& v, std::size_t skip) {
  std::vector<const UavState*> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != skip) out.push_back(&v[i]);
  }
  return out;
}

RoutePlan plan(const Network& net, std::initializer_list<int> ids) {
  RoutePlan p;
  for (int id : ids) p.nodes.push_back(net.node_index(id));
  return p;
}

// Closed loop of command, limiter, integration and transition for one UAV.
struct Solo {
  const Network& net;
  RoutePlan route;
  ControlParams cp;
  double dt = 0.05;
  std::vector<char> busy = {};

  std::optional<Transition> step(UavState& s) {
    const ControlContext ctx{net, route, cp, dt, busy};
    const Vec3 cmd = command(s, {}, ctx);
    s.velocity = limit_velocity(s.velocity, cmd, {cp.v_max, cp.a_max, net.params().r_t}, dt);
    s.position += s.velocity * dt;
    return mode_transition(s, ctx);
  }
};

}  // namespace

TEST_CASE("lone UAV on the lane heads for the finishing line at cruise speed") {
  const Network net = straight();
  const ControlParams cp = sim_params();
  const RoutePlan route = plan(net, {1, 2});
  const UavState s = on_lane(net, 50.0, kSim.lane_offset(), 1);
  const Vec3 v = highway_command(s, {}, {net, route, cp, 0.05});
  const Vec3 goal = net.finishing_line(0, Travel::Forward).nearest_point(s.position);
  CHECK(v.norm() == doctest::Approx(cp.v_cruise));
  CHECK(angle_between(v, goal - s.position) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("UAVs abreast push apart with equal and opposite lateral commands") {
  const Network net = straight();
  const ControlParams cp = sim_params();
  const RoutePlan route = plan(net, {1, 2});
  const ControlContext ctx{net, route, cp, 0.05};
  const double c = kSim.lane_offset();
  std::vector<UavState> u{on_lane(net, 50.0, c - 1.5, 1), on_lane(net, 50.0, c + 1.5, 2)};
  const AirwayGeometry g = net.travel_geometry(0, Travel::Forward);
  const auto& fr = g.frame();
  const double a = highway_command(u[0], ptrs(u, 0), ctx).dot(fr.lateral);
  const double b = highway_command(u[1], ptrs(u, 1), ctx).dot(fr.lateral);
  CHECK(a < 0.0);
  CHECK(a == doctest::Approx(-b).epsilon(1e-12));
}

TEST_CASE("UAV closing on a slower one ahead deflects sideways") {
  const Network net = straight();
  const ControlParams cp = sim_params();
  const RoutePlan route = plan(net, {1, 2});
  const double c = kSim.lane_offset();
  std::vector<UavState> u{on_lane(net, 50.0, c, 1), on_lane(net, 53.0, c, 2)};
  const AirwayGeometry g = net.travel_geometry(0, Travel::Forward);
  const auto& fr = g.frame();
  u[0].velocity = fr.axis * 4.0;
  u[1].velocity = fr.axis * 1.0;
  const Vec3 v = highway_command(u[0], ptrs(u, 0), {net, route, cp, 0.05});
  CHECK(std::abs(v.dot(fr.lateral)) > 0.1);
}

TEST_CASE("repulsion is antisymmetric between equal priorities") {
  const ControlParams cp = sim_params();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(-4.0, 4.0);
  std::uniform_real_distribution<double> vel(-4.0, 4.0);
  for (int k = 0; k < 500; ++k) {
    UavState a, b;
    a.id = 1;
    b.id = 2;
    a.position = {pos(rng), pos(rng), pos(rng)};
    b.position = {pos(rng), pos(rng), pos(rng)};
    a.velocity = {vel(rng), vel(rng), vel(rng)};
    b.velocity = {vel(rng), vel(rng), vel(rng)};
    const Vec3 fa = neighbor_repulsion(a, b, cp);
    const Vec3 fb = neighbor_repulsion(b, a, cp);
    CHECK((fa + fb).norm() <= 1e-9 * std::max(1.0, fa.norm()));
  }
}

TEST_CASE("repulsion vanishes beyond the sensing radius") {
  const ControlParams cp = sim_params();
  UavState a, b;
  b.position = {cp.r_rep * 1.01, 0, 0};
  CHECK(neighbor_repulsion(a, b, cp).norm() == 0.0);
  b.position = {cp.r_rep * 0.99, 0, 0};
  CHECK(neighbor_repulsion(a, b, cp).x < 0.0);
}

TEST_CASE("higher priority deviates less than lower priority") {
  const Network net = straight();
  const ControlParams cp = sim_params();
  const RoutePlan route = plan(net, {1, 2});
  const ControlContext ctx{net, route, cp, 0.05};
  const double c = kSim.lane_offset();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> rad(cp.r_core, cp.r_rep);
  int checked = 0;
  for (int k = 0; k < 400; ++k) {
    // Inside r_core the safety core ignores priority by design.
    const double a = ang(rng);
    const double d = rad(rng);
    if (std::abs(d * std::sin(a)) > 4.0) continue;
    std::vector<UavState> u{on_lane(net, 80.0, c, 1), on_lane(net, 80.0 + d * std::cos(a), c + d * std::sin(a), 2)};
    u[0].priority = 3;
    u[1].priority = 0;
    const Vec3 free0 = highway_command(u[0], {}, ctx);
    const Vec3 free1 = highway_command(u[1], {}, ctx);
    const double dev0 = (highway_command(u[0], ptrs(u, 0), ctx) - free0).norm();
    const double dev1 = (highway_command(u[1], ptrs(u, 1), ctx) - free1).norm();
    INFO("distance " << d << " bearing " << a);
    CHECK(dev0 < dev1);
    ++checked;
  }
  CHECK(checked > 150);
}

TEST_CASE("repulsion on the higher priority is always the smaller one") {
  const ControlParams cp = sim_params();
  for (double d = 0.5; d < cp.r_rep; d += 0.25) {
    UavState hi, lo;
    hi.id = 1;
    lo.id = 2;
    hi.priority = 5;
    lo.position = {d, 0, 0};
    CHECK(neighbor_repulsion(hi, lo, cp).norm() < neighbor_repulsion(lo, hi, cp).norm());
  }
}

TEST_CASE("commands never exceed v_max") {
  const Scenario sc = paper_sim();
  const Network net = build_network(sc.network);
  const ControlParams cp = sc.sim.control.resolve(net.params());
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> jit(-2.0, 2.0);
  std::uniform_real_distribution<double> vel(-6.0, 6.0);
  const RoutePlan route = plan(net, {17, 1, 2, 5, 6, 20});
  const ControlContext ctx{net, route, cp, 0.05};
  for (int k = 0; k < 300; ++k) {
    std::vector<UavState> u(4);
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i].id = static_cast<int>(i + 1);
      u[i].priority = static_cast<int>(i % 3);
      u[i].velocity = {vel(rng), vel(rng), vel(rng) * 0.2};
    }
    // Same spot, every mode.
    const Vec3 at = Vec3{100, 0, 30} + Vec3{jit(rng) * 3, jit(rng) * 3, jit(rng)};
    for (std::size_t i = 0; i < u.size(); ++i) u[i].position = at + Vec3{jit(rng), jit(rng), jit(rng)};
    u[0].mode = FlightMode::RotaryIsland;
    u[0].node = net.node_index(1);
    u[0].cursor = 1;
    u[1].mode = FlightMode::TakeOff;
    u[2].mode = FlightMode::Landing;
    u[3].mode = FlightMode::Highway;
    u[3].airway = *net.airway_between(net.node_index(1), net.node_index(2));
    u[3].travel = net.travel_from(u[3].airway, net.node_index(1));
    u[3].cursor = 2;
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(command(u[i], ptrs(u, i), ctx).norm() <= cp.v_max * (1 + 1e-12));
  }
}

TEST_CASE("rotary island") {
  const Scenario sc = paper_sim();
  const Network net = build_network(sc.network);
  const ControlParams cp = sc.sim.control.resolve(net.params());
  const std::size_t hub = net.node_index(4);
  const Node& h = net.nodes()[hub];
  const Vec3 center = h.spec.center;
  REQUIRE(h.spec.rotary == RotaryDirection::Clockwise);
  // From 3 through hub 4 toward hub 5.
  const RoutePlan route = plan(net, {19, 3, 4, 5, 6, 20});
  const ControlContext ctx{net, route, cp, 0.05};
  auto at = [&](double angle, double rho) {
    UavState s;
    s.id = 1;
    s.mode = FlightMode::RotaryIsland;
    s.node = hub;
    s.cursor = 2;
    s.position = center + Vec3{std::cos(angle), std::sin(angle), 0.0} * rho;
    return s;
  };
  const double mid = 0.75 * h.ring_outer;

  SUBCASE("mid-ring UAV circulates clockwise seen from above") {
    // Opposite the exit toward hub 5 (east), so the window is far away.
    const UavState s = at(std::numbers::pi * 0.75, mid);
    const Vec3 v = rotary_command(s, {}, ctx);
    const Vec3 rel = s.position - center;
    CHECK(rel.cross(v).z < 0.0);
    CHECK(std::abs(v.dot(rel.normalized())) < 1e-9);
    CHECK(v.norm() == doctest::Approx(cp.v_cruise));
  }
  SUBCASE("UAV near the center is pushed out toward the band") {
    const UavState s = at(std::numbers::pi * 0.75, 0.1);
    const Vec3 v = rotary_command(s, {}, ctx);
    CHECK(v.dot((s.position - center).normalized()) > 0.0);
  }
  SUBCASE("UAV outside the band is pulled back in") {
    const UavState s = at(std::numbers::pi * 0.75, h.ring_outer + 1.0);
    const Vec3 v = rotary_command(s, {}, ctx);
    CHECK(v.dot((s.position - center).normalized()) < 0.0);
  }
}

TEST_CASE("four UAVs evenly spaced on a ring keep circulating") {
  const Scenario sc = paper_sim();
  const Network net = build_network(sc.network);
  const ControlParams cp = sc.sim.control.resolve(net.params());
  const std::size_t hub = net.node_index(1);
  const std::size_t airport = net.node_index(17);
  const Node& h = net.nodes()[hub];
  // Landing here while the column is busy: no one leaves.
  const RoutePlan route{{net.node_index(18), hub, airport}};
  std::vector<char> busy(net.nodes().size(), 0);
  busy[airport] = 1;
  const ControlContext ctx{net, route, cp, 0.05, busy};
  const KinematicLimits lim{cp.v_max, cp.a_max, net.params().r_t};
  // On the outer edge of the band, where the keep-in term holds the radius.
  const double rho = h.ring_outer;
  std::vector<UavState> u(4);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = std::numbers::pi / 2.0 * static_cast<double>(i);
    u[i].id = static_cast<int>(i + 1);
    u[i].mode = FlightMode::RotaryIsland;
    u[i].node = hub;
    u[i].cursor = 1;
    u[i].destination = airport;
    u[i].position = h.spec.center + Vec3{std::cos(a), std::sin(a), 0.0} * rho;
    u[i].velocity = Vec3{std::sin(a), -std::cos(a), 0.0} * cp.v_cruise;
  }
  std::vector<double> gaps;
  double swept = 0.0;
  for (int k = 0; k < 1200; ++k) {
    std::vector<Vec3> cmd(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) cmd[i] = command(u[i], ptrs(u, i), ctx);
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i].velocity = limit_velocity(u[i].velocity, cmd[i], lim, ctx.dt);
      u[i].position += u[i].velocity * ctx.dt;
      CHECK_FALSE(mode_transition(u[i], ctx).has_value());
    }
    swept += u[0].velocity.norm() * ctx.dt;
    for (std::size_t i = 0; i < u.size(); ++i) gaps.push_back(distance(u[i].position, u[(i + 1) % u.size()].position));
  }
  double lo = gaps.front(), hi = gaps.front();
  for (double g : gaps) {
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  CHECK(hi - lo < 0.05 * lo);
  CHECK(lo > net.params().r_a);
  // More than one full lap.
  CHECK(swept > 2.0 * std::numbers::pi * rho);
  for (const auto& s : u) CHECK(s.mode == FlightMode::RotaryIsland);
}

TEST_CASE("lone UAV leaves every hub through every exit") {
  const Scenario sc = paper_sim();
  const Network net = build_network(sc.network);
  const ControlParams cp = sc.sim.control.resolve(net.params());
  int cases = 0;
  for (std::size_t hub = 0; hub < net.nodes().size(); ++hub) {
    const Node& h = net.nodes()[hub];
    if (h.spec.kind != NodeKind::Hub) continue;
    for (std::size_t in : h.level_airways) {
      for (std::size_t out : h.level_airways) {
        if (in == out) continue;
        const std::size_t from = net.airways()[in].from == hub ? net.airways()[in].to : net.airways()[in].from;
        const std::size_t to = net.airways()[out].from == hub ? net.airways()[out].to : net.airways()[out].from;
        Solo solo{net, RoutePlan{{from, hub, to, to}}, cp};
        UavState s;
        s.id = 1;
        s.mode = FlightMode::RotaryIsland;
        s.node = hub;
        s.cursor = 1;
        s.prev_airway = in;
        // Start where the incoming lane meets the wall.
        const AirwayGeometry g = net.arriving_at(in, hub);
        s.position = g.frame().to_world(g.length() - h.radius, net.params().lane_offset(), 0.0);
        s.velocity = g.frame().axis * cp.v_cruise;
        double t = 0.0;
        std::optional<Transition> tr;
        while (!tr && t < 120.0) {
          tr = solo.step(s);
          t += solo.dt;
        }
        INFO("hub " << h.spec.id << " in " << net.airways()[in].spec.id << " out " << net.airways()[out].spec.id);
        REQUIRE(tr.has_value());
        CHECK(tr->to == FlightMode::Highway);
        CHECK(s.airway == out);
        ++cases;
      }
    }
  }
  CHECK(cases >= 12 * 2);
}

TEST_CASE("lone UAV crosses every connection") {
  const Scenario sc = paper_sim();
  const Network net = build_network(sc.network);
  const ControlParams cp = sc.sim.control.resolve(net.params());
  int cases = 0;
  for (std::size_t node = 0; node < net.nodes().size(); ++node) {
    const Node& n = net.nodes()[node];
    if (n.spec.kind != NodeKind::Connection) continue;
    for (std::size_t in : n.level_airways) {
      const std::size_t out = n.level_airways[0] == in ? n.level_airways[1] : n.level_airways[0];
      const std::size_t from = net.airways()[in].from == node ? net.airways()[in].to : net.airways()[in].from;
      const std::size_t to = net.airways()[out].from == node ? net.airways()[out].to : net.airways()[out].from;
      Solo solo{net, RoutePlan{{from, node, to, to}}, cp};
      UavState s;
      s.id = 1;
      s.mode = FlightMode::ConnectionTransit;
      s.node = node;
      s.cursor = 1;
      s.prev_airway = in;
      const FinishingLine& fin = net.finishing_line(in, net.airways()[in].to == node ? Travel::Forward : Travel::Backward);
      s.position = (fin.a + fin.b) * 0.5;
      s.velocity = fin.direction * cp.v_cruise;
      double t = 0.0;
      std::optional<Transition> tr;
      while (!tr && t < 60.0) {
        tr = solo.step(s);
        t += solo.dt;
      }
      INFO("connection " << n.spec.id);
      REQUIRE(tr.has_value());
      CHECK(tr->to == FlightMode::Highway);
      CHECK(s.airway == out);
      CHECK(net.distance_outside(s.position) <= 0.1 * net.params().r_aw);
      ++cases;
    }
  }
  CHECK(cases == 8);
}

TEST_CASE("takeoff") {
  const Scenario sc = paper_sim();
  const Network net = build_network(sc.network);
  const ControlParams cp = sc.sim.control.resolve(net.params());
  const RoutePlan route = plan(net, {17, 1, 2, 5, 6, 20});
  const ControlContext ctx{net, route, cp, 0.05};
  UavState a;
  a.id = 1;
  launch(a, net, route);
  CHECK(a.mode == FlightMode::TakeOff);
  CHECK(a.position.z == 0.0);

  SUBCASE("climbs straight up at cruise speed") {
    const Vec3 v = takeoff_command(a, {}, ctx);
    CHECK(v.x == doctest::Approx(0.0));
    CHECK(v.y == doctest::Approx(0.0));
    CHECK(v.z == doctest::Approx(cp.v_cruise));
  }
  SUBCASE("second departure holds until the first clears the sensing radius") {
    UavState lead = a;
    lead.id = 2;
    lead.position.z += 0.5 * cp.r_rep;
    std::vector<UavState> pair{a, lead};
    CHECK(takeoff_command(pair[0], ptrs(pair, 0), ctx).z <= 0.0);
    pair[1].position.z = a.position.z + 1.5 * cp.r_rep;
    CHECK(takeoff_command(pair[0], ptrs(pair, 0), ctx).z > 0.0);
  }
  SUBCASE("reaches the top and enters the hub") {
    Solo solo{net, route, cp};
    std::optional<Transition> tr;
    double t = 0.0;
    while (!tr && t < 60.0) {
      tr = solo.step(a);
      t += solo.dt;
    }
    REQUIRE(tr.has_value());
    CHECK(tr->to == FlightMode::RotaryIsland);
    CHECK(a.node == net.node_index(1));
    CHECK(a.position.z == doctest::Approx(30.0).epsilon(0.01));
  }
}

TEST_CASE("landing UAV over the pad descends and finishes") {
  const Scenario sc = paper_sim();
  const Network net = build_network(sc.network);
  const ControlParams cp = sc.sim.control.resolve(net.params());
  const RoutePlan route = plan(net, {20, 6, 5, 2, 1, 17});
  Solo solo{net, route, cp};
  UavState s;
  s.id = 1;
  s.mode = FlightMode::Landing;
  s.cursor = route.nodes.size() - 1;
  s.destination = route.nodes.back();
  s.position = landing_top(net, route);
  std::optional<Transition> tr;
  double t = 0.0;
  double low = s.position.z;
  while (!tr && t < 60.0) {
    tr = solo.step(s);
    low = std::min(low, s.position.z);
    t += solo.dt;
  }
  REQUIRE(tr.has_value());
  CHECK(tr->to == FlightMode::Done);
  CHECK(distance(s.position, landing_pad(net, route)) < 0.2);
  CHECK(low >= -1e-9);
}

TEST_CASE("transitions at finishing lines") {
  const Network net = build_network(paper_flight().network);
  const ControlParams cp = paper_flight().sim.control.resolve(net.params());
  auto arriving = [&](const RoutePlan& route, std::size_t cursor) {
    UavState s;
    s.id = 1;
    s.mode = FlightMode::Highway;
    s.cursor = cursor;
    s.destination = route.nodes.back();
    s.airway = *net.airway_between(route.nodes[cursor - 1], route.nodes[cursor]);
    s.travel = net.travel_from(s.airway, route.nodes[cursor - 1]);
    const FinishingLine& fin = net.finishing_line(s.airway, s.travel);
    s.position = (fin.a + fin.b) * 0.5 - fin.direction * 1e-3;
    return s;
  };

  SUBCASE("next node a hub: rotary island") {
    const RoutePlan route = plan(net, {8, 6, 4, 3, 1, 7});
    UavState s = arriving(route, 2);
    const auto tr = mode_transition(s, {net, route, cp, 0.05});
    REQUIRE(tr.has_value());
    CHECK(tr->to == FlightMode::RotaryIsland);
    CHECK(s.node == net.node_index(4));
  }
  SUBCASE("next node a connection: connection transit") {
    const RoutePlan route = plan(net, {7, 1, 2, 4, 6, 8});
    UavState s = arriving(route, 2);
    const auto tr = mode_transition(s, {net, route, cp, 0.05});
    REQUIRE(tr.has_value());
    CHECK(tr->to == FlightMode::ConnectionTransit);
    CHECK(s.node == net.node_index(2));
  }
  SUBCASE("connection over the final airport: landing") {
    const RoutePlan route = plan(net, {7, 1, 3, 4, 6, 8});
    UavState s = arriving(route, 4);
    const auto tr = mode_transition(s, {net, route, cp, 0.05});
    REQUIRE(tr.has_value());
    CHECK(tr->to == FlightMode::Landing);
  }
  SUBCASE("far from the line: no change") {
    const RoutePlan route = plan(net, {8, 6, 4, 3, 1, 7});
    UavState s = arriving(route, 2);
    s.position -= net.finishing_line(s.airway, s.travel).direction * 0.5;
    CHECK_FALSE(mode_transition(s, {net, route, cp, 0.05}).has_value());
    CHECK(s.mode == FlightMode::Highway);
  }
}

TEST_CASE("level termination: highway straight into landing") {
  const Network net = straight();
  const ControlParams cp = sim_params();
  const RoutePlan route = plan(net, {1, 2});
  UavState s = on_lane(net, 199.0, kSim.lane_offset(), 1);
  s.position = net.finishing_line(0, Travel::Forward).nearest_point(s.position);
  const auto tr = mode_transition(s, {net, route, cp, 0.05});
  REQUIRE(tr.has_value());
  CHECK(tr->to == FlightMode::Landing);
}

TEST_CASE("exhausted route is a fault") {
  const Network net = straight();
  const ControlParams cp = sim_params();
  const RoutePlan route = plan(net, {1, 2});
  UavState s = on_lane(net, 50.0, kSim.lane_offset(), 1);
  s.mode = FlightMode::ConnectionTransit;
  s.cursor = 1;
  const auto tr = mode_transition(s, {net, route, cp, 0.05});
  REQUIRE(tr.has_value());
  CHECK(s.fault);
  CHECK(tr->detail.rfind("fault", 0) == 0);
}

TEST_CASE("flight mode names round trip") {
  for (auto m : {FlightMode::Grounded, FlightMode::TakeOff, FlightMode::Highway, FlightMode::ConnectionTransit,
                 FlightMode::RotaryIsland, FlightMode::Landing, FlightMode::Done}) {
    CHECK(parse_flight_mode(to_string(m)) == m);
  }
  CHECK_FALSE(parse_flight_mode("Hover").has_value());
}

TEST_CASE("control defaults and validation") {
  const ControlParams cp = ControlParams{}.resolve(kSim);
  CHECK(cp.r_rep == 2.0 * kSim.r_a);
  CHECK(cp.d_curb == kSim.r_a);
  CHECK(cp.gate_lat_tol == 0.25 * kSim.r_aw);
  // Repulsion at r_a equals twice the cruise speed.
  CHECK(cp.k_rep * (1.0 / kSim.r_a - 1.0 / cp.r_rep) == doctest::Approx(2.0 * cp.v_cruise));
  CHECK_NOTHROW(cp.validate(kSim));
  ControlParams bad = cp;
  bad.beta = 0.0;
  CHECK_THROWS_AS(bad.validate(kSim), std::invalid_argument);
  bad = cp;
  bad.r_rep = kSim.r_a;
  CHECK_THROWS_AS(bad.validate(kSim), std::invalid_argument);
}
