#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <random>
#include <set>

#include "skyhw/scenario.hpp"
#include "skyhw/scenarios.hpp"

namespace skyhw {

void check_scenario(const Scenario& s, const Network& net) {
  std::set<int> ids;
  for (const auto& u : s.uavs) {
    const std::string who = "uav " + std::to_string(u.id);
    if (!ids.insert(u.id).second) throw ScenarioError("duplicate uav id " + std::to_string(u.id));
    if (u.priority < 0 || u.priority > 7) throw ScenarioError(who + ": priority must be in 0..7");
    if (u.cruise_speed < 0.0 || !std::isfinite(u.cruise_speed)) throw ScenarioError(who + ": bad cruise speed");
    if (u.depart && !(*u.depart >= 0.0)) throw ScenarioError(who + ": depart must be >= 0");
    if (u.color.empty() || u.color.find_first_of(" \t=#") != std::string::npos) {
      throw ScenarioError(who + ": color must be a single word");
    }
  }
  std::set<int> routed;
  for (const auto& r : s.routes) {
    const std::string who = "route of uav " + std::to_string(r.uav);
    if (!ids.count(r.uav)) throw ScenarioError(who + ": no such uav");
    if (!routed.insert(r.uav).second) throw ScenarioError(who + ": duplicate route");
    const RouteCheck rc = validate_route(net, r);
    if (!rc.pass) throw ScenarioError(who + ": " + rc.reason);
  }
  for (int id : ids) {
    if (!routed.count(id)) throw ScenarioError("uav " + std::to_string(id) + " has no route");
  }
  if (!(s.sim.dt > 0.0) || !(s.sim.max_time > 0.0)) throw ScenarioError("dt and max_time must be > 0");
  if (s.sim.spawn_spacing < 0.0 || s.sim.depart_jitter < 0.0) throw ScenarioError("spawn timing must be >= 0");
  if (s.sim.threads < 1) throw ScenarioError("threads must be >= 1");
}

namespace {

const char* const kColors[] = {"blue", "red", "green", "yellow", "purple", "orange", "cyan", "magenta"};

struct Lattice {
  NetworkConfig net;
  std::vector<std::pair<int, int>> airports;  // (airport id, hub id)
};

// Grid of hubs without its four corners; each corner is replaced by a
// connection joined to the two neighbouring edge hubs. Every edge hub gets an
// airport directly below it.
Lattice chamfered_lattice(int rows, int cols, double sx, double sy, double altitude, double jitter,
                          std::mt19937_64* rng) {
  Lattice L;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto jit = [&](double s) { return rng && jitter > 0.0 ? jitter * s * u(*rng) : 0.0; };
  auto corner = [&](int i, int j) { return (i == 0 || i == cols - 1) && (j == 0 || j == rows - 1); };
  std::map<std::pair<int, int>, int> grid;
  int next = 1;
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < cols; ++i) {
      if (corner(i, j)) continue;
      const Vec3 c{i * sx + jit(sx), j * sy + jit(sy), altitude};
      L.net.nodes.push_back({next, NodeKind::Hub, c, {}, RotaryDirection::Clockwise});
      grid[{i, j}] = next++;
    }
  }
  int airway = 1;
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < cols; ++i) {
      if (!grid.count({i, j})) continue;
      if (grid.count({i + 1, j})) L.net.airways.push_back({airway++, grid[{i, j}], grid[{i + 1, j}]});
      if (grid.count({i, j + 1})) L.net.airways.push_back({airway++, grid[{i, j}], grid[{i, j + 1}]});
    }
  }
  for (int ci : {0, cols - 1}) {
    for (int cj : {0, rows - 1}) {
      const int di = ci == 0 ? 1 : -1;
      const int dj = cj == 0 ? 1 : -1;
      const Vec3 c{(ci + 0.3 * di) * sx + jit(sx), (cj + 0.3 * dj) * sy + jit(sy), altitude};
      const int id = next++;
      L.net.nodes.push_back({id, NodeKind::Connection, c, {}, RotaryDirection::Clockwise});
      L.net.airways.push_back({airway++, grid[{ci + di, cj}], id});
      L.net.airways.push_back({airway++, id, grid[{ci, cj + dj}]});
    }
  }
  std::vector<int> edge_hubs;
  for (const auto& [ij, id] : grid) {
    const auto [i, j] = ij;
    if (i == 0 || j == 0 || i == cols - 1 || j == rows - 1) edge_hubs.push_back(id);
  }
  std::sort(edge_hubs.begin(), edge_hubs.end());
  for (int hub : edge_hubs) {
    const auto& h = *std::find_if(L.net.nodes.begin(), L.net.nodes.end(), [&](const NodeSpec& n) { return n.id == hub; });
    const int id = next++;
    L.net.nodes.push_back({id, NodeKind::Termination, {h.center.x, h.center.y, 0.0}, {}, RotaryDirection::Clockwise});
    L.net.airways.push_back({airway++, id, hub});
    L.airports.emplace_back(id, hub);
  }
  return L;
}

// Shortest level path between two intersections by center-line length; ties by node index.
std::vector<int> shortest_path(const Network& net, int from_id, int to_id) {
  const std::size_t n = net.nodes().size();
  const std::size_t src = net.node_index(from_id);
  const std::size_t dst = net.node_index(to_id);
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> prev(n, kNone);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0.0;
  pq.push({0.0, src});
  while (!pq.empty()) {
    const auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (const auto& [w, aw] : net.adjacency(v)) {
      if (net.airways()[aw].riser || !net.nodes()[w].is_intersection()) continue;
      const double nd = d + net.airways()[aw].geometry.length();
      if (nd < dist[w] || (nd == dist[w] && prev[w] != kNone && v < prev[w])) {
        dist[w] = nd;
        prev[w] = v;
        pq.push({nd, w});
      }
    }
  }
  if (!std::isfinite(dist[dst])) throw ScenarioError("no path between nodes");
  std::vector<int> path;
  for (std::size_t v = dst; v != kNone; v = prev[v]) path.push_back(net.nodes()[v].spec.id);
  std::reverse(path.begin(), path.end());
  return path;
}

void add_fleet(Scenario& s, const Lattice& L, int count, std::mt19937_64& rng, double base_speed) {
  const Network net = build_network(s.network);
  std::uniform_int_distribution<std::size_t> pick(1, L.airports.size() - 1);
  for (int k = 0; k < count; ++k) {
    const std::size_t a = static_cast<std::size_t>(k) % L.airports.size();
    const std::size_t b = (a + pick(rng)) % L.airports.size();
    UavSpec u;
    u.id = k + 1;
    u.priority = k % 5 == 0 ? 1 : 0;
    u.cruise_speed = base_speed * (0.875 + 0.125 * (k % 3));
    u.color = kColors[a % std::size(kColors)];
    Route r{u.id, {L.airports[a].first}};
    for (int hop : shortest_path(net, L.airports[a].second, L.airports[b].second)) r.nodes.push_back(hop);
    r.nodes.push_back(L.airports[b].first);
    s.uavs.push_back(u);
    s.routes.push_back(r);
  }
}

}  // namespace

Scenario paper_flight() {
  Scenario s;
  s.name = "paper_flight";
  s.network.params = GlobalParams{0.4, 0.6, 0.6, 0.6, 0.2};
  auto node = [&](int id, NodeKind k, double x, double y, double z) {
    s.network.nodes.push_back({id, k, {x, y, z}, {}, RotaryDirection::Clockwise});
  };
  node(1, NodeKind::Connection, -1.0, 2.8, 1.0);
  node(2, NodeKind::Connection, 1.4, 2.8, 1.0);
  node(3, NodeKind::Hub, -1.0, 0.0, 1.0);
  node(4, NodeKind::Hub, 1.4, 0.0, 1.0);
  node(5, NodeKind::Connection, -1.0, -2.8, 1.0);
  node(6, NodeKind::Connection, 1.4, -2.8, 1.0);
  node(7, NodeKind::Termination, -1.0, 2.8, 0.0);
  node(8, NodeKind::Termination, 1.4, -2.8, 0.0);
  int id = 1;
  for (auto [a, b] : {std::pair{1, 2}, {1, 3}, {2, 4}, {3, 4}, {3, 5}, {4, 6}, {5, 6}, {7, 1}, {8, 6}}) {
    s.network.airways.push_back({id++, a, b});
  }
  const std::vector<std::vector<int>> routes{
      {7, 1, 2, 4, 6, 8}, {7, 1, 3, 4, 6, 8}, {8, 6, 4, 3, 1, 7},
      {8, 6, 5, 3, 1, 7}, {7, 1, 3, 5, 6, 8}, {8, 6, 5, 3, 4, 2, 1, 7},
  };
  for (std::size_t k = 0; k < routes.size(); ++k) {
    UavSpec u;
    u.id = static_cast<int>(k + 1);
    u.color = kColors[k];
    s.uavs.push_back(u);
    s.routes.push_back({u.id, routes[k]});
  }
  s.sim.dt = 0.05;
  s.sim.max_time = 190.0;
  s.sim.spawn_spacing = 2.0;
  s.sim.control.v_cruise = 0.25;
  s.sim.control.v_max = 0.5;
  s.sim.control.a_max = 1.0;
  return s;
}

Scenario paper_sim() {
  Scenario s;
  s.name = "paper_sim";
  s.network.params = GlobalParams{3.0, 9.0, 4.0, 9.0, 5.0};
  Lattice L = chamfered_lattice(4, 4, 100.0, 100.0, 30.0, 0.0, nullptr);
  s.network.nodes = L.net.nodes;
  s.network.airways = L.net.airways;
  s.sim.dt = 0.05;
  s.sim.max_time = 600.0;
  s.sim.spawn_spacing = 2.0;
  s.sim.control.v_cruise = 4.0;
  s.sim.control.v_max = 6.0;
  s.sim.control.a_max = 8.0;
  std::mt19937_64 rng(20);
  add_fleet(s, L, 80, rng, 4.0);
  return s;
}

Scenario random_scenario(std::uint64_t seed, const RandomOptions& opt) {
  if (opt.rows < 3 || opt.cols < 3) throw ScenarioError("random lattice needs at least 3 rows and 3 columns");
  if (opt.uavs < 0) throw ScenarioError("uav count must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> spacing(100.0, 140.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Scenario s;
    s.name = "random";
    s.network.params = GlobalParams{3.0, 9.0, 4.0, 9.0, 5.0};
    const double sx = spacing(rng);
    const double sy = spacing(rng);
    Lattice L = chamfered_lattice(opt.rows, opt.cols, sx, sy, 30.0, 0.04, &rng);
    s.network.nodes = L.net.nodes;
    s.network.airways = L.net.airways;
    if (!validate_network(build_network(s.network)).all_pass()) continue;
    s.sim.seed = seed;
    s.sim.max_time = 900.0;
    s.sim.control.v_cruise = 4.0;
    s.sim.control.v_max = 6.0;
    s.sim.control.a_max = 8.0;
    add_fleet(s, L, opt.uavs, rng, 4.0);
    return s;
  }
  throw ScenarioError("could not draw a valid random lattice");
}

}  // namespace skyhw
