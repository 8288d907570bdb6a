#include "skyhw/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <thread>

namespace skyhw {

namespace {

// Point in the (e1, e2) plane at polar (m, phi).
struct Planar {
  double u;
  double w;
};

}  // namespace

Vec3 limit_velocity(const Vec3& v_old, const Vec3& v_cmd, const KinematicLimits& lim, double dt) {
  const double amax = lim.a_max * dt;
  const Vec3 cmd = clamp_norm(v_cmd, lim.v_max);
  const Vec3 vc = clamp_norm(v_old + clamp_norm(cmd - v_old, amax), lim.v_max);
  const double so = v_old.norm();
  const double sc = vc.norm();
  if (so == 0.0 || sc == 0.0) return vc;
  const double alpha = angle_between(v_old, vc);
  if (alpha <= std::min(so, sc) * dt / lim.r_t) return vc;
  // Barely moving and pointed the wrong way: stop, then leave from rest next tick.
  if (so <= 0.5 * amax) return {};

  const Vec3 e1 = v_old / so;
  Vec3 perp = vc - e1 * vc.dot(e1);
  if (perp.norm() <= 1e-12 * sc) {
    perp = kUp.cross(e1);
    if (perp.norm() <= 1e-9) perp = Vec3{1.0, 0.0, 0.0}.cross(e1);
  }
  const Vec3 e2 = perp.normalized();
  const Planar target{vc.dot(e1), vc.dot(e2)};

  // Best heading for a given speed m: as close to the target as the turn and
  // acceleration limits allow.
  auto eval = [&](double m, double& phi_out) {
    const double turn = std::min(so, m) * dt / lim.r_t;
    double phi = std::min(alpha, turn);
    if (m > 0.0) {
      const double c = (m * m + so * so - amax * amax) / (2.0 * m * so);
      if (c > 1.0) return std::numeric_limits<double>::infinity();
      if (c > -1.0) phi = std::min(phi, std::acos(c));
    }
    phi_out = phi;
    const double du = m * std::cos(phi) - target.u;
    const double dw = m * std::sin(phi) - target.w;
    return du * du + dw * dw;
  };

  double lo = std::max(0.0, so - amax);
  double hi = std::min(lim.v_max, so + amax);
  double best_m = so;
  double best_phi = 0.0;
  double best = eval(so, best_phi);
  for (int pass = 0; pass < 3; ++pass) {
    constexpr int kSamples = 48;
    const double step = (hi - lo) / kSamples;
    for (int k = 0; k <= kSamples; ++k) {
      const double m = lo + step * k;
      double phi = 0.0;
      const double f = eval(m, phi);
      if (f < best) {
        best = f;
        best_m = m;
        best_phi = phi;
      }
    }
    lo = std::max(lo, best_m - step);
    hi = std::min(hi, best_m + step);
  }
  return (e1 * std::cos(best_phi) + e2 * std::sin(best_phi)) * best_m;
}

Simulation::Simulation(const Network& net, const Scenario& scenario) : net_(net) {
  const ValidationReport rep = validate_network(net);
  if (!rep.all_pass()) {
    throw SimulationError("network fails validation (" + rep.failures().front()->id + ")");
  }
  try {
    check_scenario(scenario, net);
  } catch (const ScenarioError& e) {
    throw SimulationError(e.what());
  }
  const GlobalParams& gp = net.params();
  cp_ = scenario.sim.control.resolve(gp);
  try {
    cp_.validate(gp);
  } catch (const std::invalid_argument& e) {
    throw SimulationError(std::string("control: ") + e.what());
  }
  dt_ = scenario.sim.dt;
  max_time_ = scenario.sim.max_time;
  threads_ = std::max(1, scenario.sim.threads);
  if (!(cp_.v_max * dt_ < 0.25 * gp.r_a)) {
    throw SimulationError("time step too large: v_max * dt must stay below r_a / 4");
  }
  lim_ = {cp_.v_max, cp_.a_max, gp.r_t};

  std::vector<UavSpec> fleet = scenario.uavs;
  std::sort(fleet.begin(), fleet.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::map<int, const Route*> by_uav;
  for (const auto& r : scenario.routes) by_uav[r.uav] = &r;

  std::mt19937_64 rng(scenario.sim.seed);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  std::map<std::size_t, int> per_airport;
  for (const auto& spec : fleet) {
    UavState s;
    s.id = spec.id;
    s.priority = spec.priority;
    s.cruise_speed = spec.cruise_speed;
    RoutePlan plan;
    for (int node : by_uav.at(spec.id)->nodes) plan.nodes.push_back(net.node_index(node));
    const int slot = per_airport[plan.nodes.front()]++;
    double depart = spec.depart ? *spec.depart : slot * scenario.sim.spawn_spacing;
    depart += scenario.sim.depart_jitter * jitter(rng);
    pads_.push_back(takeoff_pad(net, plan));
    uavs_.push_back(s);
    routes_.push_back(std::move(plan));
    depart_.push_back(depart);
  }
  trace_.tick_begin.push_back(0);
}

void Simulation::spawn() {
  const double now = time() + 1e-9;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < uavs_.size(); ++i) {
    if (uavs_[i].mode == FlightMode::Grounded) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return depart_[a] < depart_[b] || (depart_[a] == depart_[b] && uavs_[a].id < uavs_[b].id);
  });
  std::vector<std::size_t> blocked;  // airports whose queue head could not leave
  for (std::size_t i : order) {
    const std::size_t airport = routes_[i].nodes.front();
    if (std::find(blocked.begin(), blocked.end(), airport) != blocked.end()) continue;
    bool clear = depart_[i] <= now;
    for (std::size_t j = 0; clear && j < uavs_.size(); ++j) {
      const auto m = uavs_[j].mode;
      if (m == FlightMode::Grounded || m == FlightMode::Done) continue;
      if (distance(uavs_[j].position, pads_[i]) < 1.5 * cp_.r_rep) clear = false;
    }
    if (!clear) {
      blocked.push_back(airport);
      continue;
    }
    launch(uavs_[i], net_, routes_[i]);
    trace_.events.push_back({time(), uavs_[i].id, FlightMode::Grounded, FlightMode::TakeOff,
                             "airport " + std::to_string(net_.nodes()[routes_[i].nodes.front()].spec.id)});
  }
}

void Simulation::step() {
  spawn();

  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < uavs_.size(); ++i) {
    const auto m = uavs_[i].mode;
    if (m != FlightMode::Grounded && m != FlightMode::Done) live.push_back(i);
  }
  std::vector<Vec3> pts;
  pts.reserve(live.size());
  for (std::size_t i : live) {
    uavs_[i].in_cylinder = net_.intersection_containing(uavs_[i].position).has_value();
    pts.push_back(uavs_[i].position);
  }
  grid_.build(pts, cp_.r_rep);
  std::vector<char> busy = busy_columns();

  // Phase 1: commands from the immutable snapshot.
  std::vector<Vec3> cmd(live.size());
  std::vector<char> failed(live.size(), 0);
  auto compute = [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint32_t> hits;
    std::vector<const UavState*> nb;
    for (std::size_t k = begin; k < end; ++k) {
      const UavState& self = uavs_[live[k]];
      if (self.fault) continue;
      grid_.query(self.position, cp_.r_rep, hits);
      nb.clear();
      for (std::uint32_t h : hits) {
        if (h != k) nb.push_back(&uavs_[live[h]]);
      }
      const ControlContext ctx{net_, routes_[live[k]], cp_, dt_, busy};
      try {
        cmd[k] = command(self, nb, ctx);
      } catch (const NetworkError&) {
        failed[k] = 1;
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(threads_, std::max<std::size_t>(1, live.size() / 8));
  if (workers <= 1) {
    compute(0, live.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (live.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t b = w * chunk;
      const std::size_t e = std::min(live.size(), b + chunk);
      if (b < e) pool.emplace_back(compute, b, e);
    }
    for (auto& t : pool) t.join();
  }

  // Phase 2: kinematics and integration.
  for (std::size_t k = 0; k < live.size(); ++k) {
    UavState& s = uavs_[live[k]];
    if (failed[k]) s.fault = true;
    const Vec3 v = s.fault ? limit_velocity(s.velocity, {}, lim_, dt_) : limit_velocity(s.velocity, cmd[k], lim_, dt_);
    s.velocity = v;
    s.position += v * dt_;
    if (!s.position.finite() || !s.velocity.finite()) {
      throw SimulationError("non-finite state for UAV " + std::to_string(s.id) + " at tick " +
                            std::to_string(tick_ + 1));
    }
  }
  ++tick_;

  // Sequential in id order, so a column claimed here is seen by the next UAV.
  busy = busy_columns();
  for (std::size_t i : live) {
    const ControlContext ctx{net_, routes_[i], cp_, dt_, busy};
    if (auto tr = mode_transition(uavs_[i], ctx)) {
      trace_.events.push_back({time(), uavs_[i].id, tr->from, tr->to, tr->detail});
      if (tr->to == FlightMode::Landing) busy[uavs_[i].destination] = 1;
    }
  }
  log_tick(live);
}

std::vector<char> Simulation::busy_columns() const {
  std::vector<char> busy(net_.nodes().size(), 0);
  // Only the head of the column blocks; deeper down the landing queue keeps spacing.
  for (std::size_t i = 0; i < uavs_.size(); ++i) {
    const UavState& u = uavs_[i];
    if (u.mode != FlightMode::Landing) continue;
    if (u.position.z > landing_top(net_, routes_[i]).z - 2.0 * cp_.r_rep) busy[u.destination] = 1;
  }
  return busy;
}

void Simulation::log_tick(const std::vector<std::size_t>& live) {
  const double t = time();
  for (std::size_t i : live) {
    const UavState& s = uavs_[i];
    TraceRecord r{t, s.id, s.position, s.velocity, s.mode, s.priority, -1};
    if (s.mode == FlightMode::RotaryIsland && s.node != kNone) r.hub = net_.nodes()[s.node].spec.id;
    trace_.records.push_back(r);
  }
  trace_.tick_begin.push_back(trace_.records.size());
}

bool Simulation::finished() const {
  return std::all_of(uavs_.begin(), uavs_.end(), [](const UavState& s) { return s.mode == FlightMode::Done; });
}

void Simulation::run() {
  while (!finished() && time() < max_time_ - 1e-9) step();
}

SimTrace simulate(const Network& net, const Scenario& scenario) {
  Simulation sim(net, scenario);
  sim.run();
  return sim.take_trace();
}

}  // namespace skyhw
