#include "skyhw/control.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace skyhw {

namespace {

constexpr std::array<const char*, 7> kModeNames{"Grounded",          "TakeOff",      "Highway", "ConnectionTransit",
                                                "RotaryIsland",      "Landing",      "Done"};

double wrap_angle(double a) {
  while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
  while (a < -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

Vec3 toward(const Vec3& from, const Vec3& to, double speed) {
  const Vec3 d = to - from;
  const double n = d.norm();
  return n > 0.0 ? d * (speed / n) : Vec3{};
}

// Speed profile that stops at the target: limited by cruise, braking distance and one step.
Vec3 arrive(const Vec3& from, const Vec3& to, double cruise, double brake, double dt) {
  const double d = distance(from, to);
  const double s = std::min({cruise, std::sqrt(2.0 * brake * d), d / dt});
  return toward(from, to, s);
}

double arrive_1d(double from, double to, double cruise, double brake, double dt) {
  const double d = std::abs(to - from);
  const double s = std::min({cruise, std::sqrt(2.0 * brake * d), d / dt});
  return to >= from ? s : -s;
}

double curb_push(double clearance, const ControlParams& cp) {
  return clearance < cp.d_curb ? cp.k_curb * (cp.d_curb - clearance) / cp.d_curb : 0.0;
}

double cruise_of(const UavState& s, const ControlParams& cp) {
  return s.cruise_speed > 0.0 ? std::min(s.cruise_speed, cp.v_max) : cp.v_cruise;
}

double altitude_hold(const UavState& s, double z, const ControlParams& cp) {
  return std::clamp(cp.k_radial * (z - s.position.z), -cp.v_cruise, cp.v_cruise);
}

Vec3 repulsion_sum(const UavState& self, std::span<const UavState* const> neighbors, const ControlParams& cp) {
  Vec3 f;
  for (const UavState* o : neighbors) {
    if (interacts(self, *o)) f += neighbor_repulsion(self, *o, cp);
  }
  return f;
}

double brake_rate(const ControlParams& cp) { return 0.5 * cp.a_max; }
double eps_z(const GlobalParams& gp) { return 0.02 * gp.h_aw; }
double eps_h(const GlobalParams& gp) { return 0.05 * gp.r_aw; }

struct Column {
  Vec3 base;
  Vec3 top;
};

Column column(const Network& net, std::size_t from, std::size_t to, bool departing) {
  const auto aw = net.airway_between(from, to);
  if (!aw) throw NetworkError("route hop without airway");
  const Travel tr = net.travel_from(*aw, from);
  const AirwayGeometry g = net.travel_geometry(*aw, tr);
  const double c = net.params().lane_offset();
  if (net.airways()[*aw].riser) {
    return {g.frame().to_world(0.0, c, 0.0), g.frame().to_world(g.length(), c, 0.0)};
  }
  // Level airport: pad and column top coincide with the lane at the airway end.
  const Vec3 p = departing ? g.frame().to_world(0.0, c, 0.0)
                           : g.frame().to_world(net.finishing_line(*aw, tr).t, c, 0.0);
  return {p, p};
}

// Curb push inside the carriageway of a riser, from `from` toward `to`; zero
// for a level airport.
Vec3 column_curbs(const UavState& self, const ControlContext& ctx, std::size_t from, std::size_t to) {
  const auto aw = ctx.net.airway_between(from, to);
  if (!aw || !ctx.net.airways()[*aw].riser) return {};
  const GlobalParams& gp = ctx.net.params();
  const AirwayGeometry g = ctx.net.travel_geometry(*aw, ctx.net.travel_from(*aw, from));
  const auto& fr = g.frame();
  const auto l = fr.to_local(self.position);
  const double inner = 0.5 * gp.r_is;
  const double outer = inner + gp.r_aw;
  return fr.lateral * (curb_push(l.lat - inner, ctx.cp) - curb_push(outer - l.lat, ctx.cp)) +
         fr.vertical * (curb_push(l.vert + 0.5 * gp.h_aw, ctx.cp) - curb_push(0.5 * gp.h_aw - l.vert, ctx.cp));
}

// The pad is solid: never command a step below it.
Vec3 above_ground(const UavState& self, Vec3 v, double pad_z, double dt) {
  if (self.position.z + v.z * dt < pad_z) v.z = std::max(0.0, (pad_z - self.position.z) / dt);
  return v;
}

// Exit window on the ring of a hub.
struct Window {
  Vec3 target;
  Vec3 direction;  // zero for landing
  double center = 0.0;
  double half_arc = 0.0;
};

Window window_for(const UavState& self, const ExitTarget& ex, const ControlContext& ctx) {
  const Node& hub = ctx.net.nodes()[self.node];
  Window w;
  if (ex.airway != kNone) {
    const ExitGate& g = ctx.net.exit_gate(self.node, ex.airway);
    w.target = g.lane_target;
    w.direction = g.direction;
    w.center = g.center_angle;
    w.half_arc = g.half_arc;
  } else {
    w.target = ex.landing_top;
    const Vec3 rel = ex.landing_top - hub.spec.center;
    w.center = std::atan2(rel.y, rel.x);
    w.half_arc = std::asin(std::min(1.0, 0.5 * ctx.net.params().r_aw / hub.radius)) + 2.0 * std::numbers::pi / 180.0;
  }
  return w;
}

// Angular progress past the window center along the circulation direction.
double progress(const UavState& self, const Window& w, const Node& hub) {
  const Vec3 rel = self.position - hub.spec.center;
  const double d = wrap_angle(std::atan2(rel.y, rel.x) - w.center);
  return hub.spec.rotary == RotaryDirection::Clockwise ? -d : d;
}

double lead_angle(const UavState& self, const Node& hub, const GlobalParams& gp) {
  const double rho = std::max((self.position - hub.spec.center).horizontal().norm(), 1e-9);
  return std::min(std::numbers::pi / 3.0, 1.5 * gp.r_t / rho);
}

Vec3 wall_push(const UavState& self, const Node& n, const ControlParams& cp) {
  const Vec3 rel = (self.position - n.spec.center).horizontal();
  const double rho = rel.norm();
  if (rho <= 0.0) return {};
  return rel * (-curb_push(n.radius - rho, cp) / rho);
}

Travel arriving_travel(const Network& net, std::size_t airway, std::size_t node) {
  return net.airways()[airway].to == node ? Travel::Forward : Travel::Backward;
}

void enter_intersection(UavState& s, std::size_t node, std::size_t prev_airway, const Network& net) {
  s.node = node;
  s.prev_airway = prev_airway;
  s.airway = kNone;
  s.mode = net.nodes()[node].spec.kind == NodeKind::Hub ? FlightMode::RotaryIsland : FlightMode::ConnectionTransit;
}

void enter_highway(UavState& s, const ExitTarget& ex) {
  s.airway = ex.airway;
  s.travel = ex.travel;
  s.prev_airway = kNone;
  s.node = kNone;
  s.mode = FlightMode::Highway;
  ++s.cursor;
}

}  // namespace

std::string to_string(FlightMode m) { return kModeNames[static_cast<std::size_t>(m)]; }

std::optional<FlightMode> parse_flight_mode(const std::string& s) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i) {
    if (s == kModeNames[i]) return static_cast<FlightMode>(i);
  }
  return std::nullopt;
}

ControlParams ControlParams::resolve(const GlobalParams& gp) const {
  ControlParams r = *this;
  if (r.v_cruise <= 0.0) r.v_cruise = 1.0;
  if (r.v_max <= 0.0) r.v_max = 1.5 * r.v_cruise;
  if (r.a_max <= 0.0) r.a_max = 2.0 * r.v_cruise;
  if (r.r_rep <= 0.0) r.r_rep = 2.0 * gp.r_a;
  if (r.r_core <= 0.0) r.r_core = std::min(1.5 * gp.r_a, r.r_rep);
  if (r.horizon <= 0.0) r.horizon = r.r_rep / (2.0 * r.v_cruise);
  if (r.k_core <= 0.0) r.k_core = r.v_max / (1.0 / gp.r_a - 1.0 / r.r_core);
  if (r.k_rep <= 0.0) r.k_rep = 4.0 * r.v_cruise * gp.r_a;
  if (r.k_curb <= 0.0) r.k_curb = 3.0 * r.v_cruise;
  if (r.d_curb <= 0.0) r.d_curb = gp.r_a;
  if (r.gate_lat_tol <= 0.0) r.gate_lat_tol = 0.25 * gp.r_aw;
  return r;
}

void ControlParams::validate(const GlobalParams& gp) const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be > 0");
  };
  positive(v_cruise, "v_cruise");
  positive(v_max, "v_max");
  positive(a_max, "a_max");
  positive(k_att, "k_att");
  positive(k_rep, "k_rep");
  positive(k_core, "k_core");
  positive(horizon, "horizon");
  positive(k_curb, "k_curb");
  positive(d_curb, "d_curb");
  positive(k_radial, "k_radial");
  positive(gate_heading_tol, "gate_heading_tol");
  positive(gate_lat_tol, "gate_lat_tol");
  positive(trigger_steps, "trigger_steps");
  if (!(deflect >= 0.0)) throw std::invalid_argument("deflect must be >= 0");
  if (!(swirl >= 0.0)) throw std::invalid_argument("swirl must be >= 0");
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must be in (0, 1]");
  if (!(r_rep > gp.r_a)) throw std::invalid_argument("r_rep must exceed r_a");
  if (!(r_core > gp.r_a && r_core <= r_rep)) throw std::invalid_argument("r_core must lie in (r_a, r_rep]");
  if (v_cruise > v_max) throw std::invalid_argument("v_cruise must not exceed v_max");
}

bool interacts(const UavState& self, const UavState& other) {
  if (other.mode == FlightMode::Grounded || other.mode == FlightMode::Done) return false;
  if (self.mode == FlightMode::Highway && other.mode == FlightMode::Highway && !self.in_cylinder &&
      !other.in_cylinder && (self.airway != other.airway || self.travel != other.travel)) {
    return false;
  }
  return true;
}

Vec3 neighbor_repulsion(const UavState& self, const UavState& other, const ControlParams& cp) {
  const Vec3 off = self.position - other.position;
  const double d = off.norm();
  if (d >= cp.r_rep) return {};
  const double floor = 1e-6 * cp.r_rep;
  Vec3 dir;
  if (d > 0.0) {
    dir = off / d;
  } else {
    dir = Vec3{self.id < other.id ? -1.0 : 1.0, 0.0, 0.0};
  }
  // The outer shell reacts to the closest approach within the horizon, so a
  // crossing pair sorts itself out before it is close.
  const Vec3 dv = self.velocity - other.velocity;
  const double dv2 = dv.dot(dv);
  double ds = d;
  Vec3 sdir = dir;
  if (dv2 > 0.0 && d > 0.0) {
    const double tau = std::clamp(-off.dot(dv) / dv2, 0.0, cp.horizon);
    const Vec3 pred = off + dv * tau;
    const double dp = pred.norm();
    if (dp < d) {
      ds = dp;
      if (dp > floor) sdir = pred / dp;
    }
  }
  double scale = 1.0;
  if (self.priority < other.priority) scale = 1.0 / cp.beta;
  if (self.priority > other.priority) scale = cp.beta;
  Vec3 f = sdir * (cp.k_rep * (1.0 / std::max(ds, floor) - 1.0 / cp.r_rep) * scale);
  f += kUp.cross(f) * cp.swirl;
  // Priority-blind core on the actual distance.
  if (d < cp.r_core) f += dir * (cp.k_core * (1.0 / std::max(d, floor) - 1.0 / cp.r_core));
  return f;
}

Vec3 highway_command(const UavState& self, std::span<const UavState* const> neighbors, const ControlContext& ctx) {
  const ControlParams& cp = ctx.cp;
  const GlobalParams& gp = ctx.net.params();
  const AirwayGeometry g = ctx.net.travel_geometry(self.airway, self.travel);
  const FinishingLine& line = ctx.net.finishing_line(self.airway, self.travel);
  const auto& fr = g.frame();

  Vec3 v = toward(self.position, line.nearest_point(self.position), cp.k_att * cruise_of(self, cp));

  const auto l = fr.to_local(self.position);
  const double inner = 0.5 * gp.r_is;
  const double outer = inner + gp.r_aw;
  v += fr.lateral * (curb_push(l.lat - inner, cp) - curb_push(outer - l.lat, cp));
  v += fr.vertical * (curb_push(l.vert + 0.5 * gp.h_aw, cp) - curb_push(0.5 * gp.h_aw - l.vert, cp));

  for (const UavState* o : neighbors) {
    if (!interacts(self, *o)) continue;
    const Vec3 f = neighbor_repulsion(self, *o, cp);
    v += f;
    if (o->mode != FlightMode::Highway || o->airway != self.airway || o->travel != self.travel) continue;
    const Vec3 ahead = o->position - self.position;
    const double d = ahead.norm();
    if (d <= 0.0) continue;
    const double fwd = ahead.dot(fr.axis) / d;
    if (fwd <= 0.0) continue;
    // Slip past a UAV ahead: sideways toward the side already offset, else toward the
    // lane center, else toward the strip.
    const double off = -ahead.dot(fr.lateral);
    double side = 0.0;
    if (std::abs(off) > 1e-6 * gp.r_aw) {
      side = off > 0.0 ? 1.0 : -1.0;
    } else if (std::abs(gp.lane_offset() - l.lat) > 1e-6 * gp.r_aw) {
      side = gp.lane_offset() > l.lat ? 1.0 : -1.0;
    } else {
      side = -1.0;
    }
    v += fr.lateral * (side * f.norm() * fwd * cp.deflect);
  }
  return clamp_norm(v, cp.v_max);
}

Vec3 rotary_command(const UavState& self, std::span<const UavState* const> neighbors, const ControlContext& ctx) {
  const ControlParams& cp = ctx.cp;
  const GlobalParams& gp = ctx.net.params();
  const Node& hub = ctx.net.nodes()[self.node];
  // Everyone circulates at the common speed so the ring does not bunch up.
  const double cruise = cp.v_cruise;
  const Vec3 rel = (self.position - hub.spec.center).horizontal();
  const double rho = rel.norm();
  const Vec3 rhat = rho > 0.0 ? rel / rho : Vec3{1.0, 0.0, 0.0};

  Vec3 v;
  const ExitTarget ex = exit_target(self, ctx);
  const Window w = window_for(self, ex, ctx);
  const double s = progress(self, w, hub);
  const bool held = ex.airway == kNone && ctx.busy(self.destination);
  const bool leaving = !held && s >= -(w.half_arc + lead_angle(self, hub, gp)) && s <= w.half_arc;
  if (leaving) {
    v = toward(self.position, w.target, cruise);
  } else {
    const Vec3 tangent = hub.spec.rotary == RotaryDirection::Clockwise ? rhat.cross(kUp) : kUp.cross(rhat);
    v = tangent * cruise;
    const double lo = 0.5 * hub.ring_outer;
    const double hi = hub.ring_outer;
    double radial = 0.0;
    if (rho < lo) radial = cp.k_radial * (lo - rho);
    if (rho > hi) radial = cp.k_radial * (hi - rho);
    v += rhat * std::clamp(radial, -cruise, cruise);
    v += wall_push(self, hub, cp);
  }
  v.z += altitude_hold(self, hub.spec.center.z, cp);
  v += repulsion_sum(self, neighbors, cp);
  return clamp_norm(v, cp.v_max);
}

Vec3 connection_command(const UavState& self, std::span<const UavState* const> neighbors,
                        const ControlContext& ctx) {
  const ControlParams& cp = ctx.cp;
  const Node& conn = ctx.net.nodes()[self.node];
  const ExitTarget ex = exit_target(self, ctx);
  Vec3 v;
  if (ex.airway == kNone) {
    v = arrive(self.position, ex.landing_top, cruise_of(self, cp), brake_rate(cp), ctx.dt);
  } else {
    const FinishingLine& entry = ctx.net.entry_line(ex.airway, ex.travel);
    v = toward(self.position, (entry.a + entry.b) * 0.5, cruise_of(self, cp));
    if (self.prev_airway != kNone && self.prev_airway != ex.airway) {
      const AirwayGeometry in = ctx.net.arriving_at(self.prev_airway, self.node);
      const AirwayGeometry out = ctx.net.arriving_at(ex.airway, self.node);
      const Segment chord = connection_gates(conn.spec.center, conn.radius, in, out).first;
      const Vec3 along = (chord.end - chord.start).horizontal().normalized();
      Vec3 normal = kUp.cross(along);
      const FinishingLine& fin = ctx.net.finishing_line(self.prev_airway, arriving_travel(ctx.net, self.prev_airway, self.node));
      const Vec3 lane = (fin.a + fin.b) * 0.5;
      if ((lane - chord.start).dot(normal) < 0.0) normal = -normal;
      const double clearance = (self.position - chord.start).horizontal().dot(normal);
      v += normal * curb_push(clearance, cp);
    }
  }
  v += wall_push(self, conn, cp);
  v.z += altitude_hold(self, conn.spec.center.z, cp);
  v += repulsion_sum(self, neighbors, cp);
  return clamp_norm(v, cp.v_max);
}

Vec3 takeoff_command(const UavState& self, std::span<const UavState* const> neighbors, const ControlContext& ctx) {
  const ControlParams& cp = ctx.cp;
  const Vec3 top = takeoff_top(ctx.net, ctx.route);
  const double cruise = cruise_of(self, cp);
  // Stay well below anyone overhead: the previous departure, or traffic over the column top.
  double ceiling = top.z;
  for (const UavState* o : neighbors) {
    if (o->position.z > self.position.z && (o->position - self.position).horizontal().norm() < cp.r_rep) {
      ceiling = std::min(ceiling, o->position.z - 1.25 * cp.r_rep);
    }
  }
  Vec3 v = clamp_norm((top - self.position).horizontal() * cp.k_radial, cruise);
  ceiling = std::max(ceiling, takeoff_pad(ctx.net, ctx.route).z);
  // Overshooting the top: come back down. Below someone overhead: hover, never back off.
  v.z = arrive_1d(self.position.z, ceiling, cruise, brake_rate(cp), ctx.dt);
  if (ceiling < top.z) v.z = std::max(v.z, 0.0);
  v += column_curbs(self, ctx, ctx.route.nodes[0], ctx.route.nodes[1]);
  // Later departures below already keep their distance; don't let them lift us past the top.
  std::vector<const UavState*> others;
  for (const UavState* o : neighbors) {
    const bool follower = o->mode == FlightMode::TakeOff && o->origin == self.origin && o->position.z < self.position.z;
    if (!follower) others.push_back(o);
  }
  v += repulsion_sum(self, others, cp);
  v = clamp_norm(v, cp.v_max);
  return above_ground(self, v, takeoff_pad(ctx.net, ctx.route).z, ctx.dt);
}

Vec3 landing_command(const UavState& self, std::span<const UavState* const> neighbors, const ControlContext& ctx) {
  const ControlParams& cp = ctx.cp;
  const GlobalParams& gp = ctx.net.params();
  const Vec3 top = landing_top(ctx.net, ctx.route);
  const Vec3 pad = landing_pad(ctx.net, ctx.route);
  const double cruise = cruise_of(self, cp);
  const double dh = (top - self.position).horizontal().norm();
  const double dz = self.position.z - top.z;
  // One UAV at a time in the descent column: wait for anyone closer to it.
  bool wait = false;
  bool hold_off = false;
  const double self_gap = distance(self.position, top);
  for (const UavState* o : neighbors) {
    if (o->mode != FlightMode::Landing || o->destination != self.destination) continue;
    const double gap = distance(o->position, top);
    const bool ahead = o->position.z < top.z - eps_z(gp) || gap < self_gap || (gap == self_gap && o->id < self.id);
    if (!ahead) continue;
    wait = true;
    if (o->position.z > top.z - 2.0 * cp.r_rep) hold_off = true;
  }
  Vec3 v;
  if (wait && dz > -eps_z(gp)) {
    Vec3 goal = top;
    if (hold_off) {
      const Vec3 out = (self.position - top).horizontal();
      const double n = out.norm();
      const double hold = 1.25 * cp.r_rep;
      goal = top + (n > 0.0 ? out * (hold / n) : Vec3{hold, 0.0, 0.0});
      goal.z = top.z;
    }
    v = arrive(self.position, goal, cruise, brake_rate(cp), ctx.dt);
  } else if (dh > eps_h(gp) && dz > -eps_z(gp)) {
    v = arrive(self.position, top, cruise, brake_rate(cp), ctx.dt);
  } else {
    v = clamp_norm((pad - self.position).horizontal() * cp.k_radial, cruise);
    v.z = arrive_1d(self.position.z, pad.z, cruise, brake_rate(cp), ctx.dt);
    const auto& n = ctx.route.nodes;
    v += column_curbs(self, ctx, n[n.size() - 2], n.back());
  }
  v += repulsion_sum(self, neighbors, cp);
  v = clamp_norm(v, cp.v_max);
  return above_ground(self, v, pad.z, ctx.dt);
}

Vec3 command(const UavState& self, std::span<const UavState* const> neighbors, const ControlContext& ctx) {
  switch (self.mode) {
    case FlightMode::TakeOff: return takeoff_command(self, neighbors, ctx);
    case FlightMode::Highway: return highway_command(self, neighbors, ctx);
    case FlightMode::ConnectionTransit: return connection_command(self, neighbors, ctx);
    case FlightMode::RotaryIsland: return rotary_command(self, neighbors, ctx);
    case FlightMode::Landing: return landing_command(self, neighbors, ctx);
    case FlightMode::Grounded:
    case FlightMode::Done: return {};
  }
  return {};
}

ExitTarget exit_target(const UavState& self, const ControlContext& ctx) {
  const auto& nodes = ctx.route.nodes;
  if (self.cursor + 1 >= nodes.size()) throw NetworkError("route exhausted");
  const std::size_t here = nodes[self.cursor];
  const std::size_t next = nodes[self.cursor + 1];
  const auto aw = ctx.net.airway_between(here, next);
  if (!aw) throw NetworkError("route hop without airway");
  ExitTarget ex;
  if (self.cursor + 2 == nodes.size() && ctx.net.airways()[*aw].riser) {
    ex.landing_top = landing_top(ctx.net, ctx.route);
    return ex;
  }
  ex.airway = *aw;
  ex.travel = ctx.net.travel_from(*aw, here);
  return ex;
}

Vec3 takeoff_pad(const Network& net, const RoutePlan& route) {
  return column(net, route.nodes[0], route.nodes[1], true).base;
}

Vec3 takeoff_top(const Network& net, const RoutePlan& route) {
  return column(net, route.nodes[0], route.nodes[1], true).top;
}

Vec3 landing_top(const Network& net, const RoutePlan& route) {
  const auto& n = route.nodes;
  return column(net, n[n.size() - 2], n.back(), false).base;
}

Vec3 landing_pad(const Network& net, const RoutePlan& route) {
  const auto& n = route.nodes;
  return column(net, n[n.size() - 2], n.back(), false).top;
}

void launch(UavState& self, const Network& net, const RoutePlan& route) {
  self.position = takeoff_pad(net, route);
  self.velocity = {};
  self.mode = FlightMode::TakeOff;
  self.cursor = 1;
  self.origin = route.nodes.front();
  self.destination = route.nodes.back();
  self.airway = self.node = self.prev_airway = kNone;
}

std::optional<Transition> mode_transition(UavState& self, const ControlContext& ctx) {
  const Network& net = ctx.net;
  const GlobalParams& gp = net.params();
  const ControlParams& cp = ctx.cp;
  const auto& route = ctx.route.nodes;
  const FlightMode before = self.mode;
  const double slow = cp.a_max * ctx.dt * (1.0 + 1e-9);
  const double trigger = cruise_of(self, cp) * ctx.dt * cp.trigger_steps;
  auto done = [&](std::string detail) -> std::optional<Transition> {
    if (self.mode == before) return std::nullopt;
    return Transition{before, self.mode, std::move(detail)};
  };

  if (self.fault) return std::nullopt;
  try {
    switch (self.mode) {
      case FlightMode::Grounded:
      case FlightMode::Done:
        return std::nullopt;

      case FlightMode::TakeOff: {
        const auto first = net.airway_between(route[0], route[1]);
        if (!net.airways()[*first].riser) {
          enter_highway(self, ExitTarget{*first, net.travel_from(*first, route[0]), {}});
          self.cursor = 1;
          return done("airway " + std::to_string(net.airways()[*first].spec.id));
        }
        const Vec3 top = takeoff_top(net, ctx.route);
        if (std::abs(self.position.z - top.z) <= eps_z(gp) && self.velocity.norm() <= slow) {
          enter_intersection(self, route[1], kNone, net);
          return done("node " + std::to_string(net.nodes()[route[1]].spec.id));
        }
        return std::nullopt;
      }

      case FlightMode::Highway: {
        const FinishingLine& line = net.finishing_line(self.airway, self.travel);
        const double t = net.travel_geometry(self.airway, self.travel).frame().to_local(self.position).t;
        if (line.t - t >= trigger) return std::nullopt;
        const std::size_t dest = route[self.cursor];
        if (!net.nodes()[dest].is_intersection()) {
          const std::string label = "airway " + std::to_string(net.airways()[self.airway].spec.id) +
                                    " to airport " + std::to_string(net.nodes()[dest].spec.id);
          self.mode = FlightMode::Landing;
          self.airway = kNone;
          return done(label);
        }
        const std::size_t from = self.airway;
        const std::string label = "airway " + std::to_string(net.airways()[from].spec.id) + " to node " +
                                  std::to_string(net.nodes()[dest].spec.id);
        enter_intersection(self, dest, from, net);
        if (self.mode == FlightMode::ConnectionTransit && exit_target(self, ctx).airway == kNone) {
          self.mode = FlightMode::Landing;
        }
        return done(label);
      }

      case FlightMode::ConnectionTransit: {
        const ExitTarget ex = exit_target(self, ctx);
        if (ex.airway == kNone) {
          self.mode = FlightMode::Landing;
          return done("landing");
        }
        const FinishingLine& entry = net.entry_line(ex.airway, ex.travel);
        const double along = net.travel_geometry(ex.airway, ex.travel).frame().to_local(self.position).t;
        if (along < entry.t - trigger) return std::nullopt;
        enter_highway(self, ex);
        return done("airway " + std::to_string(net.airways()[ex.airway].spec.id));
      }

      case FlightMode::RotaryIsland: {
        const ExitTarget ex = exit_target(self, ctx);
        const Window w = window_for(self, ex, ctx);
        const double s = progress(self, w, net.nodes()[self.node]);
        if (ex.airway == kNone) {
          // Another lap while someone is still in the descent column.
          if (std::abs(s) > w.half_arc || ctx.busy(self.destination)) return std::nullopt;
          self.mode = FlightMode::Landing;
          return done("landing");
        }
        const auto l = net.travel_geometry(ex.airway, ex.travel).frame().to_local(self.position);
        const std::string label = "airway " + std::to_string(net.airways()[ex.airway].spec.id);
        // Past the wall (or the shared entry line of an overlapping neighbour) inside the
        // carriageway: already out of the hub.
        const ExitGate& gate = net.exit_gate(self.node, ex.airway);
        if (l.t >= gate.leave_t && std::abs(l.lat - gp.lane_offset()) <= 0.5 * gp.r_aw) {
          enter_highway(self, ex);
          return done(label);
        }
        if (std::abs(s) > w.half_arc) return std::nullopt;
        const double speed = self.velocity.horizontal().norm();
        if (l.t <= 0.0 || speed <= 0.0) return std::nullopt;
        if (angle_between(self.velocity.horizontal(), w.direction) > cp.gate_heading_tol) return std::nullopt;
        if (std::abs(l.lat - gp.lane_offset()) > cp.gate_lat_tol) return std::nullopt;
        enter_highway(self, ex);
        return done(label);
      }

      case FlightMode::Landing: {
        const Vec3 pad = landing_pad(net, ctx.route);
        if (distance(self.position, pad) <= eps_z(gp) && self.velocity.norm() <= slow) {
          self.mode = FlightMode::Done;
          self.cursor = route.size() - 1;
          self.velocity = {};
          return done("airport " + std::to_string(net.nodes()[route.back()].spec.id));
        }
        return std::nullopt;
      }
    }
  } catch (const NetworkError& e) {
    self.fault = true;
    return Transition{before, self.mode, std::string("fault: ") + e.what()};
  }
  return std::nullopt;
}

}  // namespace skyhw
