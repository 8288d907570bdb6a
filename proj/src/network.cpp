#include "skyhw/network.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace skyhw {

namespace {

constexpr double kAutoMargin = 1.10;
constexpr double kLineInset = 0.05;
constexpr double kGateMargin = 2.0 * std::numbers::pi / 180.0;

std::size_t slot(std::size_t airway, Travel travel) { return 2 * airway + (travel == Travel::Forward ? 0 : 1); }

double wrap_angle(double a) {
  while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
  while (a < -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

bool is_level(const AirwayGeometry& g) { return std::abs(g.direction().z) <= 1e-9; }

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

// Longitudinal distance from an intersection center at which the whole
// carriageway cross-section is inside the cylinder.
double mouth_distance(const Node& n, const GlobalParams& gp) {
  if (!n.is_intersection()) return 0.0;
  const double w = gp.half_width();
  return n.radius > w ? std::sqrt(n.radius * n.radius - w * w) : 0.0;
}

FinishingLine make_line(const AirwayGeometry& g, std::size_t airway, Travel travel, double t) {
  const GlobalParams& gp = g.params();
  FinishingLine line;
  line.airway = airway;
  line.travel = travel;
  line.t = t;
  line.direction = g.direction();
  const double inset = kLineInset * gp.r_aw;
  line.a = g.frame().to_world(t, 0.5 * gp.r_is + inset, 0.0);
  line.b = g.frame().to_world(t, 0.5 * gp.r_is + gp.r_aw - inset, 0.0);
  return line;
}

}  // namespace

std::string to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Termination: return "termination";
    case NodeKind::Connection: return "connection";
    case NodeKind::Hub: return "hub";
  }
  return "?";
}

std::string to_string(RotaryDirection d) { return d == RotaryDirection::Clockwise ? "cw" : "ccw"; }

Vec3 FinishingLine::nearest_point(const Vec3& p) const {
  const Vec3 d = b - a;
  const double len2 = d.norm2();
  const double s = len2 > 0.0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
  return a + d * s;
}

bool ExitGate::covers(double angle) const { return std::abs(wrap_angle(angle - center_angle)) <= half_arc; }

bool ValidationReport::all_pass() const {
  return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.pass; });
}

std::vector<const ValidationRecord*> ValidationReport::failures() const {
  std::vector<const ValidationRecord*> out;
  for (const auto& r : records) {
    if (!r.pass) out.push_back(&r);
  }
  return out;
}

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  os << std::left << std::setw(28) << "check" << std::setw(6) << "ok" << std::setw(16) << "value" << std::setw(16)
     << "threshold" << "note\n";
  for (const auto& r : records) {
    os << std::left << std::setw(28) << r.id << std::setw(6) << (r.pass ? "PASS" : "FAIL") << std::setw(16)
       << fmt(r.value) << std::setw(16) << fmt(r.threshold) << r.note << '\n';
  }
  os << (all_pass() ? "all checks passed" : "validation FAILED") << " (" << records.size() << " checks, "
     << failures().size() << " failed)\n";
  return os.str();
}

std::string ValidationReport::to_json() const {
  nlohmann::json j;
  j["pass"] = all_pass();
  auto& arr = j["checks"] = nlohmann::json::array();
  for (const auto& r : records) {
    arr.push_back({{"id", r.id},
                   {"inputs", r.inputs},
                   {"threshold", r.threshold},
                   {"value", r.value},
                   {"pass", r.pass},
                   {"note", r.note}});
  }
  return j.dump(2);
}

std::size_t Network::node_index(int id) const {
  auto it = node_ids_.find(id);
  if (it == node_ids_.end()) throw NetworkError("unknown node id " + std::to_string(id));
  return it->second;
}

std::size_t Network::airway_index(int id) const {
  auto it = airway_ids_.find(id);
  if (it == airway_ids_.end()) throw NetworkError("unknown airway id " + std::to_string(id));
  return it->second;
}

std::optional<std::size_t> Network::airway_between(std::size_t a, std::size_t b) const {
  for (const auto& [nb, aw] : adjacency_[a]) {
    if (nb == b) return aw;
  }
  return std::nullopt;
}

AirwayGeometry Network::travel_geometry(std::size_t airway, Travel travel) const {
  const auto& g = airways_[airway].geometry;
  return travel == Travel::Forward ? g : g.reversed();
}

Travel Network::travel_from(std::size_t airway, std::size_t from_node) const {
  const auto& a = airways_[airway];
  if (a.from == from_node) return Travel::Forward;
  if (a.to == from_node) return Travel::Backward;
  throw NetworkError("airway " + std::to_string(a.spec.id) + " does not touch node " +
                     std::to_string(nodes_[from_node].spec.id));
}

std::size_t Network::destination(std::size_t airway, Travel travel) const {
  return travel == Travel::Forward ? airways_[airway].to : airways_[airway].from;
}

std::size_t Network::origin(std::size_t airway, Travel travel) const {
  return travel == Travel::Forward ? airways_[airway].from : airways_[airway].to;
}

AirwayGeometry Network::arriving_at(std::size_t airway, std::size_t node) const {
  const auto& a = airways_[airway];
  if (a.to == node) return a.geometry;
  if (a.from == node) return a.geometry.reversed();
  throw NetworkError("airway does not touch node");
}

const FinishingLine& Network::finishing_line(std::size_t airway, Travel travel) const {
  return finish_.at(slot(airway, travel));
}

const FinishingLine& Network::entry_line(std::size_t airway, Travel travel) const {
  return entry_.at(slot(airway, travel));
}

const ExitGate& Network::exit_gate(std::size_t hub, std::size_t airway) const {
  auto it = gates_.find({hub, airway});
  if (it == gates_.end()) throw NetworkError("no exit gate for that hub/airway pair");
  return it->second;
}

double Network::distance_outside(const Vec3& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& n : nodes_) {
    if (!n.is_intersection()) continue;
    best = std::min(best, n.cylinder.distance_to(p));
    if (best == 0.0) return 0.0;
  }
  for (const auto& a : airways_) {
    best = std::min(best, a.geometry.box().distance_to(p));
    if (best == 0.0) return 0.0;
  }
  return best;
}

std::optional<std::size_t> Network::intersection_containing(const Vec3& p) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].is_intersection() && nodes_[i].cylinder.contains(p)) return i;
  }
  return std::nullopt;
}

Network build_network(const NetworkConfig& config) {
  Network net;
  try {
    config.params.validate();
  } catch (const GeometryError& e) {
    throw NetworkError(e.what());
  }
  net.params_ = config.params;
  net.min_pair_angle_ = config.min_pair_angle;
  const GlobalParams& gp = net.params_;

  for (const auto& spec : config.nodes) {
    if (!spec.center.finite()) throw NetworkError("node " + std::to_string(spec.id) + " has non-finite position");
    if (spec.radius && !(*spec.radius > 0.0)) {
      throw NetworkError("node " + std::to_string(spec.id) + " radius must be > 0");
    }
    if (!net.node_ids_.emplace(spec.id, net.nodes_.size()).second) {
      throw NetworkError("duplicate node id " + std::to_string(spec.id));
    }
    Node n;
    n.spec = spec;
    net.nodes_.push_back(std::move(n));
  }
  net.adjacency_.resize(net.nodes_.size());

  for (const auto& spec : config.airways) {
    const std::string name = "airway " + std::to_string(spec.id);
    auto from = net.node_ids_.find(spec.from);
    auto to = net.node_ids_.find(spec.to);
    if (from == net.node_ids_.end() || to == net.node_ids_.end()) {
      throw NetworkError(name + " references unknown node " +
                         std::to_string(from == net.node_ids_.end() ? spec.from : spec.to));
    }
    if (from->second == to->second) throw NetworkError(name + " connects a node to itself");
    if (net.airway_between(from->second, to->second)) {
      throw NetworkError(name + " duplicates an existing airway between nodes " + std::to_string(spec.from) +
                         " and " + std::to_string(spec.to));
    }
    const Segment seg{net.nodes_[from->second].spec.center, net.nodes_[to->second].spec.center};
    if (!(seg.length() > 0.0)) throw NetworkError(name + " has zero length");
    if (!net.airway_ids_.emplace(spec.id, net.airways_.size()).second) {
      throw NetworkError("duplicate airway id " + std::to_string(spec.id));
    }
    const bool touches_airport = net.nodes_[from->second].spec.kind == NodeKind::Termination ||
                                 net.nodes_[to->second].spec.kind == NodeKind::Termination;
    const Vec3 d = seg.end - seg.start;
    const bool vertical = d.horizontal().norm() <= 1e-9 * seg.length();
    net.airways_.push_back(Airway{spec, from->second, to->second, touches_airport && vertical, AirwayGeometry(seg, gp)});
    const std::size_t idx = net.airways_.size() - 1;
    net.adjacency_[from->second].emplace_back(to->second, idx);
    net.adjacency_[to->second].emplace_back(from->second, idx);
    for (std::size_t end : {from->second, to->second}) {
      auto& list = net.airways_[idx].riser ? net.nodes_[end].risers : net.nodes_[end].level_airways;
      list.push_back(idx);
    }
  }

  for (std::size_t i = 0; i < net.nodes_.size(); ++i) {
    Node& n = net.nodes_[i];
    if (n.spec.radius) {
      n.radius = *n.spec.radius;
    } else if (!n.is_intersection()) {
      n.auto_radius = true;
      n.radius = gp.half_width();
    } else {
      n.auto_radius = true;
      double r = std::max(gp.r_t, gp.half_width() * (1.0 + 1e-9));
      if (n.level_airways.size() >= 2) {
        std::vector<AirwayGeometry> arriving;
        for (std::size_t a : n.level_airways) arriving.push_back(net.arriving_at(a, i));
        try {
          r = solve_min_intersection_radius(arriving, gp, 1e-9 * std::max(1.0, prop2_threshold(gp)),
                                            Prop3Options{0.0});
        } catch (const GeometryError&) {
          // Left at the fallback; validation reports the underlying problem.
        }
      }
      n.radius = r * kAutoMargin;
    }
    n.cylinder.center = n.spec.center;
    n.cylinder.radius = n.radius;
    n.cylinder.height = gp.h_aw;
    n.cylinder.kind = n.spec.kind == NodeKind::Connection ? IntersectionKind::Connection : IntersectionKind::Hub;
    for (std::size_t a : n.level_airways) n.cylinder.airway_ids.push_back(net.airways_[a].spec.id);
  }

  for (std::size_t i = 0; i < net.nodes_.size(); ++i) {
    Node& n = net.nodes_[i];
    n.ring_outer = n.radius - 0.5 * gp.r_aw;
    for (std::size_t j = 0; j < net.nodes_.size(); ++j) {
      const Node& o = net.nodes_[j];
      if (j == i || !o.is_intersection() || std::abs(o.spec.center.z - n.spec.center.z) >= gp.h_aw) continue;
      const double d = (o.spec.center - n.spec.center).horizontal().norm();
      if (d < n.radius + o.radius) n.ring_outer = std::min(n.ring_outer, 0.5 * d - gp.r_a);
    }
    n.ring_outer = std::max(n.ring_outer, gp.r_t);
  }

  net.finish_.resize(2 * net.airways_.size());
  net.entry_.resize(2 * net.airways_.size());
  for (std::size_t a = 0; a < net.airways_.size(); ++a) {
    for (Travel tr : {Travel::Forward, Travel::Backward}) {
      const AirwayGeometry g = net.travel_geometry(a, tr);
      const Node& dest = net.nodes_[net.destination(a, tr)];
      const Node& orig = net.nodes_[net.origin(a, tr)];
      const bool riser = net.airways_[a].riser;
      const double d_end = riser ? 0.0 : mouth_distance(dest, gp);
      const double d_start = riser ? 0.0 : mouth_distance(orig, gp);
      double t_end = std::max(0.0, g.length() - d_end);
      double t_start = std::min(g.length(), d_start);
      if (t_start > t_end) {
        // Both end cylinders overlap along this airway: no free highway stretch.
        t_start = t_end = 0.5 * (t_start + t_end);
      }
      net.finish_[slot(a, tr)] = make_line(g, a, tr, t_end);
      net.entry_[slot(a, tr)] = make_line(g, a, tr, t_start);
    }
  }

  for (std::size_t h = 0; h < net.nodes_.size(); ++h) {
    const Node& n = net.nodes_[h];
    if (n.spec.kind != NodeKind::Hub) continue;
    const double c = gp.lane_offset();
    if (!(n.radius > c)) continue;
    for (std::size_t a : n.level_airways) {
      ExitGate gate;
      gate.hub = h;
      gate.airway = a;
      gate.travel = net.travel_from(a, h);
      const AirwayGeometry g = net.travel_geometry(a, gate.travel);
      gate.direction = g.direction();
      const Vec3 right = right_of(gate.direction);
      const double along = std::sqrt(n.radius * n.radius - c * c);
      gate.point = n.spec.center + gate.direction * along + right * c;
      const double beyond = std::min(along + gp.r_aw, 0.9 * g.length());
      gate.lane_target = n.spec.center + gate.direction * beyond + right * c;
      const Vec3 rel = gate.point - n.spec.center;
      gate.center_angle = std::atan2(rel.y, rel.x);
      gate.half_arc = std::asin(std::min(1.0, 0.5 * gp.r_aw / n.radius)) + kGateMargin;
      const double entry_t = net.entry_[slot(a, gate.travel)].t;
      gate.leave_t = entry_t < mouth_distance(n, gp) - 1e-9 * g.length() ? entry_t : along;
      net.gates_.emplace(std::make_pair(h, a), gate);
    }
  }
  return net;
}

ValidationReport validate_network(const Network& net) {
  ValidationReport rep;
  const GlobalParams& gp = net.params();
  const auto& nodes = net.nodes();
  const auto& airways = net.airways();
  auto node_name = [&](std::size_t i) { return std::to_string(nodes[i].spec.id); };
  auto airway_name = [&](std::size_t i) { return std::to_string(airways[i].spec.id); };

  {
    const CheckResult r = check_prop1(gp);
    rep.records.push_back({"prop1", "r_is=" + fmt(gp.r_is) + " r_a=" + fmt(gp.r_a), r.threshold, r.value, r.pass,
                           r.note});
  }

  // Structure: degree per kind, level airways at one altitude, risers vertical.
  std::optional<double> altitude;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    const std::size_t level = n.level_airways.size();
    const std::size_t total = level + n.risers.size();
    ValidationRecord rec{"structure:node:" + node_name(i), "kind=" + to_string(n.spec.kind), 0.0,
                         static_cast<double>(level), true, ""};
    switch (n.spec.kind) {
      case NodeKind::Termination:
        rec.threshold = 1;
        rec.value = static_cast<double>(total);
        rec.pass = total >= 1;
        if (!rec.pass) rec.note = "termination node without airway";
        break;
      case NodeKind::Connection:
        rec.threshold = 2;
        rec.pass = level == 2;
        if (!rec.pass) rec.note = "connection must join exactly 2 airways";
        break;
      case NodeKind::Hub:
        rec.threshold = 3;
        rec.pass = level >= 3;
        if (!rec.pass) rec.note = "hub must join at least 3 airways";
        break;
    }
    if (n.is_intersection()) {
      if (!altitude) altitude = n.spec.center.z;
      if (std::abs(n.spec.center.z - *altitude) > 1e-9 * std::max(1.0, std::abs(*altitude))) {
        rec.pass = false;
        rec.note += rec.note.empty() ? "" : "; ";
        rec.note += "intersection not at network altitude";
      }
    }
    rep.records.push_back(rec);
  }
  for (std::size_t a = 0; a < airways.size(); ++a) {
    const Airway& aw = airways[a];
    const bool level = is_level(aw.geometry);
    ValidationRecord rec{"structure:airway:" + airway_name(a),
                         "from=" + node_name(aw.from) + " to=" + node_name(aw.to), 0.0, aw.geometry.length(),
                         aw.riser || level, ""};
    if (!rec.pass) rec.note = "airway neither level nor an airport riser";
    rep.records.push_back(rec);
  }

  // Prop 2 across airway pairs that share no node.
  for (std::size_t i = 0; i < airways.size(); ++i) {
    for (std::size_t j = i + 1; j < airways.size(); ++j) {
      const auto& a = airways[i];
      const auto& b = airways[j];
      if (a.from == b.from || a.from == b.to || a.to == b.from || a.to == b.to) continue;
      const CheckResult r = check_prop2(a.geometry, b.geometry);
      rep.records.push_back({"prop2:" + airway_name(i) + ":" + airway_name(j),
                             "centerline distance vs r_a + cross-section diagonal", r.threshold, r.value, r.pass,
                             r.note});
    }
  }

  const Prop3Options opts{net.min_pair_angle()};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (!n.is_intersection()) continue;
    std::vector<AirwayGeometry> arriving;
    for (std::size_t a : n.level_airways) arriving.push_back(net.arriving_at(a, i));
    ValidationRecord rec{"prop3:" + node_name(i), std::string("radius=") + fmt(n.radius) + (n.auto_radius ? " (auto)" : ""),
                         0.0, n.radius, false, ""};
    try {
      const Prop3Result r = check_prop3(n.cylinder, arriving, opts);
      rec.threshold = r.required_radius;
      rec.pass = r.pass;
      rec.note = r.failure;
    } catch (const GeometryError& e) {
      rec.note = e.what();
    }
    rep.records.push_back(rec);

    if (n.spec.kind == NodeKind::Connection && arriving.size() == 2) {
      ValidationRecord p4{"prop4:" + node_name(i), "", 0.0, gp.r_is, false, ""};
      try {
        const Prop4Result r = check_prop4(n.cylinder, arriving[0], arriving[1]);
        p4.inputs = "angle=" + fmt(r.angle);
        p4.threshold = r.required_strip;
        p4.pass = r.pass;
        p4.note = r.failure;
      } catch (const GeometryError& e) {
        p4.note = e.what();
      }
      rep.records.push_back(p4);
    }
  }
  return rep;
}

RouteCheck validate_route(const Network& net, const Route& route) {
  if (route.nodes.size() < 2) return {false, "route needs at least two nodes"};
  std::vector<std::size_t> idx;
  for (int id : route.nodes) {
    try {
      idx.push_back(net.node_index(id));
    } catch (const NetworkError&) {
      return {false, "unknown node " + std::to_string(id)};
    }
  }
  if (net.nodes()[idx.front()].spec.kind != NodeKind::Termination ||
      net.nodes()[idx.back()].spec.kind != NodeKind::Termination) {
    return {false, "route must start and end at termination nodes"};
  }
  for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
    if (!net.airway_between(idx[k], idx[k + 1])) {
      return {false, "no airway between " + std::to_string(route.nodes[k]) + " and " +
                         std::to_string(route.nodes[k + 1])};
    }
  }
  for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
    if (!net.nodes()[idx[k]].is_intersection()) {
      return {false, "termination node " + std::to_string(route.nodes[k]) + " inside route"};
    }
  }
  return {true, ""};
}

const FinishingLine& finishing_line(const Network& net, int airway_id, Travel travel, Side carriageway) {
  const Side expected = travel == Travel::Forward ? Side::Right : Side::Left;
  if (carriageway != expected) {
    throw NetworkError("carriageway does not carry traffic in that direction");
  }
  return net.finishing_line(net.airway_index(airway_id), travel);
}

ExitGate exit_gate(const Network& net, int hub_id, int next_airway_id) {
  return net.exit_gate(net.node_index(hub_id), net.airway_index(next_airway_id));
}

}  // namespace skyhw
