#pragma once

// The sky highway graph: nodes (airports, connections, hubs) joined by
// airways, instantiated as corridor geometry and checked against the
// separation conditions.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "skyhw/geometry.hpp"

namespace skyhw {

class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind { Termination, Connection, Hub };
enum class RotaryDirection { Clockwise, Anticlockwise };
// Direction of travel along an airway relative to its from -> to orientation.
enum class Travel { Forward, Backward };

std::string to_string(NodeKind k);
std::string to_string(RotaryDirection d);

struct NodeSpec {
  int id = 0;
  NodeKind kind = NodeKind::Hub;
  Vec3 center;
  std::optional<double> radius;  // nullopt = solve automatically
  RotaryDirection rotary = RotaryDirection::Clockwise;
};

struct AirwaySpec {
  int id = 0;
  int from = 0;
  int to = 0;
};

struct NetworkConfig {
  GlobalParams params;
  double min_pair_angle = 20.0 * std::numbers::pi / 180.0;
  std::vector<NodeSpec> nodes;
  std::vector<AirwaySpec> airways;
};

struct Node {
  NodeSpec spec;
  double radius = 0.0;
  bool auto_radius = false;
  std::vector<std::size_t> level_airways;  // indices into Network::airways()
  std::vector<std::size_t> risers;
  IntersectionGeometry cylinder;
  // Outer edge of the circulation band of a hub; pulled in when the cylinder
  // overlaps a neighbouring intersection.
  double ring_outer = 0.0;

  bool is_intersection() const { return spec.kind != NodeKind::Termination; }
};

struct Airway {
  AirwaySpec spec;
  std::size_t from = 0;  // node index
  std::size_t to = 0;
  bool riser = false;
  AirwayGeometry geometry;
};

// Lateral segment across the end of a carriageway, at mid-height. Traffic in
// highway mode is attracted to it.
struct FinishingLine {
  std::size_t airway = 0;
  Travel travel = Travel::Forward;
  Vec3 a;  // strip-side end, inset slightly from the curb
  Vec3 b;  // outer-curb end
  double t = 0.0;  // longitudinal position in the travel frame
  Vec3 direction;  // travel direction

  Vec3 nearest_point(const Vec3& p) const;
};

// Angular sector of a hub's wall through which a UAV may leave into a carriageway.
struct ExitGate {
  std::size_t hub = 0;
  std::size_t airway = 0;
  Travel travel = Travel::Forward;
  Vec3 point;          // lane center on the cylinder wall
  Vec3 lane_target;    // lane center one carriageway width beyond the wall
  Vec3 direction;      // outgoing travel direction
  double center_angle = 0.0;
  double half_arc = 0.0;
  double leave_t = 0.0;  // travel-frame position past which a UAV has left the hub

  bool covers(double angle) const;
};

struct ValidationRecord {
  std::string id;
  std::string inputs;
  double threshold = 0.0;
  double value = 0.0;
  bool pass = false;
  std::string note;
};

struct ValidationReport {
  std::vector<ValidationRecord> records;

  bool all_pass() const;
  std::vector<const ValidationRecord*> failures() const;
  std::string to_text() const;
  std::string to_json() const;
};

struct Route {
  int uav = 0;
  std::vector<int> nodes;
};

struct RouteCheck {
  bool pass = false;
  std::string reason;
};

class Network {
 public:
  const GlobalParams& params() const { return params_; }
  double min_pair_angle() const { return min_pair_angle_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Airway>& airways() const { return airways_; }

  std::size_t node_index(int id) const;
  std::size_t airway_index(int id) const;
  const Node& node_by_id(int id) const { return nodes_[node_index(id)]; }
  // Airway joining two nodes (either orientation).
  std::optional<std::size_t> airway_between(std::size_t a, std::size_t b) const;
  // (neighbor node index, airway index) pairs, in airway-index order.
  const std::vector<std::pair<std::size_t, std::size_t>>& adjacency(std::size_t node) const {
    return adjacency_[node];
  }

  // Corridor as seen by traffic on it: origin at the departure node, lateral axis on its right.
  AirwayGeometry travel_geometry(std::size_t airway, Travel travel) const;
  Travel travel_from(std::size_t airway, std::size_t from_node) const;
  std::size_t destination(std::size_t airway, Travel travel) const;
  std::size_t origin(std::size_t airway, Travel travel) const;
  // Airway geometry oriented to end at `node`.
  AirwayGeometry arriving_at(std::size_t airway, std::size_t node) const;

  const FinishingLine& finishing_line(std::size_t airway, Travel travel) const;
  // Mirror of the finishing line at the departure end (lane mouth at the origin intersection).
  const FinishingLine& entry_line(std::size_t airway, Travel travel) const;
  const ExitGate& exit_gate(std::size_t hub, std::size_t airway) const;

  // Distance from p to the union of all airway cuboids and intersection cylinders.
  double distance_outside(const Vec3& p) const;
  // Index of an intersection whose cylinder contains p, if any (lowest index wins).
  std::optional<std::size_t> intersection_containing(const Vec3& p) const;

 private:
  friend Network build_network(const NetworkConfig& config);

  GlobalParams params_;
  double min_pair_angle_ = 0.0;
  std::vector<Node> nodes_;
  std::vector<Airway> airways_;
  std::map<int, std::size_t> node_ids_;
  std::map<int, std::size_t> airway_ids_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency_;
  std::vector<FinishingLine> finish_;  // [2*airway + travel]
  std::vector<FinishingLine> entry_;
  std::map<std::pair<std::size_t, std::size_t>, ExitGate> gates_;
};

// Instantiates geometry, solves "auto" radii (minimum radius + 10%) and
// precomputes finishing lines and exit gates. Structural errors throw
// NetworkError; separation problems are left to validate_network.
Network build_network(const NetworkConfig& config);

ValidationReport validate_network(const Network& net);

RouteCheck validate_route(const Network& net, const Route& route);

// Finishing line lookup with an explicit carriageway: throws NetworkError when
// the carriageway is not the one used by `travel` (right-hand traffic).
const FinishingLine& finishing_line(const Network& net, int airway_id, Travel travel, Side carriageway);

ExitGate exit_gate(const Network& net, int hub_id, int next_airway_id);

}  // namespace skyhw
