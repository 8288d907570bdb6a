#pragma once

// Per-UAV velocity command laws (highway, rotary island, connection transit,
// takeoff, landing) and the flight-mode state machine.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skyhw/network.hpp"

namespace skyhw {

enum class FlightMode { Grounded, TakeOff, Highway, ConnectionTransit, RotaryIsland, Landing, Done };

std::string to_string(FlightMode m);
std::optional<FlightMode> parse_flight_mode(const std::string& s);

inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Any field left at 0 is derived from the network parameters by resolve().
struct ControlParams {
  double v_cruise = 0.0;
  double v_max = 0.0;
  double a_max = 0.0;
  double k_att = 1.0;     // attraction speed as a multiple of cruise speed
  double k_rep = 0.0;     // default 4 * v_cruise * r_a: repulsion at r_a equals 2 * v_cruise
  double r_rep = 0.0;     // default 2 * r_a; also the sensing radius
  double k_core = 0.0;    // priority-blind inner repulsion; default reaches v_max at r_a
  double r_core = 0.0;    // default 1.5 * r_a
  double swirl = 0.0;     // share of the outer repulsion turned to the right, breaks standoffs
  double horizon = 0.0;   // s, look-ahead of the outer repulsion; default r_rep / (2 v_cruise)
  double k_curb = 0.0;    // default 3 * v_cruise
  double d_curb = 0.0;    // default r_a
  double k_radial = 1.0;  // 1/s, ring keep-in and altitude hold
  double beta = 0.25;
  double deflect = 1.0;   // sideways share of repulsion from a UAV ahead
  double gate_heading_tol = 15.0 * std::numbers::pi / 180.0;
  double gate_lat_tol = 0.0;  // default r_aw / 4
  double trigger_steps = 5.0;

  ControlParams resolve(const GlobalParams& gp) const;
  // Throws std::invalid_argument on non-positive gains or r_rep <= r_a. Expects a resolved object.
  void validate(const GlobalParams& gp) const;
};

struct UavState {
  int id = 0;
  int priority = 0;
  double cruise_speed = 0.0;
  Vec3 position;
  Vec3 velocity;
  FlightMode mode = FlightMode::Grounded;
  std::size_t cursor = 0;         // index in the route of the next (or current) node
  std::size_t airway = kNone;     // Highway: current airway
  Travel travel = Travel::Forward;
  std::size_t node = kNone;       // intersection being crossed
  std::size_t prev_airway = kNone;
  std::size_t origin = kNone;       // first route node, set at launch
  std::size_t destination = kNone;  // final route node, set at launch
  bool in_cylinder = false;       // snapshot flag, filled by the engine
  bool fault = false;
};

// Route as node indices into the network.
struct RoutePlan {
  std::vector<std::size_t> nodes;
};

// Where a UAV leaves its current intersection.
struct ExitTarget {
  std::size_t airway = kNone;  // kNone: the route ends here and the UAV lands
  Travel travel = Travel::Forward;
  Vec3 landing_top;            // valid when airway == kNone
};

struct ControlContext {
  const Network& net;
  const RoutePlan& route;
  const ControlParams& cp;
  double dt;
  // Per node: an airport whose descent column is in use. Empty means all free.
  std::span<const char> column_busy = {};

  bool busy(std::size_t node) const { return node < column_busy.size() && column_busy[node]; }
};

// Repulsion on `self` from `other`, including the priority scaling. Zero beyond r_rep.
Vec3 neighbor_repulsion(const UavState& self, const UavState& other, const ControlParams& cp);

// Whether `other` is taken into account by `self` (cross-carriageway pairs on
// plain highway are separated by geometry and ignored).
bool interacts(const UavState& self, const UavState& other);

Vec3 highway_command(const UavState& self, std::span<const UavState* const> neighbors, const ControlContext& ctx);
Vec3 rotary_command(const UavState& self, std::span<const UavState* const> neighbors, const ControlContext& ctx);
Vec3 connection_command(const UavState& self, std::span<const UavState* const> neighbors, const ControlContext& ctx);
Vec3 takeoff_command(const UavState& self, std::span<const UavState* const> neighbors, const ControlContext& ctx);
Vec3 landing_command(const UavState& self, std::span<const UavState* const> neighbors, const ControlContext& ctx);

// Dispatches on mode; Grounded and Done get zero.
Vec3 command(const UavState& self, std::span<const UavState* const> neighbors, const ControlContext& ctx);

ExitTarget exit_target(const UavState& self, const ControlContext& ctx);

// Departure pad and the top of the climb column for a route.
Vec3 takeoff_pad(const Network& net, const RoutePlan& route);
Vec3 takeoff_top(const Network& net, const RoutePlan& route);
// Top of the descent column and the landing pad.
Vec3 landing_top(const Network& net, const RoutePlan& route);
Vec3 landing_pad(const Network& net, const RoutePlan& route);

struct Transition {
  FlightMode from;
  FlightMode to;
  std::string detail;
};

// Applies at most one mode change after integration. Returns it if one happened.
std::optional<Transition> mode_transition(UavState& self, const ControlContext& ctx);

// Puts a spawned UAV at its pad in TakeOff.
void launch(UavState& self, const Network& net, const RoutePlan& route);

}  // namespace skyhw
