#pragma once

// A runnable bundle: network, fleet, routes and simulation settings.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skyhw/control.hpp"
#include "skyhw/network.hpp"

namespace skyhw {

struct UavSpec {
  int id = 0;
  int priority = 0;           // 0..7, higher wins
  double cruise_speed = 0.0;  // 0: use the control default
  std::string color = "none";
  std::optional<double> depart;  // fixed departure time; otherwise scheduled by spawn spacing
};

struct SimConfig {
  double dt = 0.05;
  double max_time = 600.0;
  std::uint64_t seed = 1;
  double spawn_spacing = 2.0;
  double depart_jitter = 0.0;  // uniform extra delay in [0, jitter), drawn from seed
  int threads = 1;
  ControlParams control;
};

struct Scenario {
  std::string name;
  NetworkConfig network;
  SimConfig sim;
  std::vector<UavSpec> uavs;
  std::vector<Route> routes;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cross-checks fleet and routes against a built network: unique UAV ids, one
// valid route per UAV, sane timing. Throws ScenarioError.
void check_scenario(const Scenario& s, const Network& net);

}  // namespace skyhw
