#pragma once

// Fixed-step simulation: spawn, snapshot commands, kinematic limits,
// integration, mode transitions, logging.

#include <cstdint>
#include <string>
#include <vector>

#include "skyhw/control.hpp"
#include "skyhw/neighbor_grid.hpp"
#include "skyhw/scenario.hpp"

namespace skyhw {

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KinematicLimits {
  double v_max = 0.0;
  double a_max = 0.0;
  double r_t = 0.0;
};

// Velocity actually flown this step: acceleration clamp, speed clamp, then a
// heading-change limit of min(|v_old|, |v_new|) * dt / r_t, which keeps the
// three-point curvature of the integrated path at or below 1 / r_t.
Vec3 limit_velocity(const Vec3& v_old, const Vec3& v_cmd, const KinematicLimits& lim, double dt);

struct TraceRecord {
  double t = 0.0;
  int id = 0;
  Vec3 position;
  Vec3 velocity;
  FlightMode mode = FlightMode::Grounded;
  int priority = 0;
  int hub = -1;  // node id while circulating a hub, when known
};

struct TraceEvent {
  double t = 0.0;
  int id = 0;
  FlightMode from = FlightMode::Grounded;
  FlightMode to = FlightMode::Grounded;
  std::string detail;
};

struct SimTrace {
  std::vector<TraceRecord> records;   // grouped by tick, id ascending within a tick
  std::vector<std::size_t> tick_begin;  // offset of each tick's first record; size = ticks + 1
  std::vector<TraceEvent> events;

  std::size_t ticks() const { return tick_begin.empty() ? 0 : tick_begin.size() - 1; }
};

class Simulation {
 public:
  // Throws SimulationError when the network fails validation or the scenario is inconsistent.
  Simulation(const Network& net, const Scenario& scenario);

  void step();
  bool finished() const;
  double time() const { return static_cast<double>(tick_) * dt_; }
  std::uint64_t tick() const { return tick_; }
  const std::vector<UavState>& uavs() const { return uavs_; }
  const ControlParams& control() const { return cp_; }
  const SimTrace& trace() const { return trace_; }
  SimTrace take_trace() { return std::move(trace_); }

  // Steps until finished or max time.
  void run();

 private:
  void spawn();
  std::vector<char> busy_columns() const;
  void log_tick(const std::vector<std::size_t>& live);

  const Network& net_;
  ControlParams cp_;
  KinematicLimits lim_;
  double dt_;
  double max_time_;
  int threads_;
  std::uint64_t tick_ = 0;
  std::vector<UavState> uavs_;          // id ascending
  std::vector<RoutePlan> routes_;       // parallel to uavs_
  std::vector<double> depart_;          // scheduled departure time
  std::vector<Vec3> pads_;
  NeighborGrid grid_;
  SimTrace trace_;
};

// Convenience: build, validate, run.
SimTrace simulate(const Network& net, const Scenario& scenario);

}  // namespace skyhw
