#pragma once

// Post-run measurements over a trace: separation, containment, completion,
// throughput, hub occupancy and path curvature.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skyhw/engine.hpp"

namespace skyhw {

struct MetricsOptions {
  double r_a = 0.0;                // separation distance for the "ticks at or above" share
  double containment_tol = 0.0;    // allowed excursion outside airways and intersections
  double min_curvature_step = 0.0; // a step this short breaks the three-point curvature chain
};

// Step floors for the curvature estimate: in-memory traces carry full
// precision, text traces are rounded to 1e-6.
inline constexpr double kExactCurvatureStep = 1e-5;
inline constexpr double kTextCurvatureStep = 5e-3;

struct TickMin {
  double t = 0.0;
  std::optional<double> distance;  // absent when fewer than two UAVs are airborne
};

// One excursion beyond the containment tolerance, from its first tick.
struct ViolationEpisode {
  int id = 0;
  double t_begin = 0.0;
  double t_end = 0.0;
  FlightMode mode = FlightMode::Grounded;  // mode at the first tick
  Vec3 position;                           // position at the first tick
  double max_excursion = 0.0;
};

struct MetricsReport {
  std::optional<double> global_min_distance;
  std::vector<TickMin> per_tick_min;
  std::size_t ticks_with_pairs = 0;
  std::size_t ticks_below_r_a = 0;
  std::map<int, double> completions;  // uav id -> time logged as Done
  std::map<int, int> violations;      // uav id -> ticks outside the network beyond tolerance
  std::map<std::string, int> violations_by_mode;
  std::vector<ViolationEpisode> violation_episodes;
  double max_excursion = 0.0;
  bool containment_checked = false;
  std::map<std::string, double> throughput;  // finishing-line crossings per minute, by airway/direction
  std::map<int, int> hub_occupancy;          // hub id -> max simultaneous circulating UAVs
  double max_curvature = 0.0;
  int max_curvature_uav = -1;
  std::vector<int> uavs;
  std::vector<std::string> faults;
  double duration = 0.0;

  double share_at_or_above_r_a() const;
  int total_violations() const;
  std::string to_json() const;
};

// `net` enables containment and position-derived hub occupancy; may be null.
MetricsReport compute_metrics(const SimTrace& trace, const Network* net, const MetricsOptions& opt);

}  // namespace skyhw
