#pragma once

// Built-in scenario generators.

#include <cstdint>

#include "skyhw/scenario.hpp"

namespace skyhw {

// Six-node lab network at 1 m altitude with airports 7 and 8 below nodes 1
// and 6, six UAVs.
Scenario paper_flight();

// 4x4 lattice at 100 m spacing with chamfered corners (12 hubs, 4 corner
// connections, 8 airports), 80 UAVs.
Scenario paper_sim();

struct RandomOptions {
  int rows = 3;
  int cols = 3;
  int uavs = 24;
};

// Jittered chamfered lattice with random size, spacing and fleet. Passes
// validation by construction; identical seeds give identical scenarios.
Scenario random_scenario(std::uint64_t seed, const RandomOptions& opt = {});

}  // namespace skyhw
