#pragma once

// Scenario bundle text format. One record per line, `#` starts a comment:
//
//   scenario name=demo
//   params r_a=3 r_aw=9 r_is=4 h_aw=9 r_t=5 min_angle_deg=20
//   control v_cruise=4 v_max=6 a_max=8            (any ControlParams field)
//   sim dt=0.05 max_time=600 seed=1 spawn_spacing=2 depart_jitter=0 threads=1
//   node id=1 kind=hub x=0 y=0 z=30 radius=auto rotary=cw
//   airway id=1 from=1 to=2
//   uav id=1 priority=0 cruise_speed=4 color=blue depart=0
//   route uav=1 nodes=7,1,2,8

#include <filesystem>
#include <stdexcept>
#include <string>

#include "skyhw/scenario.hpp"

namespace skyhw {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& msg)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

std::string format_scenario(const Scenario& s);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

}  // namespace skyhw
