#pragma once

// Delimited text for traces (`t,uav_id,x,y,z,vx,vy,vz,mode,priority`, six
// decimals) and transition events (`t,uav_id,from,to,detail`).

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "skyhw/engine.hpp"

namespace skyhw {

class TraceError : public std::runtime_error {
 public:
  TraceError(int line, const std::string& msg) : std::runtime_error("line " + std::to_string(line) + ": " + msg) {}
};

inline constexpr const char* kTraceHeader = "t,uav_id,x,y,z,vx,vy,vz,mode,priority";
inline constexpr const char* kEventHeader = "t,uav_id,from,to,detail";

void write_trace(std::ostream& out, const SimTrace& trace);
void write_events(std::ostream& out, const SimTrace& trace);

// Rows with equal time strings form one tick. Hub ids are not stored and come back as -1.
SimTrace read_trace(std::istream& in);
// Appends events to an existing trace.
void read_events(std::istream& in, SimTrace& trace);

// Fixed six-decimal text; negative zero prints as 0.000000.
std::string fixed6(double v);

}  // namespace skyhw
