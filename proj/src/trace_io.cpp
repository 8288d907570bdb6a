#include "skyhw/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <vector>

namespace skyhw {

namespace {

std::vector<std::string> split(const std::string& line, std::size_t max_fields) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = out.size() + 1 == max_fields ? std::string::npos : line.find(',', pos);
    out.push_back(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

double number(const std::string& s, int line, const char* what) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
    throw TraceError(line, std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

int integer(const std::string& s, int line, const char* what) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
    throw TraceError(line, std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

FlightMode mode(const std::string& s, int line) {
  auto m = parse_flight_mode(s);
  if (!m) throw TraceError(line, "unknown mode '" + s + "'");
  return *m;
}

void strip_cr(std::string& s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
}

}  // namespace

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

void write_trace(std::ostream& out, const SimTrace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace.records) {
    out << fixed6(r.t) << ',' << r.id << ',' << fixed6(r.position.x) << ',' << fixed6(r.position.y) << ','
        << fixed6(r.position.z) << ',' << fixed6(r.velocity.x) << ',' << fixed6(r.velocity.y) << ','
        << fixed6(r.velocity.z) << ',' << to_string(r.mode) << ',' << r.priority << '\n';
  }
}

void write_events(std::ostream& out, const SimTrace& trace) {
  out << kEventHeader << '\n';
  for (const auto& e : trace.events) {
    out << fixed6(e.t) << ',' << e.id << ',' << to_string(e.from) << ',' << to_string(e.to) << ',' << e.detail << '\n';
  }
}

SimTrace read_trace(std::istream& in) {
  SimTrace tr;
  std::string line;
  int n = 0;
  if (!std::getline(in, line)) throw TraceError(1, "empty trace");
  ++n;
  strip_cr(line);
  if (line != kTraceHeader) throw TraceError(1, "unexpected header");
  tr.tick_begin.push_back(0);
  std::string last_t;
  while (std::getline(in, line)) {
    ++n;
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = split(line, 10);
    if (f.size() != 10) throw TraceError(n, "expected 10 fields, got " + std::to_string(f.size()));
    TraceRecord r;
    r.t = number(f[0], n, "time");
    r.id = integer(f[1], n, "uav id");
    r.position = {number(f[2], n, "x"), number(f[3], n, "y"), number(f[4], n, "z")};
    r.velocity = {number(f[5], n, "vx"), number(f[6], n, "vy"), number(f[7], n, "vz")};
    r.mode = mode(f[8], n);
    r.priority = integer(f[9], n, "priority");
    if (!tr.records.empty() && f[0] != last_t) {
      if (r.t < tr.records.back().t) throw TraceError(n, "time goes backwards");
      tr.tick_begin.push_back(tr.records.size());
    }
    last_t = f[0];
    tr.records.push_back(r);
  }
  if (!tr.records.empty()) tr.tick_begin.push_back(tr.records.size());
  return tr;
}

void read_events(std::istream& in, SimTrace& trace) {
  std::string line;
  int n = 0;
  if (!std::getline(in, line)) return;
  ++n;
  strip_cr(line);
  if (line != kEventHeader) throw TraceError(1, "unexpected event header");
  while (std::getline(in, line)) {
    ++n;
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = split(line, 5);
    if (f.size() != 5) throw TraceError(n, "expected 5 fields");
    trace.events.push_back({number(f[0], n, "time"), integer(f[1], n, "uav id"), mode(f[2], n), mode(f[3], n), f[4]});
  }
}

}  // namespace skyhw
