#include "skyhw/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

namespace skyhw {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

const std::vector<std::pair<const char*, double ControlParams::*>>& control_fields() {
  static const std::vector<std::pair<const char*, double ControlParams::*>> fields{
      {"v_cruise", &ControlParams::v_cruise},
      {"v_max", &ControlParams::v_max},
      {"a_max", &ControlParams::a_max},
      {"k_att", &ControlParams::k_att},
      {"k_rep", &ControlParams::k_rep},
      {"r_rep", &ControlParams::r_rep},
      {"k_core", &ControlParams::k_core},
      {"r_core", &ControlParams::r_core},
      {"horizon", &ControlParams::horizon},
      {"swirl", &ControlParams::swirl},
      {"k_curb", &ControlParams::k_curb},
      {"d_curb", &ControlParams::d_curb},
      {"k_radial", &ControlParams::k_radial},
      {"beta", &ControlParams::beta},
      {"deflect", &ControlParams::deflect},
      {"gate_heading_tol", &ControlParams::gate_heading_tol},
      {"gate_lat_tol", &ControlParams::gate_lat_tol},
      {"trigger_steps", &ControlParams::trigger_steps},
  };
  return fields;
}

class Record {
 public:
  Record(int line, std::string kind) : line_(line), kind_(std::move(kind)) {}

  void add(const std::string& key, const std::string& value) {
    if (!values_.emplace(key, value).second) fail("duplicate key '" + key + "'");
  }

  const std::string& kind() const { return kind_; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string text(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) fail("missing '" + key + "' in " + kind_ + " record");
    used_.insert(key);
    return it->second;
  }

  double number(const std::string& key) { return to_number(key, text(key)); }

  double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  long long integer(const std::string& key) {
    const std::string v = text(key);
    long long out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) fail("'" + key + "' is not an integer: " + v);
    return out;
  }

  long long integer_or(const std::string& key, long long fallback) { return has(key) ? integer(key) : fallback; }

  // Every key must have been consumed.
  void finish() const {
    for (const auto& [k, v] : values_) {
      if (!used_.count(k)) fail("unknown key '" + k + "' in " + kind_ + " record");
    }
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(line_, msg); }

  double to_number(const std::string& key, const std::string& v) const {
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out)) {
      fail("'" + key + "' is not a finite number: " + v);
    }
    return out;
  }

  int line() const { return line_; }

 private:
  int line_;
  std::string kind_;
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

int as_int(Record& r, const std::string& key) {
  const long long v = r.integer(key);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) r.fail("'" + key + "' out of range");
  return static_cast<int>(v);
}

NodeKind parse_kind(Record& r) {
  const std::string k = r.text("kind");
  if (k == "termination" || k == "airport") return NodeKind::Termination;
  if (k == "connection") return NodeKind::Connection;
  if (k == "hub") return NodeKind::Hub;
  r.fail("unknown node kind '" + k + "'");
}

RotaryDirection parse_rotary(Record& r) {
  if (!r.has("rotary")) return RotaryDirection::Clockwise;
  const std::string d = r.text("rotary");
  if (d == "cw" || d == "clockwise") return RotaryDirection::Clockwise;
  if (d == "ccw" || d == "anticlockwise") return RotaryDirection::Anticlockwise;
  r.fail("unknown rotary direction '" + d + "'");
}

std::vector<int> parse_list(Record& r, const std::string& key) {
  const std::string v = r.text(key);
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    const std::size_t comma = v.find(',', pos);
    const std::string item = v.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    int x = 0;
    const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
    if (item.empty() || ec != std::errc() || p != item.data() + item.size()) {
      r.fail("bad node list '" + v + "'");
    }
    out.push_back(x);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string kind_text(NodeKind k) { return to_string(k); }

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

Scenario parse_scenario(const std::string& text) {
  Scenario s;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::set<std::string> singletons;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    std::string kind;
    if (!(words >> kind)) continue;
    Record r(line, kind);
    std::string tok;
    while (words >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0) r.fail("expected key=value, got '" + tok + "'");
      r.add(tok.substr(0, eq), tok.substr(eq + 1));
    }
    if (kind == "scenario" || kind == "params" || kind == "control" || kind == "sim") {
      if (!singletons.insert(kind).second) r.fail("duplicate " + kind + " record");
    }

    if (kind == "scenario") {
      s.name = r.text("name");
    } else if (kind == "params") {
      GlobalParams& gp = s.network.params;
      gp.r_a = r.number("r_a");
      gp.r_aw = r.number("r_aw");
      gp.r_is = r.number("r_is");
      gp.h_aw = r.number("h_aw");
      gp.r_t = r.number("r_t");
      if (r.has("min_angle_deg")) s.network.min_pair_angle = r.number("min_angle_deg") / kRadToDeg;
    } else if (kind == "control") {
      for (const auto& [name, field] : control_fields()) {
        if (r.has(name)) s.sim.control.*field = r.number(name);
      }
    } else if (kind == "sim") {
      SimConfig& sc = s.sim;
      sc.dt = r.number_or("dt", sc.dt);
      sc.max_time = r.number_or("max_time", sc.max_time);
      const long long seed = r.integer_or("seed", static_cast<long long>(sc.seed));
      if (seed < 0) r.fail("seed must be >= 0");
      sc.seed = static_cast<std::uint64_t>(seed);
      sc.spawn_spacing = r.number_or("spawn_spacing", sc.spawn_spacing);
      sc.depart_jitter = r.number_or("depart_jitter", sc.depart_jitter);
      sc.threads = static_cast<int>(r.integer_or("threads", sc.threads));
      if (!(sc.dt > 0.0)) r.fail("dt must be > 0");
      if (!(sc.max_time > 0.0)) r.fail("max_time must be > 0");
      if (sc.spawn_spacing < 0.0 || sc.depart_jitter < 0.0) r.fail("spawn timing must be >= 0");
      if (sc.threads < 1) r.fail("threads must be >= 1");
    } else if (kind == "node") {
      NodeSpec n;
      n.id = as_int(r, "id");
      n.kind = parse_kind(r);
      n.center = {r.number("x"), r.number("y"), r.number("z")};
      if (r.has("radius")) {
        const std::string rv = r.text("radius");
        if (rv != "auto") {
          n.radius = r.to_number("radius", rv);
          if (!(*n.radius > 0.0)) r.fail("radius must be > 0");
        }
      }
      n.rotary = parse_rotary(r);
      s.network.nodes.push_back(n);
    } else if (kind == "airway") {
      s.network.airways.push_back({as_int(r, "id"), as_int(r, "from"), as_int(r, "to")});
    } else if (kind == "uav") {
      UavSpec u;
      u.id = as_int(r, "id");
      u.priority = static_cast<int>(r.integer_or("priority", 0));
      u.cruise_speed = r.number_or("cruise_speed", 0.0);
      if (r.has("color")) u.color = r.text("color");
      if (r.has("depart")) u.depart = r.number("depart");
      s.uavs.push_back(u);
    } else if (kind == "route") {
      Route rt;
      rt.uav = as_int(r, "uav");
      rt.nodes = parse_list(r, "nodes");
      s.routes.push_back(rt);
    } else {
      r.fail("unknown record '" + kind + "'");
    }
    r.finish();
  }
  if (!singletons.count("params")) throw ConfigError(0, "missing params record");
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string format_scenario(const Scenario& s) {
  std::ostringstream os;
  const auto num = format_number;
  if (!s.name.empty()) os << "scenario name=" << s.name << '\n';
  const GlobalParams& gp = s.network.params;
  os << "params r_a=" << num(gp.r_a) << " r_aw=" << num(gp.r_aw) << " r_is=" << num(gp.r_is)
     << " h_aw=" << num(gp.h_aw) << " r_t=" << num(gp.r_t)
     << " min_angle_deg=" << num(s.network.min_pair_angle * kRadToDeg) << '\n';
  os << "control";
  const ControlParams defaults;
  for (const auto& [name, field] : control_fields()) {
    if (s.sim.control.*field != defaults.*field) os << ' ' << name << '=' << num(s.sim.control.*field);
  }
  os << '\n';
  const SimConfig& sc = s.sim;
  os << "sim dt=" << num(sc.dt) << " max_time=" << num(sc.max_time) << " seed=" << sc.seed
     << " spawn_spacing=" << num(sc.spawn_spacing) << " depart_jitter=" << num(sc.depart_jitter)
     << " threads=" << sc.threads << '\n';
  for (const auto& n : s.network.nodes) {
    os << "node id=" << n.id << " kind=" << kind_text(n.kind) << " x=" << num(n.center.x) << " y=" << num(n.center.y)
       << " z=" << num(n.center.z) << " radius=" << (n.radius ? num(*n.radius) : std::string("auto"))
       << " rotary=" << to_string(n.rotary) << '\n';
  }
  for (const auto& a : s.network.airways) os << "airway id=" << a.id << " from=" << a.from << " to=" << a.to << '\n';
  for (const auto& u : s.uavs) {
    os << "uav id=" << u.id << " priority=" << u.priority;
    if (u.cruise_speed > 0.0) os << " cruise_speed=" << num(u.cruise_speed);
    os << " color=" << u.color;
    if (u.depart) os << " depart=" << num(*u.depart);
    os << '\n';
  }
  for (const auto& r : s.routes) {
    os << "route uav=" << r.uav << " nodes=";
    for (std::size_t i = 0; i < r.nodes.size(); ++i) os << (i ? "," : "") << r.nodes[i];
    os << '\n';
  }
  return os.str();
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError(0, "cannot write " + path.string());
  out << format_scenario(s);
}

}  // namespace skyhw
