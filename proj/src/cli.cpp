#include "skyhw/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "skyhw/config.hpp"
#include "skyhw/engine.hpp"
#include "skyhw/metrics.hpp"
#include "skyhw/sampling.hpp"
#include "skyhw/scenarios.hpp"
#include "skyhw/trace_io.hpp"

namespace skyhw {

namespace fs = std::filesystem;

namespace {

std::string default_out() {
  const char* env = std::getenv(kOutDirEnv);
  return env && *env ? env : "out";
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

struct Loaded {
  Scenario scenario;
  Network net;
};

Loaded load(const std::string& path) {
  Scenario s = load_scenario(path);
  Network net = build_network(s.network);
  return {std::move(s), std::move(net)};
}

// Sampled cuboid distance for every checked airway pair; returns false on a
// contradiction with the analytic verdict.
bool oracle_table(const Network& net, const ValidationReport& rep, double step, std::ostream& out) {
  const double r_a = net.params().r_a;
  const double err = sampling_error(step);
  bool ok = true;
  out << "\noracle (grid step " << step << ", error bound " << err << ")\n";
  for (const auto& r : rep.records) {
    if (r.id.rfind("prop2:", 0) != 0) continue;
    const auto colon = r.id.find(':', 6);
    const int a = std::stoi(r.id.substr(6, colon - 6));
    const int b = std::stoi(r.id.substr(colon + 1));
    const auto& ga = net.airways()[net.airway_index(a)].geometry;
    const auto& gb = net.airways()[net.airway_index(b)].geometry;
    const double d = set_distance_sampled(box_sampler(ga.box()), box_sampler(gb.box()), step);
    const bool contradiction = r.pass && d <= r_a - err;
    ok = ok && !contradiction;
    out << std::left << std::setw(28) << r.id << "sampled " << std::setw(14) << d
        << (contradiction ? "CONTRADICTS analytic pass" : "consistent") << '\n';
  }
  return ok;
}

int cmd_validate(const std::string& config, double grid_step, const std::string& out_dir, std::ostream& out) {
  const Loaded L = load(config);
  const ValidationReport rep = validate_network(L.net);
  out << rep.to_text();
  bool ok = rep.all_pass();
  for (const auto& r : L.scenario.routes) {
    const RouteCheck rc = validate_route(L.net, r);
    if (!rc.pass) {
      out << "route of uav " << r.uav << ": " << rc.reason << '\n';
      ok = false;
    }
  }
  if (grid_step > 0.0) ok = oracle_table(L.net, rep, grid_step, out) && ok;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "validation.json", rep.to_json() + "\n");
  }
  return ok ? kExitOk : kExitFailed;
}

struct SimOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> duration;
  std::optional<int> threads;
};

int cmd_simulate(const std::string& config, const SimOptions& o, const std::string& out_dir, std::ostream& out,
                 std::ostream& err) {
  Loaded L = load(config);
  if (o.seed) L.scenario.sim.seed = *o.seed;
  if (o.dt) L.scenario.sim.dt = *o.dt;
  if (o.duration) L.scenario.sim.max_time = *o.duration;
  if (o.threads) L.scenario.sim.threads = *o.threads;
  const ValidationReport rep = validate_network(L.net);
  if (!rep.all_pass()) {
    err << "refusing to simulate: network fails validation\n";
    for (const auto* f : rep.failures()) err << "  " << f->id << ": " << f->note << '\n';
    return kExitFailed;
  }
  SimTrace trace;
  try {
    trace = simulate(L.net, L.scenario);
  } catch (const SimulationError& e) {
    err << "simulation error: " << e.what() << '\n';
    return kExitFailed;
  }
  const GlobalParams& gp = L.net.params();
  const MetricsReport m = compute_metrics(trace, &L.net, {gp.r_a, 0.1 * gp.r_aw, kExactCurvatureStep});
  fs::create_directories(out_dir);
  {
    std::ofstream f(fs::path(out_dir) / "trace.csv");
    write_trace(f, trace);
    std::ofstream e(fs::path(out_dir) / "events.csv");
    write_events(e, trace);
  }
  write_file(fs::path(out_dir) / "metrics.json", m.to_json() + "\n");

  const std::size_t n = L.scenario.uavs.size();
  const bool complete = m.completions.size() == n && m.faults.empty();
  const bool separated = !m.global_min_distance || *m.global_min_distance >= 0.8 * gp.r_a;
  const bool mostly = m.share_at_or_above_r_a() >= 0.99;
  const bool contained = m.total_violations() == 0;
  out << "uavs completed      " << m.completions.size() << "/" << n << '\n';
  out << "sim time            " << m.duration << " s\n";
  out << "global min distance "
      << (m.global_min_distance ? std::to_string(*m.global_min_distance) : std::string("n/a")) << '\n';
  out << "ticks >= r_a        " << m.share_at_or_above_r_a() * 100.0 << " %\n";
  out << "containment         " << m.total_violations() << " violations, max excursion " << m.max_excursion << '\n';
  out << "max curvature       " << m.max_curvature << " (limit " << 1.0 / gp.r_t << ")\n";
  for (const auto& f : m.faults) out << "fault: " << f << '\n';
  out << "output              " << out_dir << '\n';
  return complete && separated && mostly && contained ? kExitOk : kExitFailed;
}

int cmd_scenario(const std::string& name, std::optional<std::uint64_t> seed, const RandomOptions& ropt,
                 const std::string& out_dir, std::ostream& out) {
  Scenario s;
  if (name == "paper_flight") {
    s = paper_flight();
  } else if (name == "paper_sim") {
    s = paper_sim();
  } else if (name == "random") {
    s = random_scenario(seed.value_or(1), ropt);
  } else {
    throw CLI::ValidationError("unknown scenario '" + name + "' (paper_flight, paper_sim, random)");
  }
  if (seed && name != "random") s.sim.seed = *seed;
  fs::create_directories(out_dir);
  const fs::path p = fs::path(out_dir) / (name + ".scn");
  save_scenario(s, p);
  out << p.string() << '\n';
  return kExitOk;
}

void write_series(const fs::path& dir, const SimTrace& trace, const MetricsReport& m) {
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "min_distance.csv");
    f << "t,min_distance\n";
    for (const auto& tm : m.per_tick_min) {
      if (tm.distance) f << fixed6(tm.t) << ',' << fixed6(*tm.distance) << '\n';
    }
  }
  std::map<int, std::array<std::ofstream, 5>> files;
  const char* names[5] = {"x", "y", "z", "speed", "mode"};
  for (const auto& r : trace.records) {
    auto it = files.find(r.id);
    if (it == files.end()) {
      it = files.emplace(r.id, std::array<std::ofstream, 5>{}).first;
      for (int q = 0; q < 5; ++q) {
        it->second[q].open(dir / ("uav_" + std::to_string(r.id) + "_" + names[q] + ".csv"));
        it->second[q] << "t," << names[q] << '\n';
      }
    }
    auto& f = it->second;
    const std::string t = fixed6(r.t);
    f[0] << t << ',' << fixed6(r.position.x) << '\n';
    f[1] << t << ',' << fixed6(r.position.y) << '\n';
    f[2] << t << ',' << fixed6(r.position.z) << '\n';
    f[3] << t << ',' << fixed6(r.velocity.norm()) << '\n';
    f[4] << t << ',' << static_cast<int>(r.mode) << '\n';
  }
}

int cmd_metrics(const std::string& trace_path, std::string events_path, const std::string& config,
                const std::string& out_dir, std::ostream& out, std::ostream& err) {
  std::ifstream in(trace_path);
  if (!in) {
    err << "cannot open " << trace_path << '\n';
    return kExitFailed;
  }
  SimTrace trace;
  try {
    trace = read_trace(in);
    if (events_path.empty()) {
      const fs::path sib = fs::path(trace_path).parent_path() / "events.csv";
      if (fs::exists(sib)) events_path = sib.string();
    }
    if (!events_path.empty()) {
      std::ifstream ev(events_path);
      read_events(ev, trace);
    }
  } catch (const TraceError& e) {
    err << trace_path << ": " << e.what() << '\n';
    return kExitFailed;
  }
  if (trace.records.empty()) {
    err << "empty trace\n";
    return kExitFailed;
  }
  std::optional<Loaded> L;
  MetricsOptions opt{0.0, 0.0, kTextCurvatureStep};
  if (!config.empty()) {
    L = load(config);
    opt.r_a = L->net.params().r_a;
    opt.containment_tol = 0.1 * L->net.params().r_aw;
  }
  const MetricsReport m = compute_metrics(trace, L ? &L->net : nullptr, opt);
  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "metrics.json", m.to_json() + "\n");
  write_series(fs::path(out_dir) / "series", trace, m);
  out << "ticks               " << m.per_tick_min.size() << '\n';
  out << "uavs                " << m.uavs.size() << " (" << m.completions.size() << " completed)\n";
  if (m.global_min_distance) {
    out << "global min distance " << *m.global_min_distance << '\n';
  } else {
    out << "global min distance n/a (never two UAVs airborne; min-distance series is empty)\n";
  }
  out << "output              " << out_dir << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sky highway network validation and traffic simulation", "skyhw"};
  app.require_subcommand(1);
  const std::string out_default = default_out();

  std::string config;
  std::string out_dir = out_default;
  double grid_step = 0.0;
  auto* validate = app.add_subcommand("validate", "Check a network against the separation conditions");
  validate->add_option("--config", config, "Scenario file")->required();
  validate->add_option("--grid-step", grid_step, "Also cross-check airway pairs with a sampling oracle at this step");
  validate->add_option("--out", out_dir, "Directory for validation.json (default $" + std::string(kOutDirEnv) + " or out)");

  SimOptions so;
  std::uint64_t seed = 0;
  double dt = 0.0;
  double duration = 0.0;
  int threads = 0;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run a scenario and write trace, events and metrics");
  simulate_cmd->add_option("--config", config, "Scenario file")->required();
  auto* seed_opt = simulate_cmd->add_option("--seed", seed, "Override the scenario seed");
  auto* dt_opt = simulate_cmd->add_option("--dt", dt, "Time step, s")->check(CLI::PositiveNumber);
  auto* dur_opt = simulate_cmd->add_option("--duration", duration, "Maximum sim time, s")->check(CLI::PositiveNumber);
  auto* thr_opt = simulate_cmd->add_option("--threads", threads, "Worker threads for command computation")
                      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--out", out_dir, "Output directory");

  std::string name;
  RandomOptions ropt;
  std::uint64_t scen_seed = 0;
  auto* scenario_cmd = app.add_subcommand("scenario", "Write a built-in scenario file");
  scenario_cmd->add_option("name", name, "paper_flight | paper_sim | random")->required();
  auto* scen_seed_opt = scenario_cmd->add_option("--seed", scen_seed, "Seed (random lattice, and the sim seed)");
  scenario_cmd->add_option("--uavs", ropt.uavs, "Fleet size for random")->check(CLI::NonNegativeNumber);
  scenario_cmd->add_option("--rows", ropt.rows, "Lattice rows for random")->check(CLI::Range(3, 12));
  scenario_cmd->add_option("--cols", ropt.cols, "Lattice columns for random")->check(CLI::Range(3, 12));
  scenario_cmd->add_option("--out", out_dir, "Output directory");

  std::string trace_path;
  std::string events_path;
  auto* metrics_cmd = app.add_subcommand("metrics", "Recompute metrics and plot series from a trace");
  metrics_cmd->add_option("--trace", trace_path, "Trace file")->required();
  metrics_cmd->add_option("--events", events_path, "Events file (default: events.csv next to the trace)");
  metrics_cmd->add_option("--config", config, "Scenario file, enables containment and hub occupancy");
  metrics_cmd->add_option("--out", out_dir, "Output directory");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(config, grid_step, validate->count("--out") ? out_dir : "", out);
    if (simulate_cmd->parsed()) {
      if (*seed_opt) so.seed = seed;
      if (*dt_opt) so.dt = dt;
      if (*dur_opt) so.duration = duration;
      if (*thr_opt) so.threads = threads;
      return cmd_simulate(config, so, out_dir, out, err);
    }
    if (scenario_cmd->parsed()) {
      return cmd_scenario(name, *scen_seed_opt ? std::optional<std::uint64_t>(scen_seed) : std::nullopt, ropt, out_dir,
                          out);
    }
    if (metrics_cmd->parsed()) return cmd_metrics(trace_path, events_path, config, out_dir, out, err);
  } catch (const ConfigError& e) {
    err << config << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const CLI::ValidationError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const NetworkError& e) {
    err << "network: " << e.what() << '\n';
    return kExitFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitUsage;
}

}  // namespace skyhw
