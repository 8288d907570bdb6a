#include "skyhw/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "json.hpp"
#include "skyhw/kernels.hpp"

namespace skyhw {

double MetricsReport::share_at_or_above_r_a() const {
  if (ticks_with_pairs == 0) return 1.0;
  return 1.0 - static_cast<double>(ticks_below_r_a) / static_cast<double>(ticks_with_pairs);
}

int MetricsReport::total_violations() const {
  int n = 0;
  for (const auto& [id, c] : violations) n += c;
  return n;
}

std::string MetricsReport::to_json() const {
  using nlohmann::json;
  json j;
  j["global_min_distance"] = global_min_distance ? json(*global_min_distance) : json(nullptr);
  json series = json::array();
  for (const auto& m : per_tick_min) series.push_back({m.t, m.distance ? json(*m.distance) : json(nullptr)});
  j["per_tick_min"] = std::move(series);
  json comp = json::object();
  for (const auto& [id, t] : completions) comp[std::to_string(id)] = t;
  j["completions"] = std::move(comp);
  json vio = json::object();
  for (const auto& [id, n] : violations) vio[std::to_string(id)] = n;
  j["violations"] = std::move(vio);
  j["violations_by_mode"] = violations_by_mode;
  nlohmann::json eps = nlohmann::json::array();
  for (const auto& e : violation_episodes) {
    eps.push_back({{"uav", e.id},
                   {"t_begin", e.t_begin},
                   {"t_end", e.t_end},
                   {"mode", to_string(e.mode)},
                   {"position", {e.position.x, e.position.y, e.position.z}},
                   {"max_excursion", e.max_excursion}});
  }
  j["violation_episodes"] = std::move(eps);
  j["throughput"] = throughput;
  json occ = json::object();
  for (const auto& [id, n] : hub_occupancy) occ[std::to_string(id)] = n;
  j["hub_occupancy"] = std::move(occ);
  j["ticks_with_pairs"] = ticks_with_pairs;
  j["ticks_below_r_a"] = ticks_below_r_a;
  j["share_at_or_above_r_a"] = share_at_or_above_r_a();
  j["containment_checked"] = containment_checked;
  j["max_excursion"] = max_excursion;
  j["max_curvature"] = max_curvature;
  j["max_curvature_uav"] = max_curvature_uav;
  j["uav_count"] = uavs.size();
  j["completed"] = completions.size();
  j["faults"] = faults;
  j["duration"] = duration;
  return j.dump(1);
}

MetricsReport compute_metrics(const SimTrace& trace, const Network* net, const MetricsOptions& opt) {
  MetricsReport rep;
  rep.containment_checked = net != nullptr;
  std::set<int> ids;
  struct Tail {
    Vec3 p0, p1;
    int n = 0;
  };
  std::map<int, Tail> tails;
  kernels::PointCloud cloud;
  std::map<int, int> occupancy;
  std::map<int, std::size_t> open_episode;  // uav id -> index of its running episode

  for (std::size_t k = 0; k < trace.ticks(); ++k) {
    const std::size_t b = trace.tick_begin[k];
    const std::size_t e = trace.tick_begin[k + 1];
    if (b == e) continue;
    const double t = trace.records[b].t;
    rep.duration = t;
    cloud.clear();
    occupancy.clear();
    for (std::size_t i = b; i < e; ++i) {
      const TraceRecord& r = trace.records[i];
      ids.insert(r.id);
      if (r.mode == FlightMode::Done) {
        rep.completions.emplace(r.id, r.t);
        continue;
      }
      cloud.push_back(r.position);
      if (net) {
        const double out = net->distance_outside(r.position);
        rep.max_excursion = std::max(rep.max_excursion, out);
        if (out > opt.containment_tol) {
          ++rep.violations[r.id];
          ++rep.violations_by_mode[to_string(r.mode)];
          auto it = open_episode.find(r.id);
          if (it == open_episode.end()) {
            it = open_episode.emplace(r.id, rep.violation_episodes.size()).first;
            rep.violation_episodes.push_back({r.id, r.t, r.t, r.mode, r.position, out});
          }
          ViolationEpisode& ep = rep.violation_episodes[it->second];
          ep.t_end = r.t;
          ep.max_excursion = std::max(ep.max_excursion, out);
        } else {
          open_episode.erase(r.id);
        }
      }
      if (r.mode == FlightMode::RotaryIsland) {
        int hub = r.hub;
        if (hub < 0 && net) {
          double best = std::numeric_limits<double>::infinity();
          for (const Node& n : net->nodes()) {
            if (n.spec.kind != NodeKind::Hub || !n.cylinder.contains(r.position)) continue;
            const double d = (r.position - n.spec.center).horizontal().norm();
            if (d < best) {
              best = d;
              hub = n.spec.id;
            }
          }
        }
        if (hub >= 0) ++occupancy[hub];
      }
      // Consecutive samples only; a step at or below the threshold (a stop, or a
      // hover) breaks the chain.
      Tail& tl = tails[r.id];
      const Vec3 p2 = r.position;
      if (tl.n >= 1 && distance(tl.p1, p2) <= opt.min_curvature_step) {
        tl.p1 = p2;
        tl.n = 1;
      } else {
        if (tl.n >= 2) {
          const double a = distance(tl.p0, tl.p1);
          const double bb = distance(tl.p1, p2);
          const double c = distance(tl.p0, p2);
          const double area2 = (tl.p1 - tl.p0).cross(p2 - tl.p1).norm();
          const double kappa = c > 0.0 ? 2.0 * area2 / (a * bb * c) : std::numeric_limits<double>::infinity();
          if (kappa > rep.max_curvature) {
            rep.max_curvature = kappa;
            rep.max_curvature_uav = r.id;
          }
        }
        tl.p0 = tl.p1;
        tl.p1 = p2;
        tl.n = std::min(tl.n + 1, 2);
      }
    }
    for (const auto& [hub, n] : occupancy) rep.hub_occupancy[hub] = std::max(rep.hub_occupancy[hub], n);

    TickMin tm{t, std::nullopt};
    if (cloud.size() >= 2) {
      const auto v = cloud.view();
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i + 1 < cloud.size(); ++i) {
        best = std::min(best, kernels::min_distance_sq(v.subview(i, 1), v.subview(i + 1, cloud.size() - i - 1)));
      }
      tm.distance = std::sqrt(best);
      ++rep.ticks_with_pairs;
      if (*tm.distance < opt.r_a) ++rep.ticks_below_r_a;
      if (!rep.global_min_distance || *tm.distance < *rep.global_min_distance) rep.global_min_distance = tm.distance;
    }
    rep.per_tick_min.push_back(tm);
  }
  rep.uavs.assign(ids.begin(), ids.end());

  std::map<std::string, int> crossings;
  for (const auto& e : trace.events) {
    if (e.detail.rfind("fault", 0) == 0) rep.faults.push_back("uav " + std::to_string(e.id) + ": " + e.detail);
    if (e.from == FlightMode::Highway && e.to != FlightMode::Highway) ++crossings[e.detail];
  }
  const double minutes = rep.duration / 60.0;
  for (const auto& [key, n] : crossings) rep.throughput[key] = minutes > 0.0 ? n / minutes : 0.0;
  return rep;
}

}  // namespace skyhw
