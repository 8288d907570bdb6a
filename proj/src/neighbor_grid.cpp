#include "skyhw/neighbor_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skyhw {

namespace {

constexpr std::int64_t kBias = std::int64_t{1} << 20;
constexpr std::uint64_t kMask = (std::uint64_t{1} << 21) - 1;

}  // namespace

std::int64_t NeighborGrid::coord(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_)); }

std::uint64_t NeighborGrid::key_of(std::int64_t ix, std::int64_t iy, std::int64_t iz) const {
  auto pack = [](std::int64_t i) { return static_cast<std::uint64_t>(i + kBias) & kMask; };
  return (pack(ix) << 42) | (pack(iy) << 21) | pack(iz);
}

void NeighborGrid::build(std::span<const Vec3> points, double cell) {
  if (!(cell > 0.0)) throw std::invalid_argument("grid cell must be > 0");
  cell_ = cell;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed;
  keyed.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3& p = points[i];
    keyed.emplace_back(key_of(coord(p.x), coord(p.y), coord(p.z)), static_cast<std::uint32_t>(i));
  }
  std::sort(keyed.begin(), keyed.end());
  sorted_.clear();
  sorted_.reserve(points.size());
  order_.clear();
  cells_.clear();
  for (std::size_t k = 0; k < keyed.size(); ++k) {
    sorted_.push_back(points[keyed[k].second]);
    order_.push_back(keyed[k].second);
    if (cells_.empty() || cells_.back().key != keyed[k].first) {
      cells_.push_back({keyed[k].first, static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k)});
    }
    cells_.back().end = static_cast<std::uint32_t>(k + 1);
  }
}

void NeighborGrid::query(const Vec3& q, double radius, std::vector<std::uint32_t>& out) const {
  out.clear();
  if (cells_.empty() || !(radius >= 0.0)) return;
  const double r2 = radius * radius;
  const std::int64_t lo[3] = {coord(q.x - radius), coord(q.y - radius), coord(q.z - radius)};
  const std::int64_t hi[3] = {coord(q.x + radius), coord(q.y + radius), coord(q.z + radius)};
  const auto view = sorted_.view();
  for (std::int64_t ix = lo[0]; ix <= hi[0]; ++ix) {
    for (std::int64_t iy = lo[1]; iy <= hi[1]; ++iy) {
      for (std::int64_t iz = lo[2]; iz <= hi[2]; ++iz) {
        const std::uint64_t key = key_of(ix, iy, iz);
        auto it = std::lower_bound(cells_.begin(), cells_.end(), key,
                                   [](const Cell& c, std::uint64_t k) { return c.key < k; });
        if (it == cells_.end() || it->key != key) continue;
        kernels::within_radius(view.subview(it->begin, it->end - it->begin), q, r2, it->begin, out);
      }
    }
  }
  for (auto& slot : out) slot = order_[slot];
  std::sort(out.begin(), out.end());
}

std::vector<std::uint32_t> brute_force_within(std::span<const Vec3> points, const Vec3& q, double radius) {
  std::vector<std::uint32_t> out;
  const double r2 = radius * radius;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3 d = points[i] - q;
    if ((d.x * d.x + d.y * d.y) + d.z * d.z <= r2) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

}  // namespace skyhw
