#pragma once

// Uniform-grid spatial index over a fixed point set. Rebuilt every tick.

#include <cstdint>
#include <span>
#include <vector>

#include "skyhw/kernels.hpp"

namespace skyhw {

class NeighborGrid {
 public:
  // cell must be > 0.
  void build(std::span<const Vec3> points, double cell);

  // Indices (into the build input) of points with |p - q| <= radius, ascending.
  // Safe to call concurrently.
  void query(const Vec3& q, double radius, std::vector<std::uint32_t>& out) const;

  std::size_t size() const { return order_.size(); }

 private:
  struct Cell {
    std::uint64_t key;
    std::uint32_t begin;
    std::uint32_t end;
  };

  std::uint64_t key_of(std::int64_t ix, std::int64_t iy, std::int64_t iz) const;
  std::int64_t coord(double v) const;

  double cell_ = 1.0;
  kernels::PointCloud sorted_;        // points grouped by cell
  std::vector<std::uint32_t> order_;  // sorted slot -> input index
  std::vector<Cell> cells_;           // ascending key
};

// Reference all-points filter, same contract as NeighborGrid::query.
std::vector<std::uint32_t> brute_force_within(std::span<const Vec3> points, const Vec3& q, double radius);

}  // namespace skyhw
