#pragma once

// Data-parallel distance kernels.
//
// Every kernel has a scalar reference implementation and an AVX2 variant.
// The variant used by the public entry points is picked once at runtime from
// CPUID and can be overridden (tests, SKYHW_FORCE_SCALAR=1). Both variants
// evaluate the squared distance as (dx*dx + dy*dy) + dz*dz without fused
// multiply-add, so they return bit-identical results.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "skyhw/vec3.hpp"

namespace skyhw::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

// Structure-of-arrays view over points. All three spans have equal length.
struct PointsView {
  std::span<const double> x;
  std::span<const double> y;
  std::span<const double> z;

  std::size_t size() const { return x.size(); }
  bool empty() const { return x.empty(); }
  PointsView subview(std::size_t offset, std::size_t count) const {
    return {x.subspan(offset, count), y.subspan(offset, count), z.subspan(offset, count)};
  }
};

class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::span<const Vec3> pts);

  void reserve(std::size_t n);
  void push_back(const Vec3& p);
  void clear();
  std::size_t size() const { return x_.size(); }
  bool empty() const { return x_.empty(); }
  Vec3 operator[](std::size_t i) const { return {x_[i], y_[i], z_[i]}; }
  PointsView view() const { return {x_, y_, z_}; }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> z_;
};

// Minimum squared distance over all pairs (a_i, b_j). +inf if either is empty.
double min_distance_sq(PointsView a, PointsView b);

// Appends base + i for every point i with |p_i - q|^2 <= radius_sq, in index order.
void within_radius(PointsView pts, const Vec3& q, double radius_sq, std::uint32_t base,
                   std::vector<std::uint32_t>& out);

bool avx2_supported();
Isa active_isa();
// Overrides the dispatch target; requesting Avx2 on a machine without it is ignored.
void set_isa(Isa isa);

namespace scalar {
double min_distance_sq(PointsView a, PointsView b);
void within_radius(PointsView pts, const Vec3& q, double radius_sq, std::uint32_t base,
                   std::vector<std::uint32_t>& out);
}  // namespace scalar

namespace avx2 {
double min_distance_sq(PointsView a, PointsView b);
void within_radius(PointsView pts, const Vec3& q, double radius_sq, std::uint32_t base,
                   std::vector<std::uint32_t>& out);
}  // namespace avx2

}  // namespace skyhw::kernels
