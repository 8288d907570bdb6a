#include <algorithm>
#include <limits>

#include "skyhw/kernels.hpp"

namespace skyhw::kernels {

PointCloud::PointCloud(std::span<const Vec3> pts) {
  reserve(pts.size());
  for (const auto& p : pts) push_back(p);
}

void PointCloud::reserve(std::size_t n) {
  x_.reserve(n);
  y_.reserve(n);
  z_.reserve(n);
}

void PointCloud::push_back(const Vec3& p) {
  x_.push_back(p.x);
  y_.push_back(p.y);
  z_.push_back(p.z);
}

void PointCloud::clear() {
  x_.clear();
  y_.clear();
  z_.clear();
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

namespace scalar {

double min_distance_sq(PointsView a, PointsView b) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ax = a.x[i];
    const double ay = a.y[i];
    const double az = a.z[i];
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double dx = b.x[j] - ax;
      const double dy = b.y[j] - ay;
      const double dz = b.z[j] - az;
      const double d2 = (dx * dx + dy * dy) + dz * dz;
      best = std::min(best, d2);
    }
  }
  return best;
}

void within_radius(PointsView pts, const Vec3& q, double radius_sq, std::uint32_t base,
                   std::vector<std::uint32_t>& out) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double dx = pts.x[i] - q.x;
    const double dy = pts.y[i] - q.y;
    const double dz = pts.z[i] - q.z;
    if ((dx * dx + dy * dy) + dz * dz <= radius_sq) out.push_back(base + static_cast<std::uint32_t>(i));
  }
}

}  // namespace scalar
}  // namespace skyhw::kernels
