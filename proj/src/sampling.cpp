#include "skyhw/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "skyhw/kernels.hpp"

namespace skyhw {

namespace {

constexpr std::size_t kChunk = 256;

struct Aabb {
  Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity()};

  void grow(const Vec3& p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
};

double gap(double alo, double ahi, double blo, double bhi) {
  if (ahi < blo) return blo - ahi;
  if (bhi < alo) return alo - bhi;
  return 0.0;
}

double aabb_distance_sq(const Aabb& a, const Aabb& b) {
  const double gx = gap(a.lo.x, a.hi.x, b.lo.x, b.hi.x);
  const double gy = gap(a.lo.y, a.hi.y, b.lo.y, b.hi.y);
  const double gz = gap(a.lo.z, a.hi.z, b.lo.z, b.hi.z);
  return gx * gx + gy * gy + gz * gz;
}

// Samples are produced face by face in raster order, so consecutive runs are
// spatially compact; chunk boxes stay tight without an explicit sort.
struct Chunked {
  kernels::PointCloud cloud;
  std::vector<Aabb> boxes;

  explicit Chunked(const std::vector<Vec3>& pts) : cloud(pts) {
    for (std::size_t i = 0; i < pts.size(); i += kChunk) {
      Aabb box;
      for (std::size_t j = i; j < std::min(pts.size(), i + kChunk); ++j) box.grow(pts[j]);
      boxes.push_back(box);
    }
  }
  kernels::PointsView chunk(std::size_t c) const {
    const std::size_t off = c * kChunk;
    return cloud.view().subview(off, std::min(kChunk, cloud.size() - off));
  }
};

}  // namespace

PointSampler box_sampler(const FrameBox& box) {
  return [box](double step) { return box.sample_surface(step); };
}

PointSampler out_of_cylinder_sampler(const AirwayGeometry& airway, const IntersectionGeometry& node) {
  return [airway, node](double step) {
    std::vector<Vec3> out;
    // Cap faces sit at the cylinder's end planes; a rounding hair must not keep them.
    const double tol = 1e-9 * std::max({1.0, node.center.norm(), node.radius, node.height});
    for (const Vec3& p : airway.box().sample_surface(step)) {
      const Vec3 d = p - node.center;
      const bool inside = d.horizontal().norm() <= node.radius && std::abs(d.z) <= 0.5 * node.height + tol;
      if (!inside) out.push_back(p);
    }
    // Cylinder wall patch inside the cuboid.
    const FrameBox box = airway.box();
    const double circumference = 2.0 * std::numbers::pi * node.radius;
    const auto n_phi = static_cast<std::size_t>(std::ceil(circumference / step));
    const auto n_z = static_cast<std::size_t>(std::max(1.0, std::ceil(node.height / step)));
    for (std::size_t i = 0; i < n_phi; ++i) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_phi);
      const Vec3 radial{std::cos(phi) * node.radius, std::sin(phi) * node.radius, 0.0};
      for (std::size_t k = 0; k <= n_z; ++k) {
        const double z = -0.5 * node.height + node.height * static_cast<double>(k) / static_cast<double>(n_z);
        const Vec3 p = node.center + radial + Vec3{0.0, 0.0, z};
        if (box.contains(p)) out.push_back(p);
      }
    }
    return out;
  };
}

double set_distance_sampled(const PointSampler& a, const PointSampler& b, double step) {
  if (!(step > 0.0)) throw GeometryError("sampling step must be > 0");
  const std::vector<Vec3> pa = a(step);
  const std::vector<Vec3> pb = b(step);
  if (pa.empty() || pb.empty()) throw GeometryError("empty geometry");

  const Chunked ca(pa);
  const Chunked cb(pb);
  struct Candidate {
    double lower_sq;
    std::size_t i;
    std::size_t j;
  };
  std::vector<Candidate> cand;
  cand.reserve(ca.boxes.size() * cb.boxes.size());
  for (std::size_t i = 0; i < ca.boxes.size(); ++i) {
    for (std::size_t j = 0; j < cb.boxes.size(); ++j) {
      cand.push_back({aabb_distance_sq(ca.boxes[i], cb.boxes[j]), i, j});
    }
  }
  std::sort(cand.begin(), cand.end(), [](const Candidate& x, const Candidate& y) {
    return x.lower_sq < y.lower_sq || (x.lower_sq == y.lower_sq && (x.i < y.i || (x.i == y.i && x.j < y.j)));
  });
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : cand) {
    if (c.lower_sq >= best) break;
    best = std::min(best, kernels::min_distance_sq(ca.chunk(c.i), cb.chunk(c.j)));
  }
  return std::sqrt(best);
}

double default_grid_step(const GlobalParams& params) { return std::min(params.r_a / 10.0, 0.5); }

}  // namespace skyhw
