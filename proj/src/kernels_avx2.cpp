// Compiled with -mavx2 (see src/CMakeLists.txt); only called after a CPUID check.

#include <immintrin.h>

#include <algorithm>
#include <limits>

#include "skyhw/kernels.hpp"

namespace skyhw::kernels::avx2 {

namespace {

inline __m256d sq_dist(__m256d bx, __m256d by, __m256d bz, __m256d ax, __m256d ay, __m256d az) {
  const __m256d dx = _mm256_sub_pd(bx, ax);
  const __m256d dy = _mm256_sub_pd(by, ay);
  const __m256d dz = _mm256_sub_pd(bz, az);
  // Same association as the scalar path: (dx^2 + dy^2) + dz^2, no FMA.
  return _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)),
                       _mm256_mul_pd(dz, dz));
}

inline double hmin(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
}

}  // namespace

double min_distance_sq(PointsView a, PointsView b) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t nb = b.size();
  const std::size_t nb4 = nb & ~std::size_t{3};
  for (std::size_t i = 0; i < a.size(); ++i) {
    const __m256d ax = _mm256_set1_pd(a.x[i]);
    const __m256d ay = _mm256_set1_pd(a.y[i]);
    const __m256d az = _mm256_set1_pd(a.z[i]);
    __m256d vbest = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < nb4; j += 4) {
      const __m256d d2 = sq_dist(_mm256_loadu_pd(&b.x[j]), _mm256_loadu_pd(&b.y[j]),
                                 _mm256_loadu_pd(&b.z[j]), ax, ay, az);
      vbest = _mm256_min_pd(vbest, d2);
    }
    best = std::min(best, hmin(vbest));
    for (std::size_t j = nb4; j < nb; ++j) {
      const double dx = b.x[j] - a.x[i];
      const double dy = b.y[j] - a.y[i];
      const double dz = b.z[j] - a.z[i];
      best = std::min(best, (dx * dx + dy * dy) + dz * dz);
    }
  }
  return best;
}

void within_radius(PointsView pts, const Vec3& q, double radius_sq, std::uint32_t base,
                   std::vector<std::uint32_t>& out) {
  const std::size_t n = pts.size();
  const std::size_t n4 = n & ~std::size_t{3};
  const __m256d qx = _mm256_set1_pd(q.x);
  const __m256d qy = _mm256_set1_pd(q.y);
  const __m256d qz = _mm256_set1_pd(q.z);
  const __m256d r2 = _mm256_set1_pd(radius_sq);
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d d2 = sq_dist(_mm256_loadu_pd(&pts.x[i]), _mm256_loadu_pd(&pts.y[i]),
                               _mm256_loadu_pd(&pts.z[i]), qx, qy, qz);
    int mask = _mm256_movemask_pd(_mm256_cmp_pd(d2, r2, _CMP_LE_OQ));
    while (mask != 0) {
      const int lane = __builtin_ctz(static_cast<unsigned>(mask));
      out.push_back(base + static_cast<std::uint32_t>(i + lane));
      mask &= mask - 1;
    }
  }
  for (std::size_t i = n4; i < n; ++i) {
    const double dx = pts.x[i] - q.x;
    const double dy = pts.y[i] - q.y;
    const double dz = pts.z[i] - q.z;
    if ((dx * dx + dy * dy) + dz * dz <= radius_sq) out.push_back(base + static_cast<std::uint32_t>(i));
  }
}

}  // namespace skyhw::kernels::avx2
