#include <atomic>
#include <cstdlib>
#include <string_view>

#include "skyhw/kernels.hpp"

namespace skyhw::kernels {

namespace {

Isa detect() {
  if (const char* env = std::getenv("SKYHW_FORCE_SCALAR"); env && std::string_view(env) == "1") {
    return Isa::Scalar;
  }
  return avx2_supported() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool avx2_supported() {
#if defined(SKYHW_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok;
#else
  return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_supported()) return;
  current().store(isa, std::memory_order_relaxed);
}

double min_distance_sq(PointsView a, PointsView b) {
#if defined(SKYHW_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::min_distance_sq(a, b);
#endif
  return scalar::min_distance_sq(a, b);
}

void within_radius(PointsView pts, const Vec3& q, double radius_sq, std::uint32_t base,
                   std::vector<std::uint32_t>& out) {
#if defined(SKYHW_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::within_radius(pts, q, radius_sq, base, out);
#endif
  scalar::within_radius(pts, q, radius_sq, base, out);
}

#if !defined(SKYHW_HAVE_AVX2)
namespace avx2 {
double min_distance_sq(PointsView a, PointsView b) { return scalar::min_distance_sq(a, b); }
void within_radius(PointsView pts, const Vec3& q, double radius_sq, std::uint32_t base,
                   std::vector<std::uint32_t>& out) {
  scalar::within_radius(pts, q, radius_sq, base, out);
}
}  // namespace avx2
#endif

}  // namespace skyhw::kernels
