#pragma once

// Corridor geometry of the sky highway: airways (cuboids split into two
// carriageways and an isolation strip), cylindrical intersections, and the
// analytic separation conditions that make cross-carriageway conflicts
// impossible.

#include <array>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "skyhw/vec3.hpp"

namespace skyhw {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Segment {
  Vec3 start;
  Vec3 end;

  double length() const { return distance(start, end); }
  Vec3 at(double s) const { return start + (end - start) * s; }
};

// Network-wide separation and size parameters, all in meters.
struct GlobalParams {
  double r_a = 3.0;   // separation distance
  double r_aw = 9.0;  // carriageway width
  double r_is = 4.0;  // isolation strip width
  double h_aw = 9.0;  // airway height
  double r_t = 5.0;   // turning radius

  // Throws GeometryError unless every field is finite and > 0.
  void validate() const;

  double total_width() const { return 2.0 * r_aw + r_is; }
  // Lateral distance from the center line to an outer curb.
  double half_width() const { return r_aw + 0.5 * r_is; }
  // Lateral offset of a carriageway's center line.
  double lane_offset() const { return 0.5 * r_is + 0.5 * r_aw; }
  // Diagonal of the airway cross-section, sqrt(h^2 + (2 r_aw + r_is)^2).
  double cross_section_diagonal() const;

  bool operator==(const GlobalParams&) const = default;
};

// Lateral axis of a corridor with the given (unit) direction: the right-hand
// side for a traveler heading along it. Level directions use dir x up; the
// vertical axis has no natural "right", so risers use +x going up and -x
// going down (opposite directions always get opposite sides).
Vec3 right_of(const Vec3& dir);

// Orthonormal frame attached to a center line: p = origin + axis*t + lateral*c1 + vertical*c2.
struct AirwayFrame {
  Vec3 origin;
  Vec3 axis;
  Vec3 lateral;
  Vec3 vertical;
  double length = 0.0;

  struct Local {
    double t = 0.0;
    double lat = 0.0;
    double vert = 0.0;
  };

  static AirwayFrame from_segment(const Segment& s);

  Local to_local(const Vec3& p) const {
    const Vec3 d = p - origin;
    return {d.dot(axis), d.dot(lateral), d.dot(vertical)};
  }
  Vec3 to_world(double t, double lat, double vert) const {
    return origin + axis * t + lateral * lat + vertical * vert;
  }
};

// Cuboid aligned with a frame: t in [t0,t1], lat in [lat0,lat1], vert in [v0,v1].
struct FrameBox {
  AirwayFrame frame;
  double t0 = 0.0, t1 = 0.0;
  double lat0 = 0.0, lat1 = 0.0;
  double v0 = 0.0, v1 = 0.0;

  bool contains(const Vec3& p) const;
  // Euclidean distance from p to the box; 0 inside.
  double distance_to(const Vec3& p) const;
  // Points on all six faces with spacing <= step (edges included).
  std::vector<Vec3> sample_surface(double step) const;
};

enum class Side { Left, Right };
enum class SubRegion { Outside, LeftCarriageway, IsolationStrip, RightCarriageway };

std::string to_string(SubRegion r);

// One curb face of a carriageway: points with (p - point).inward >= 0 are on the inside.
struct CurbPlane {
  Vec3 point;
  Vec3 inward;
};

class AirwayGeometry {
 public:
  AirwayGeometry(const Segment& center_line, const GlobalParams& params);

  const Segment& center_line() const { return center_line_; }
  const GlobalParams& params() const { return params_; }
  const AirwayFrame& frame() const { return frame_; }
  const Vec3& direction() const { return frame_.axis; }
  double length() const { return frame_.length; }

  FrameBox box() const;
  FrameBox carriageway(Side side) const;
  FrameBox isolation_strip() const;
  // The four curbs (outer, strip-side, floor, ceiling) of a carriageway.
  std::array<CurbPlane, 4> curbs(Side side) const;

  bool contains(const Vec3& p) const { return box().contains(p); }
  SubRegion classify(const Vec3& p) const;

  // Same corridor traversed the other way (frame flipped, right/left swap).
  AirwayGeometry reversed() const;

 private:
  Segment center_line_;
  GlobalParams params_;
  AirwayFrame frame_;
};

enum class IntersectionKind { Connection, Hub };

// Vertical cylinder centered on the node, spanning center.z +- height/2.
struct IntersectionGeometry {
  Vec3 center;
  double radius = 0.0;
  double height = 0.0;
  IntersectionKind kind = IntersectionKind::Hub;
  std::vector<int> airway_ids;

  bool contains(const Vec3& p) const;
  double distance_to(const Vec3& p) const;
};

// Pass/fail of one analytic condition. `value` is the quantity compared against
// `threshold`; every condition is strict (value > threshold).
struct CheckResult {
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string note;

  double margin() const { return value - threshold; }
};

// Exact minimum distance between two closed segments.
double segment_segment_distance(const Segment& a, const Segment& b);

// Distance from a point to a closed segment.
double point_segment_distance(const Vec3& p, const Segment& s);

// Carriageways of one airway are r_a apart iff the strip is wider than r_a.
CheckResult check_prop1(const GlobalParams& params);

// r_a + sqrt(h_aw^2 + (2 r_aw + r_is)^2)
double prop2_threshold(const GlobalParams& params);

// Two airways are r_a apart if their center lines are farther apart than prop2_threshold.
CheckResult check_prop2(const AirwayGeometry& i, const AirwayGeometry& j);

// Angle between two airways whose center lines both end at the same intersection
// center, from the normalized inner product of their directions. In (0, pi].
double airway_pair_angle(const AirwayGeometry& i, const AirwayGeometry& j);

// arcsin((r_aw + r_is/2) / r_it): angular half-width of an airway seen from the
// intersection center at the cylinder wall.
double half_width_angle(double r_it, const GlobalParams& params);

struct Prop3Options {
  double min_pair_angle = 20.0 * std::numbers::pi / 180.0;
};

struct PairThreshold {
  std::size_t j = 0;
  std::size_t k = 0;
  double angle = 0.0;
  double required_radius = 0.0;
};

struct Prop3Result {
  bool pass = false;
  double radius = 0.0;
  // max over pairs of the geometric bound and r_t
  double required_radius = 0.0;
  std::vector<PairThreshold> pairs;
  std::string failure;
};

// Evaluates the intersection-radius condition at the intersection's radius.
// Airways must be level, co-altitude, and end at the intersection center.
Prop3Result check_prop3(const IntersectionGeometry& node, std::span<const AirwayGeometry> airways,
                        const Prop3Options& options = {});

// Smallest radius (within tol) for which check_prop3 passes, by bisection.
double solve_min_intersection_radius(std::span<const AirwayGeometry> airways, const GlobalParams& params,
                                     double tol, const Prop3Options& options = {});

// The two chords that bound the bent isolation strip inside a connection, on the
// middle level plane. `first` is the inner curb of traffic turning from airway a
// into airway b, `second` the inner curb of traffic going from b into a.
struct GateSegments {
  Segment first;
  Segment second;
};

// Airways a and b must end at `center`.
GateSegments connection_gates(const Vec3& center, double radius, const AirwayGeometry& a,
                              const AirwayGeometry& b);

struct Prop4Result {
  bool pass = false;
  double angle = 0.0;
  double gate_distance = 0.0;       // r_is * sin(angle/2)
  double required_strip = 0.0;      // r_a / sin(angle/2)
  std::string failure;
};

// Connection condition r_is > r_a / sin(theta/2).
Prop4Result check_prop4(const IntersectionGeometry& conn, const AirwayGeometry& a, const AirwayGeometry& b);

}  // namespace skyhw
