#include "skyhw/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace skyhw {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Excess of v outside [lo, hi]; 0 inside.
double excess(double v, double lo, double hi) {
  if (v < lo) return lo - v;
  if (v > hi) return v - hi;
  return 0.0;
}

std::size_t intervals(double extent, double step) {
  if (extent <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(extent / step));
}

void sample_face(const AirwayFrame& f, int fixed_axis, double fixed, double a0, double a1, double b0, double b1,
                 double step, std::vector<Vec3>& out) {
  const std::size_t na = intervals(a1 - a0, step);
  const std::size_t nb = intervals(b1 - b0, step);
  for (std::size_t i = 0; i <= na; ++i) {
    const double a = na == 0 ? a0 : a0 + (a1 - a0) * static_cast<double>(i) / static_cast<double>(na);
    for (std::size_t j = 0; j <= nb; ++j) {
      const double b = nb == 0 ? b0 : b0 + (b1 - b0) * static_cast<double>(j) / static_cast<double>(nb);
      switch (fixed_axis) {
        case 0: out.push_back(f.to_world(fixed, a, b)); break;
        case 1: out.push_back(f.to_world(a, fixed, b)); break;
        default: out.push_back(f.to_world(a, b, fixed)); break;
      }
    }
  }
}

}  // namespace

void GlobalParams::validate() const {
  if (!positive_finite(r_a) || !positive_finite(r_aw) || !positive_finite(r_is) || !positive_finite(h_aw) ||
      !positive_finite(r_t)) {
    throw GeometryError("global parameters must all be finite and > 0");
  }
}

double GlobalParams::cross_section_diagonal() const {
  const double w = total_width();
  return std::sqrt(h_aw * h_aw + w * w);
}

Vec3 right_of(const Vec3& dir) {
  const Vec3 c = dir.cross(kUp);
  if (c.norm() > 1e-9) return c.normalized();
  return dir.z >= 0.0 ? Vec3{1.0, 0.0, 0.0} : Vec3{-1.0, 0.0, 0.0};
}

AirwayFrame AirwayFrame::from_segment(const Segment& s) {
  AirwayFrame f;
  f.origin = s.start;
  f.length = s.length();
  if (!(f.length > 0.0)) throw GeometryError("degenerate segment: zero length");
  f.axis = (s.end - s.start) / f.length;
  f.lateral = right_of(f.axis);
  f.vertical = f.lateral.cross(f.axis).normalized();
  return f;
}

bool FrameBox::contains(const Vec3& p) const {
  const auto l = frame.to_local(p);
  return l.t >= t0 && l.t <= t1 && l.lat >= lat0 && l.lat <= lat1 && l.vert >= v0 && l.vert <= v1;
}

double FrameBox::distance_to(const Vec3& p) const {
  const auto l = frame.to_local(p);
  const double et = excess(l.t, t0, t1);
  const double el = excess(l.lat, lat0, lat1);
  const double ev = excess(l.vert, v0, v1);
  return std::sqrt(et * et + el * el + ev * ev);
}

std::vector<Vec3> FrameBox::sample_surface(double step) const {
  if (!(step > 0.0)) throw GeometryError("sampling step must be > 0");
  std::vector<Vec3> out;
  for (double t : {t0, t1}) sample_face(frame, 0, t, lat0, lat1, v0, v1, step, out);
  for (double lat : {lat0, lat1}) sample_face(frame, 1, lat, t0, t1, v0, v1, step, out);
  for (double v : {v0, v1}) sample_face(frame, 2, v, t0, t1, lat0, lat1, step, out);
  return out;
}

std::string to_string(SubRegion r) {
  switch (r) {
    case SubRegion::Outside: return "outside";
    case SubRegion::LeftCarriageway: return "left-carriageway";
    case SubRegion::IsolationStrip: return "isolation-strip";
    case SubRegion::RightCarriageway: return "right-carriageway";
  }
  return "?";
}

AirwayGeometry::AirwayGeometry(const Segment& center_line, const GlobalParams& params)
    : center_line_(center_line), params_(params), frame_(AirwayFrame::from_segment(center_line)) {
  params_.validate();
}

FrameBox AirwayGeometry::box() const {
  const double hw = params_.half_width();
  const double hh = 0.5 * params_.h_aw;
  return {frame_, 0.0, frame_.length, -hw, hw, -hh, hh};
}

FrameBox AirwayGeometry::carriageway(Side side) const {
  const double in = 0.5 * params_.r_is;
  const double out = params_.half_width();
  const double hh = 0.5 * params_.h_aw;
  if (side == Side::Right) return {frame_, 0.0, frame_.length, in, out, -hh, hh};
  return {frame_, 0.0, frame_.length, -out, -in, -hh, hh};
}

FrameBox AirwayGeometry::isolation_strip() const {
  const double in = 0.5 * params_.r_is;
  const double hh = 0.5 * params_.h_aw;
  return {frame_, 0.0, frame_.length, -in, in, -hh, hh};
}

std::array<CurbPlane, 4> AirwayGeometry::curbs(Side side) const {
  const FrameBox cw = carriageway(side);
  const Vec3 mid_t = frame_.axis * (0.5 * frame_.length);
  const Vec3 lat = frame_.lateral;
  const Vec3 up = frame_.vertical;
  const Vec3 o = frame_.origin + mid_t;
  return {{
      {o + lat * cw.lat0, lat},
      {o + lat * cw.lat1, -lat},
      {o + up * cw.v0, up},
      {o + up * cw.v1, -up},
  }};
}

SubRegion AirwayGeometry::classify(const Vec3& p) const {
  if (!contains(p)) return SubRegion::Outside;
  const double lat = frame_.to_local(p).lat;
  const double in = 0.5 * params_.r_is;
  if (lat >= in) return SubRegion::RightCarriageway;
  if (lat <= -in) return SubRegion::LeftCarriageway;
  return SubRegion::IsolationStrip;
}

AirwayGeometry AirwayGeometry::reversed() const {
  return AirwayGeometry(Segment{center_line_.end, center_line_.start}, params_);
}

bool IntersectionGeometry::contains(const Vec3& p) const {
  const Vec3 d = p - center;
  return d.horizontal().norm() <= radius && std::abs(d.z) <= 0.5 * height;
}

double IntersectionGeometry::distance_to(const Vec3& p) const {
  const Vec3 d = p - center;
  const double er = std::max(0.0, d.horizontal().norm() - radius);
  const double ez = std::max(0.0, std::abs(d.z) - 0.5 * height);
  return std::sqrt(er * er + ez * ez);
}

double point_segment_distance(const Vec3& p, const Segment& s) {
  const Vec3 d = s.end - s.start;
  const double len2 = d.norm2();
  if (!(len2 > 0.0)) throw GeometryError("degenerate segment: zero length");
  const double t = clamp01((p - s.start).dot(d) / len2);
  return distance(p, s.start + d * t);
}

double segment_segment_distance(const Segment& a, const Segment& b) {
  // Closest points of two segments (clamped parametric form).
  const Vec3 d1 = a.end - a.start;
  const Vec3 d2 = b.end - b.start;
  const Vec3 r = a.start - b.start;
  const double aa = d1.norm2();
  const double ee = d2.norm2();
  if (!(aa > 0.0) || !(ee > 0.0)) throw GeometryError("degenerate segment: zero length");
  const double f = d2.dot(r);
  const double c = d1.dot(r);
  const double bb = d1.dot(d2);
  const double denom = aa * ee - bb * bb;

  double s = 0.0;
  // Parallel (or nearly): any s works for the infinite lines; start at 0 and
  // let the clamping passes below find the true pair.
  if (denom > 1e-14 * aa * ee) s = clamp01((bb * f - c * ee) / denom);
  double t = (bb * s + f) / ee;
  if (t < 0.0) {
    t = 0.0;
    s = clamp01(-c / aa);
  } else if (t > 1.0) {
    t = 1.0;
    s = clamp01((bb - c) / aa);
  }
  const double d = distance(a.start + d1 * s, b.start + d2 * t);
  // Endpoint-to-segment distances guard the parallel branch against cancellation.
  return std::min({d, point_segment_distance(a.start, b), point_segment_distance(a.end, b),
                   point_segment_distance(b.start, a), point_segment_distance(b.end, a)});
}

CheckResult check_prop1(const GlobalParams& params) {
  CheckResult r;
  r.value = params.r_is;
  r.threshold = params.r_a;
  r.pass = params.r_is > params.r_a;
  if (!r.pass) r.note = "isolation strip not wider than separation distance";
  return r;
}

double prop2_threshold(const GlobalParams& params) { return params.r_a + params.cross_section_diagonal(); }

CheckResult check_prop2(const AirwayGeometry& i, const AirwayGeometry& j) {
  if (!(i.params() == j.params())) throw GeometryError("airways use different global parameters");
  CheckResult r;
  r.value = segment_segment_distance(i.center_line(), j.center_line());
  r.threshold = prop2_threshold(i.params());
  r.pass = r.value > r.threshold;
  if (!r.pass) r.note = "center lines too close";
  return r;
}

double airway_pair_angle(const AirwayGeometry& i, const AirwayGeometry& j) {
  const double scale = std::max({1.0, i.length(), j.length()});
  if (distance(i.center_line().end, j.center_line().end) > 1e-9 * scale) {
    throw GeometryError("airways do not end at a common intersection center");
  }
  const double theta = angle_between(i.direction(), j.direction());
  if (!(theta > 1e-12)) throw GeometryError("airways overlap");
  return theta;
}

double half_width_angle(double r_it, const GlobalParams& params) {
  const double w = params.half_width();
  if (!(r_it > w)) throw GeometryError("radius smaller than airway half-width");
  return std::asin(w / r_it);
}

Prop3Result check_prop3(const IntersectionGeometry& node, std::span<const AirwayGeometry> airways,
                        const Prop3Options& options) {
  Prop3Result res;
  res.radius = node.radius;
  if (airways.empty()) {
    res.failure = "no airways";
    return res;
  }
  const GlobalParams& gp = airways.front().params();
  for (const auto& a : airways) {
    if (!(a.params() == gp)) throw GeometryError("airways use different global parameters");
    const double scale = std::max(1.0, a.length());
    if (std::abs(a.direction().z) > 1e-9 || std::abs(a.center_line().end.z - node.center.z) > 1e-9 * scale) {
      throw GeometryError("intersection airways must be level and at the node altitude");
    }
    if (distance(a.center_line().end, node.center) > 1e-9 * scale) {
      throw GeometryError("airway does not end at the intersection center");
    }
  }

  const double bound_num = prop2_threshold(gp);
  double cos_half = 0.0;
  const bool radius_ok = node.radius > gp.half_width();
  if (radius_ok) cos_half = std::cos(half_width_angle(node.radius, gp));

  double worst = gp.r_t;
  bool angles_ok = true;
  for (std::size_t j = 0; j < airways.size(); ++j) {
    for (std::size_t k = j + 1; k < airways.size(); ++k) {
      PairThreshold pt;
      pt.j = j;
      pt.k = k;
      pt.angle = airway_pair_angle(airways[j], airways[k]);
      if (pt.angle < options.min_pair_angle) angles_ok = false;
      pt.required_radius = radius_ok ? bound_num / (2.0 * cos_half * std::sin(0.5 * pt.angle))
                                     : std::numeric_limits<double>::infinity();
      worst = std::max(worst, pt.required_radius);
      res.pairs.push_back(pt);
    }
  }
  res.required_radius = worst;

  double geometric = 0.0;
  for (const auto& p : res.pairs) geometric = std::max(geometric, p.required_radius);

  if (!angles_ok) {
    res.failure = "angle too small";
  } else if (!radius_ok) {
    res.failure = "radius smaller than airway half-width";
  } else if (!(node.radius > geometric)) {
    res.failure = "radius below separation bound";
  } else if (!(node.radius >= gp.r_t)) {
    res.failure = "radius below turning radius";
  }
  res.pass = res.failure.empty();
  return res;
}

double solve_min_intersection_radius(std::span<const AirwayGeometry> airways, const GlobalParams& params,
                                     double tol, const Prop3Options& options) {
  if (airways.empty()) throw GeometryError("no airways");
  if (!(tol > 0.0)) throw GeometryError("tolerance must be > 0");
  for (std::size_t j = 0; j < airways.size(); ++j) {
    for (std::size_t k = j + 1; k < airways.size(); ++k) {
      if (airway_pair_angle(airways[j], airways[k]) < options.min_pair_angle) {
        throw GeometryError("angle too small");
      }
    }
  }
  IntersectionGeometry probe;
  probe.center = airways.front().center_line().end;
  probe.height = params.h_aw;
  auto passes = [&](double r) {
    probe.radius = r;
    return check_prop3(probe, airways, options).pass;
  };

  double lo = params.half_width() * (1.0 + 1e-12);
  double hi = std::max(10.0 * prop2_threshold(params), 2.0 * params.r_t);
  int expand = 0;
  while (!passes(hi)) {
    hi *= 2.0;
    if (++expand > 60) throw GeometryError("intersection radius search did not converge");
  }
  if (passes(lo)) return lo;
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? hi : lo) = mid;
  }
  if (hi - lo > tol) throw GeometryError("intersection radius search did not converge");
  return hi;
}

GateSegments connection_gates(const Vec3& center, double radius, const AirwayGeometry& a, const AirwayGeometry& b) {
  const GlobalParams& gp = a.params();
  const double h = 0.5 * gp.r_is;
  if (!(radius > h)) throw GeometryError("connection radius must exceed half the strip width");
  const double s = std::sqrt(radius * radius - h * h);
  const Vec3 na = a.direction();  // toward center
  const Vec3 nb = b.direction();  // toward center
  auto strip_edge_in = [&](const Vec3& inbound) { return center - inbound * s + right_of(inbound) * h; };
  auto strip_edge_out = [&](const Vec3& outbound) { return center + outbound * s + right_of(outbound) * h; };
  GateSegments g;
  g.first = {strip_edge_in(na), strip_edge_out(-nb)};
  g.second = {strip_edge_in(nb), strip_edge_out(-na)};
  return g;
}

Prop4Result check_prop4(const IntersectionGeometry& conn, const AirwayGeometry& a, const AirwayGeometry& b) {
  if (conn.kind != IntersectionKind::Connection) throw GeometryError("gate condition applies to connections only");
  Prop4Result r;
  const GlobalParams& gp = a.params();
  double theta = 0.0;
  try {
    theta = airway_pair_angle(a, b);
  } catch (const GeometryError&) {
    r.failure = "connection angle degenerate";
    return r;
  }
  r.angle = theta;
  const double sh = std::sin(0.5 * theta);
  if (!(sh > 1e-12)) {
    r.failure = "connection angle degenerate";
    return r;
  }
  r.gate_distance = gp.r_is * sh;
  r.required_strip = gp.r_a / sh;
  r.pass = gp.r_is > r.required_strip;
  if (!r.pass) {
    std::ostringstream os;
    os << "strip " << gp.r_is << " not above " << r.required_strip;
    r.failure = os.str();
  }
  return r;
}

}  // namespace skyhw
