#pragma once

// Brute-force set distance by surface sampling. Independent of the analytic
// separation checks in geometry.hpp, which it is used to cross-examine.

#include <functional>
#include <vector>

#include "skyhw/geometry.hpp"

namespace skyhw {

// Produces points covering a set's boundary with spacing <= step.
using PointSampler = std::function<std::vector<Vec3>(double step)>;

PointSampler box_sampler(const FrameBox& box);

// Boundary of (airway cuboid) minus (closed intersection cylinder).
PointSampler out_of_cylinder_sampler(const AirwayGeometry& airway, const IntersectionGeometry& node);

// min ||x - y|| over sampled pairs. For disjoint compact sets the closest pair
// lies on the boundaries, so boundary samples suffice; the result overestimates
// the true distance by at most sampling_error(step). Throws GeometryError
// ("empty geometry") when either sampler yields nothing.
double set_distance_sampled(const PointSampler& a, const PointSampler& b, double step);

inline double sampling_error(double step) { return step * 1.7320508075688772; }

// min(r_a / 10, 0.5 m)
double default_grid_step(const GlobalParams& params);

}  // namespace skyhw
