#pragma once

#include <array>
#include <vector>

#include "slamsafe/geometry.hpp"

namespace slamsafe {

// Quintic Bernstein (degree-5 Bezier) segment. Every point of the curve
// lies in the convex hull of the six control points.
struct TrajectorySegment {
    std::array<Vec2, 6> control_points{};
    double sample_spacing{1.0};
};

// Curve point at parameter t. Throws RangeError outside [0, 1].
Vec2 bernstein_eval(const TrajectorySegment& seg, double t);

// Segment from `from` to `to` whose end tangents follow the given unit
// directions. `handle` is the fraction of the chord length given to each
// tangent handle; interior control points sit at one and two handle lengths
// from the nearer endpoint. handle = 0.2 with both tangents along the chord
// reproduces the straight chord with linear parametrization; handle = 0
// collapses onto the chord regardless of the tangents.
TrajectorySegment make_segment(const Vec2& from, const Vec2& to, const Vec2& tangent_from,
                               const Vec2& tangent_to, double handle = 0.2);

// Polyline arc length at the given parameter resolution.
double arc_length(const TrajectorySegment& seg, int resolution = 256);

// Curve points at equal arc-length spacing: the count is round(length /
// spacing) (at least 1), so every interval lies within [spacing/2,
// 3*spacing/2] whenever the curve is at least spacing/2 long. Excludes the
// start point, ends exactly at the final control point.
std::vector<Vec2> sample_arclength(const TrajectorySegment& seg, double spacing,
                                   int resolution = 256);

}  // namespace slamsafe
